#pragma once

#include "divchain/arith.hpp"

namespace divchain::test {

// One sieve shared by every test case.
inline const FactorTable& table()
{
    static const FactorTable t(1000000);
    return t;
}

}  // namespace divchain::test
