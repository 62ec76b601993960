#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace divchain {

enum class Format { csv, jsonl };

Format parse_format(const std::string& s);

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// 17 significant digits, or C99 hexadecimal when hex is set.
std::string format_double(double x, bool hex = false);

// CSV with a header row, or one JSON object per line.
void write_table(std::ostream& os, const Table& t, Format f, bool hex = false);

// Reads CSV written by write_table. Numeric-looking fields become doubles (decimal or hex),
// integers without a sign or point become uint64, everything else stays a string.
Table read_csv(std::istream& is);

// JSON-lines written by write_table; hex-mode doubles are decoded back from their strings.
Table read_jsonl(std::istream& is);

}  // namespace divchain
