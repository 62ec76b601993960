#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "divchain/error.hpp"

namespace divchain {

struct QuadResult {
    double value = 0;
    double error = 0;  // sum over panels of |Kronrod - Gauss|
    int panels = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * kWgk[7], resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double f1 = f(c - dx), f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace detail

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]: the panel with the largest
// |K - G| is bisected until the summed estimate drops below abs_tol.
// Nodes are interior, so integrands singular at an endpoint are never evaluated there.
// The initial panels are given by ascending breakpoints.
template <class F>
QuadResult integrate(F&& f, const std::vector<double>& breaks, double abs_tol, int max_panels = 4000)
{
    if (breaks.size() < 2) return {};
    std::priority_queue<detail::Panel> heap;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] > breaks[i]) heap.push(detail::gk15(f, breaks[i], breaks[i + 1]));
    int panels = static_cast<int>(heap.size());
    auto total_error = [&] {
        auto copy = heap;
        double e = 0;
        while (!copy.empty()) {
            e += copy.top().error;
            copy.pop();
        }
        return e;
    };
    double err = total_error();
    while (err > abs_tol && panels < max_panels) {
        detail::Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        detail::Panel l = detail::gk15(f, worst.a, mid), r = detail::gk15(f, mid, worst.b);
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
        if (panels % 64 == 0) err = total_error();  // resync against drift
    }
    QuadResult out;
    out.panels = panels;
    std::vector<double> vals;
    while (!heap.empty()) {
        vals.push_back(heap.top().value);
        out.error += heap.top().error;
        heap.pop();
    }
    // smallest error estimates last out of the heap; add those first
    for (auto it = vals.rbegin(); it != vals.rend(); ++it) out.value += *it;
    if (out.error > abs_tol) throw verification_error("quadrature did not reach requested tolerance");
    return out;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, int initial_panels = 4, int max_panels = 4000)
{
    std::vector<double> breaks(static_cast<std::size_t>(initial_panels) + 1);
    for (int i = 0; i <= initial_panels; ++i) breaks[i] = a + (b - a) * i / initial_panels;
    breaks.back() = b;
    return integrate(f, breaks, abs_tol, max_panels);
}

}  // namespace divchain
