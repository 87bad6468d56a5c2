#pragma once

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qubus {

// Adaptive Gauss-Kronrod integration over [lo, hi], pre-split at the given
// interior breakpoints. The integrands here are mixtures of unit-variance
// Gaussians that can sit far apart; splitting at the peak means keeps the
// adaptive scheme from stepping over a narrow peak entirely.
template <typename F>
double integrate(F&& f, double lo, double hi, std::span<const double> breakpoints = {},
                 double* err_out = nullptr) {
    namespace bq = boost::math::quadrature;
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= 0.0) continue;
        double err = 0.0;
        total += bq::gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12, &err);
        err_total += err;
    }
    if (err_out) *err_out = err_total;
    return total;
}

template <typename F>
std::complex<double> integrate_complex(F&& f, double lo, double hi,
                                       std::span<const double> breakpoints = {}) {
    double re = integrate([&](double x) { return f(x).real(); }, lo, hi, breakpoints);
    double im = integrate([&](double x) { return f(x).imag(); }, lo, hi, breakpoints);
    return {re, im};
}

}  // namespace qubus
