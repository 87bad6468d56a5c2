#pragma once

// Independent reference implementations used only by tests. Everything here
// recomputes library quantities by a different route: truncated Fock-space
// expansions for coherent-state math, a Schmidt-rank classifier for
// entanglement labels, and exact hitting-time / restart recurrences for the
// growth models.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qubus/core.hpp"
#include "qubus/gates.hpp"

namespace oracles {

using qubus::Amp;

// Fock coefficients of |beta>, truncated where the tail is ~1e-16 of the
// norm. The recurrence c_{n+1} = c_n beta / sqrt(n+1) avoids factorials.
inline std::vector<Amp> fock_coherent(Amp beta) {
    const double m = std::abs(beta);
    const int n_max = static_cast<int>(std::ceil(m * m + 8.0 * m + 20.0));
    std::vector<Amp> c(static_cast<std::size_t>(n_max) + 1);
    c[0] = Amp{std::exp(-0.5 * m * m), 0.0};
    for (int n = 0; n < n_max; ++n) {
        c[n + 1] = c[n] * beta / std::sqrt(static_cast<double>(n + 1));
    }
    return c;
}

inline Amp fock_overlap(Amp beta1, Amp beta2) {
    const auto c1 = fock_coherent(beta1);
    const auto c2 = fock_coherent(beta2);
    const std::size_t n = std::min(c1.size(), c2.size());
    Amp s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(c1[i]) * c2[i];
    return s;
}

// Oscillator eigenfunctions in the X(0) = a + a^dag eigenbasis, from the
// three-term recurrence psi_{n+1} = (x psi_n - sqrt(n) psi_{n-1})/sqrt(n+1),
// psi_0 = (2 pi)^{-1/4} exp(-x^2/4).
inline std::vector<double> oscillator_psi(double x, int n_max) {
    std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
    psi[0] = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * x * x);
    if (n_max >= 1) psi[1] = x * psi[0];
    for (int n = 1; n < n_max; ++n) {
        psi[n + 1] = (x * psi[n] - std::sqrt(static_cast<double>(n)) * psi[n - 1]) /
                     std::sqrt(static_cast<double>(n + 1));
    }
    return psi;
}

// <x|beta> in the P = X(pi/2) eigenbasis via the mode rotation
// <x|_P |beta> = <x|_0 |-i beta>, summed over the Fock expansion.
inline Amp fock_quadrature_amplitude(double x, Amp beta) {
    const auto c = fock_coherent(Amp{0.0, -1.0} * beta);
    const auto psi = oscillator_psi(x, static_cast<int>(c.size()) - 1);
    Amp s{0.0, 0.0};
    for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * psi[n];
    return s;
}

// Entanglement class by Schmidt rank across every single-qubit bipartition:
// qubit q is separable iff its 2 x 2^(n-1) coefficient matrix has rank 1,
// detected through the determinant of the 2x2 Gram matrix.
inline qubus::OutcomeLabel schmidt_label(const qubus::QubitState& psi) {
    if (psi.n == 1) return qubus::OutcomeLabel::PRODUCT;
    int separable = 0;
    for (int q = 0; q < psi.n; ++q) {
        const std::uint32_t mask = 1u << (psi.n - 1 - q);
        Amp g00{0.0, 0.0}, g11{0.0, 0.0}, g01{0.0, 0.0};
        for (const auto& [bits_a, a] : psi.amps) {
            for (const auto& [bits_b, b] : psi.amps) {
                if ((bits_a & ~mask) != (bits_b & ~mask)) continue;
                const bool row_a = bits_a & mask;
                const bool row_b = bits_b & mask;
                const Amp term = a * std::conj(b);
                if (!row_a && !row_b) g00 += term;
                if (row_a && row_b) g11 += term;
                if (!row_a && row_b) g01 += term;
            }
        }
        const double det = std::abs(g00 * g11 - g01 * std::conj(g01));
        if (det < 1e-9) ++separable;
    }
    if (separable == psi.n) return qubus::OutcomeLabel::PRODUCT;
    if (separable == 0) {
        return psi.n == 2 ? qubus::OutcomeLabel::BELL : qubus::OutcomeLabel::GHZ;
    }
    return qubus::OutcomeLabel::BELL;
}

// Expected operations of the sequential walk with the floor at length 1:
// h_1 = 1/p, h_j = (1 + (1-p) h_{j-1})/p, total = sum of h_j for j < L.
inline double sequential_walk_ops(double p, std::int64_t L) {
    double total = 0.0;
    double h = 1.0 / p;
    total += h;
    for (std::int64_t j = 2; j < L; ++j) {
        h = (1.0 + (1.0 - p) * h) / p;
        total += h;
    }
    return L >= 2 ? total : 0.0;
}

// Expected joins of the divide-and-conquer restart process:
// E_0 = 0, E_k = (2 E_{k-1} + 1)/p.
inline double divide_conquer_ops(double p, int k) {
    double e = 0.0;
    for (int i = 0; i < k; ++i) e = (2.0 * e + 1.0) / p;
    return e;
}

}  // namespace oracles
