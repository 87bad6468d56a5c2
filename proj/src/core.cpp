#include "qubus/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qubus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2*pi)^(-1/4), peak amplitude scale of the quadrature wavefunction.
const double kQuadNorm = std::pow(kTwoPi, -0.25);

double norm_sq(const Amp& a) { return std::norm(a); }

bool finite(const Amp& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

void check_register_size(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("register size must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " + std::to_string(n));
    }
}

// Normalizes in place, pruning negligible amplitudes. The caller is expected
// to hand in something already normalized up to rounding; anything further
// than 1e-9 off is treated as a contract violation.
void normalize_sparse(std::vector<std::pair<std::uint32_t, Amp>>& amps) {
    double total = 0.0;
    for (const auto& [bits, a] : amps) {
        if (!finite(a)) throw std::invalid_argument("non-finite amplitude");
        total += norm_sq(a);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("state not normalized: |amp|^2 sums to " + std::to_string(total));
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& [bits, a] : amps) a *= scale;
    std::erase_if(amps, [](const auto& e) { return std::abs(e.second) < kAmpPruneThreshold; });
    if (amps.empty()) throw std::invalid_argument("state has no support after pruning");
}

}  // namespace

double theta_from_physics(double chi, double t_int) {
    if (!std::isfinite(chi)) throw std::invalid_argument("chi must be finite");
    if (!(t_int >= 0.0) || !std::isfinite(t_int)) {
        throw std::invalid_argument("interaction time must be finite and >= 0");
    }
    return chi * t_int;
}

void GateConfig::validate() const {
    std::ostringstream err;
    auto fail = [&err](const std::string& msg) {
        if (err.tellp() > 0) err << "; ";
        err << msg;
    };

    if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be finite and >= 0");
    if (!std::isfinite(theta)) fail("theta must be finite");
    if (physics) {
        const auto& p = *physics;
        if (p.delta == 0.0) {
            fail("delta must be nonzero");
        } else {
            const double chi_expected = p.g * p.g / p.delta;
            const double chi_scale = std::max(std::abs(p.chi), std::abs(chi_expected));
            if (std::abs(p.chi - chi_expected) > 1e-12 * chi_scale) {
                fail("chi inconsistent with g^2/delta");
            }
        }
        const double theta_expected = p.chi * p.t_int;
        const double th_scale = std::max(std::abs(theta), std::abs(theta_expected));
        if (std::abs(theta - theta_expected) > 1e-12 * std::max(th_scale, 1e-300)) {
            fail("theta inconsistent with chi * t_int");
        }
        if (p.t_int < 0.0) fail("interaction time must be >= 0");
    }
    if (err.tellp() > 0) throw std::invalid_argument(err.str());
}

QubitState QubitState::basis(int n, std::uint32_t bits) {
    check_register_size(n);
    if (bits >> n) throw std::invalid_argument("basis index out of range");
    return QubitState{n, {{bits, Amp{1.0, 0.0}}}};
}

QubitState QubitState::uniform_plus(int n) {
    check_register_size(n);
    const std::uint32_t dim = 1u << n;
    const Amp a{1.0 / std::sqrt(static_cast<double>(dim)), 0.0};
    QubitState s;
    s.n = n;
    s.amps.reserve(dim);
    for (std::uint32_t b = 0; b < dim; ++b) s.amps.emplace_back(b, a);
    return s;
}

QubitState QubitState::from_dense(int n, std::span<const Amp> dense) {
    check_register_size(n);
    if (dense.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("dense amplitude vector must have 2^n entries");
    }
    std::vector<std::pair<std::uint32_t, Amp>> amps;
    for (std::uint32_t b = 0; b < dense.size(); ++b) {
        if (std::abs(dense[b]) > 0.0) amps.emplace_back(b, dense[b]);
    }
    normalize_sparse(amps);
    return QubitState{n, std::move(amps)};
}

QubitState QubitState::from_sparse(int n, std::vector<std::pair<std::uint32_t, Amp>> amps) {
    check_register_size(n);
    std::sort(amps.begin(), amps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicate basis indices
    std::vector<std::pair<std::uint32_t, Amp>> merged;
    for (const auto& [bits, a] : amps) {
        if (bits >> n) throw std::invalid_argument("basis index out of range");
        if (!merged.empty() && merged.back().first == bits) {
            merged.back().second += a;
        } else {
            merged.emplace_back(bits, a);
        }
    }
    normalize_sparse(merged);
    return QubitState{n, std::move(merged)};
}

Amp QubitState::amplitude(std::uint32_t bits) const {
    auto it = std::lower_bound(amps.begin(), amps.end(), bits,
                               [](const auto& e, std::uint32_t b) { return e.first < b; });
    if (it != amps.end() && it->first == bits) return it->second;
    return Amp{0.0, 0.0};
}

double fidelity(const QubitState& psi, const QubitState& target) {
    if (psi.n != target.n) {
        throw std::invalid_argument("fidelity requires equal register sizes");
    }
    Amp overlap{0.0, 0.0};
    auto it = psi.amps.begin();
    for (const auto& [bits, t] : target.amps) {
        while (it != psi.amps.end() && it->first < bits) ++it;
        if (it == psi.amps.end()) break;
        if (it->first == bits) overlap += std::conj(t) * it->second;
    }
    return norm_sq(overlap);
}

JointState::JointState(int n, double alpha, std::vector<Branch> branches)
    : n_(n), alpha_(alpha), branches_(std::move(branches)) {}

JointState JointState::attach_bus(const QubitState& qubits, double alpha) {
    std::vector<Branch> branches;
    branches.reserve(qubits.amps.size());
    for (const auto& [bits, a] : qubits.amps) branches.push_back({bits, a, 0.0});
    return from_branches(qubits.n, alpha, std::move(branches));
}

JointState JointState::uniform_plus(int n, double alpha) {
    return attach_bus(QubitState::uniform_plus(n), alpha);
}

JointState JointState::from_branches(int n, double alpha, std::vector<Branch> branches) {
    check_register_size(n);
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite and >= 0");
    }
    std::sort(branches.begin(), branches.end(),
              [](const Branch& a, const Branch& b) { return a.bits < b.bits; });
    double total = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const Branch& b = branches[i];
        if (b.bits >> n) throw std::invalid_argument("branch basis index out of range");
        if (i > 0 && branches[i - 1].bits == b.bits) {
            throw std::invalid_argument("duplicate basis branch: one coherent state per basis state");
        }
        if (!finite(b.amp)) throw std::invalid_argument("non-finite branch amplitude");
        if (!std::isfinite(b.bus_phase)) throw std::invalid_argument("non-finite bus phase");
        total += norm_sq(b.amp);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("joint state not normalized: |amp|^2 sums to " + std::to_string(total));
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& b : branches) b.amp *= scale;
    std::erase_if(branches, [](const Branch& b) { return std::abs(b.amp) < kAmpPruneThreshold; });
    if (branches.empty()) throw std::invalid_argument("joint state has no support after pruning");
    return JointState(n, alpha, std::move(branches));
}

QubitState JointState::qubit_amplitudes() const {
    std::vector<std::pair<std::uint32_t, Amp>> amps;
    amps.reserve(branches_.size());
    for (const auto& b : branches_) amps.emplace_back(b.bits, b.amp);
    return QubitState::from_sparse(n_, std::move(amps));
}

JointState apply_conditional_rotation(const JointState& state, int qubit, double theta) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw std::invalid_argument("qubit index out of range");
    }
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    std::vector<Branch> branches = state.branches();
    for (auto& b : branches) {
        b.bus_phase += qubit_bit(b.bits, state.num_qubits(), qubit) == 0 ? theta : -theta;
    }
    return JointState::from_branches(state.num_qubits(), state.alpha(), std::move(branches));
}

Amp coherent_overlap(Amp beta1, Amp beta2) {
    if (!finite(beta1) || !finite(beta2)) throw std::invalid_argument("non-finite coherent amplitude");
    if (std::abs(beta1) > 50.0 || std::abs(beta2) > 50.0) {
        throw std::invalid_argument("coherent amplitude magnitude exceeds 50");
    }
    const Amp exponent = -0.5 * (norm_sq(beta1) + norm_sq(beta2)) + std::conj(beta1) * beta2;
    return std::exp(exponent);
}

Amp quadrature_amplitude(double x, Amp beta) {
    if (!std::isfinite(x) || !finite(beta)) {
        throw std::invalid_argument("non-finite quadrature argument");
    }
    const double dx = x - 2.0 * beta.imag();
    const double phase = beta.real() * (beta.imag() - x);
    return kQuadNorm * std::exp(-0.25 * dx * dx) * Amp{std::cos(phase), std::sin(phase)};
}

double homodyne_pdf(const JointState& state, double x) {
    const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
    double pdf = 0.0;
    for (const auto& b : state.branches()) {
        const double d = x - quadrature_mean(state.alpha(), b.bus_phase);
        pdf += norm_sq(b.amp) * inv_sqrt_2pi * std::exp(-0.5 * d * d);
    }
    return pdf;
}

HomodyneOutcome sample_homodyne(const JointState& state, RngStream& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    const Branch* chosen = &state.branches().back();
    for (const auto& b : state.branches()) {
        cumulative += norm_sq(b.amp);
        if (u < cumulative) {
            chosen = &b;
            break;
        }
    }
    const double mean = quadrature_mean(state.alpha(), chosen->bus_phase);
    return HomodyneOutcome{mean + rng.gaussian()};
}

ConditionedState condition_on_outcome(const JointState& state, double x) {
    const double alpha = state.alpha();
    std::vector<std::pair<std::uint32_t, Amp>> amps;
    amps.reserve(state.branches().size());
    double weight = 0.0;
    for (const auto& b : state.branches()) {
        const Amp beta = alpha * Amp{std::cos(b.bus_phase), std::sin(b.bus_phase)};
        const Amp c = b.amp * quadrature_amplitude(x, beta);
        weight += norm_sq(c);
        amps.emplace_back(b.bits, c);
    }
    if (!(weight >= 1e-300)) {
        throw DegenerateOutcomeError("homodyne record x=" + std::to_string(x) +
                                     " lies in a region of vanishing density");
    }
    const double scale = 1.0 / std::sqrt(weight);
    for (auto& [bits, a] : amps) a *= scale;
    std::erase_if(amps, [](const auto& e) { return std::abs(e.second) < kAmpPruneThreshold; });
    return ConditionedState{QubitState{state.num_qubits(), std::move(amps)}, weight};
}

DensityMatrix reduced_density_matrix(const JointState& state) {
    const int n = state.num_qubits();
    if (n > 12) {
        throw std::invalid_argument("dense reduced density matrix limited to n <= 12 qubits");
    }
    const std::size_t dim = std::size_t{1} << n;
    DensityMatrix rho{n, std::vector<Amp>(dim * dim, Amp{0.0, 0.0})};
    const double alpha = state.alpha();
    for (const auto& row : state.branches()) {
        const Amp beta_row = alpha * Amp{std::cos(row.bus_phase), std::sin(row.bus_phase)};
        for (const auto& col : state.branches()) {
            const Amp beta_col = alpha * Amp{std::cos(col.bus_phase), std::sin(col.bus_phase)};
            // Tr_bus |beta_row><beta_col| = <beta_col|beta_row>
            rho.at(row.bits, col.bits) =
                row.amp * std::conj(col.amp) * coherent_overlap(beta_col, beta_row);
        }
    }
    return rho;
}

}  // namespace qubus
