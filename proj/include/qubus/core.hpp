#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qubus/rng.hpp"

namespace qubus {

using Amp = std::complex<double>;

constexpr int kMaxQubits = 20;

// Amplitudes below this are dropped from branch storage.
constexpr double kAmpPruneThreshold = 1e-15;

// Thrown when a homodyne record lands in a region of vanishing density and
// no conditional state can be formed.
struct DegenerateOutcomeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a numerical routine fails to converge.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicsParams {
    double g = 0.0;      // rad/s; half the vacuum Rabi splitting 2g
    double delta = 0.0;  // rad/s; detuning between dipole transition and cavity
    double chi = 0.0;    // rad/s; dispersive coupling g^2/delta
    double t_int = 0.0;  // s; probe interaction time
};

// Operating point of one bus-mediated gate: probe amplitude alpha and
// conditional rotation angle theta. The physical parameters are optional;
// when present they must be mutually consistent (chi = g^2/delta and
// theta = chi * t_int).
struct GateConfig {
    double alpha = 0.0;
    double theta = 0.0;
    std::optional<PhysicsParams> physics;

    // Throws std::invalid_argument with every violated constraint named.
    void validate() const;
};

// theta = chi * t_int.
double theta_from_physics(double chi, double t_int);

// One computational-basis branch of the register together with the bus
// coherent state |alpha * e^{i bus_phase}> it is correlated with.
// Qubit i occupies bit (n-1-i) of `bits`, so the literal 0b011 reads |011>.
struct Branch {
    std::uint32_t bits = 0;
    Amp amp;
    double bus_phase = 0.0;
};

inline int qubit_bit(std::uint32_t bits, int n, int qubit) {
    return static_cast<int>((bits >> (n - 1 - qubit)) & 1u);
}

// Sparse normalized register state (no bus), sorted by basis index.
struct QubitState {
    int n = 0;
    std::vector<std::pair<std::uint32_t, Amp>> amps;

    static QubitState basis(int n, std::uint32_t bits);
    static QubitState uniform_plus(int n);
    static QubitState from_dense(int n, std::span<const Amp> dense);
    static QubitState from_sparse(int n, std::vector<std::pair<std::uint32_t, Amp>> amps);

    Amp amplitude(std::uint32_t bits) const;
};

// |<target|psi>|^2. Throws std::invalid_argument on register size mismatch.
double fidelity(const QubitState& psi, const QubitState& target);

// Joint pure state of n qubits and one bus mode, restricted to the family
// reachable by diagonal conditional rotations: each basis branch carries
// exactly one coherent state. Immutable after construction; operations
// return new values, so states can be shared freely across threads.
class JointState {
public:
    static JointState attach_bus(const QubitState& qubits, double alpha);
    static JointState uniform_plus(int n, double alpha);
    static JointState from_branches(int n, double alpha, std::vector<Branch> branches);

    int num_qubits() const { return n_; }
    double alpha() const { return alpha_; }
    const std::vector<Branch>& branches() const { return branches_; }

    QubitState qubit_amplitudes() const;  // drops the bus phases

private:
    JointState(int n, double alpha, std::vector<Branch> branches);

    int n_ = 0;
    double alpha_ = 0.0;
    std::vector<Branch> branches_;  // unique bit patterns, sorted by bits
};

// R(theta sigma_z) on one qubit: bit 0 branches advance the bus phase by
// +theta, bit 1 branches by -theta. Amplitudes are untouched.
JointState apply_conditional_rotation(const JointState& state, int qubit, double theta);

// <beta1|beta2> for coherent states (conjugate on the first argument).
// Magnitudes above 50 are rejected.
Amp coherent_overlap(Amp beta1, Amp beta2);

// <x|beta> in the P = X(pi/2) quadrature eigenbasis, with the convention
// X(phi) = a^dag e^{i phi} + a e^{-i phi}. |<x|beta>|^2 is then a Gaussian
// in x with mean 2 Im(beta) and variance 1; the complex phase is fixed so
// that integrating <beta1|x><x|beta2> over x reproduces coherent_overlap.
Amp quadrature_amplitude(double x, Amp beta);

// Mean of the P-quadrature distribution of the coherent state
// alpha * e^{i phase}.
inline double quadrature_mean(double alpha, double phase) {
    return 2.0 * alpha * std::sin(phase);
}

// Probability density of a P-quadrature record at x.
double homodyne_pdf(const JointState& state, double x);

struct HomodyneOutcome {
    double x = 0.0;
};

// Projective P-quadrature measurement: draws a branch by |amp|^2, then a
// Gaussian record around that branch's quadrature mean. The distribution
// of x equals homodyne_pdf exactly.
HomodyneOutcome sample_homodyne(const JointState& state, RngStream& rng);

struct ConditionedState {
    QubitState state;
    double weight = 0.0;  // pre-normalization squared norm == homodyne_pdf(x)
};

// Register state conditioned on a quadrature record x; the bus is discarded.
// Throws DegenerateOutcomeError when the record's density is below 1e-300.
ConditionedState condition_on_outcome(const JointState& state, double x);

// Dense Hermitian matrix over the 2^n qubit basis, row-major.
struct DensityMatrix {
    int n = 0;
    std::vector<Amp> data;

    std::size_t dim() const { return std::size_t{1} << n; }
    Amp& at(std::size_t row, std::size_t col) { return data[row * dim() + col]; }
    const Amp& at(std::size_t row, std::size_t col) const { return data[row * dim() + col]; }
};

// Register state after tracing out the bus. Dense storage; rejects n > 12.
DensityMatrix reduced_density_matrix(const JointState& state);

}  // namespace qubus
