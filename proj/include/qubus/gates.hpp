#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qubus/core.hpp"

namespace qubus {

// Entanglement class of a heralded outcome. For pure register states:
// PRODUCT means every qubit factors out, GHZ means no qubit factors out
// (genuine tripartite entanglement), BELL covers the remaining case of an
// entangled pair, possibly alongside a pure extra qubit.
enum class OutcomeLabel { GHZ = 0, BELL = 1, PRODUCT = 2 };

constexpr std::size_t kNumLabels = 3;

inline std::size_t label_index(OutcomeLabel label) { return static_cast<std::size_t>(label); }

const char* to_string(OutcomeLabel label);

// Decides the label from single-qubit reduced purities (tolerance 1e-9 on
// Tr rho^2 = 1).
OutcomeLabel entanglement_label(const QubitState& psi);

// One resolvable homodyne peak: a group of branches sharing a bus phase.
// qubit_state is the ideal heralded register state of the peak — what
// conditioning yields when the record lands squarely on this peak — and is
// used as the fidelity target for outcomes classified here.
struct Peak {
    double bus_phase = 0.0;
    double mean = 0.0;  // 2 alpha sin(bus_phase)
    double prob = 0.0;
    QubitState qubit_state;
    OutcomeLabel label = OutcomeLabel::PRODUCT;
};

// The full outcome structure of one gate: peaks sorted by quadrature mean,
// midpoint decision thresholds, and the (rotated) joint state they came
// from, kept so records can be conditioned. Immutable once built.
class PeakSpectrum {
public:
    // Groups branches whose bus phases agree within 1e-12 rad.
    static PeakSpectrum from_state(const JointState& state);

    const std::vector<Peak>& peaks() const { return peaks_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    const JointState& state() const { return state_; }
    double alpha() const { return state_.alpha(); }

    // Bin containing x; a record exactly on a threshold goes to the
    // lower-mean peak.
    int peak_index(double x) const;

    // Sum of each peak's probability weight falling outside its own bin
    // (unit-variance Gaussian tails across the midpoint thresholds).
    double exact_misclassification() const;

private:
    PeakSpectrum(JointState state, std::vector<Peak> peaks, std::vector<double> thresholds);

    JointState state_;
    std::vector<Peak> peaks_;
    std::vector<double> thresholds_;
};

inline PeakSpectrum peak_spectrum(const JointState& state) { return PeakSpectrum::from_state(state); }

// Midpoints of adjacent peak means; empty for a single peak.
std::vector<double> decision_thresholds(const PeakSpectrum& spectrum);

// (1/2) erfc(alpha sin(gap) / sqrt(2)): misclassification probability of two
// equal-weight bus states whose phases differ by `gap` under midpoint
// discrimination. Adjacent peaks of these gates sit 2 theta apart; pass the
// gap you mean. Requires alpha >= 0 and gap in [0, pi].
double p_err(double alpha, double gap);

double exact_misclassification(const PeakSpectrum& spectrum);

// Heralded result of one shot: which peak the record was binned into, the
// record itself, the conditioned register state, and its fidelity to the
// peak's ideal state after free single-qubit Z corrections.
struct HeraldedOutcome {
    int peak_index = 0;
    double x = 0.0;
    QubitState projected_state;
    double fidelity_to_target = 0.0;
    OutcomeLabel label = OutcomeLabel::PRODUCT;
};

// Fidelity |<target|psi>|^2 maximized over independent Z rotations on every
// qubit plus a global phase: (sum_s |t_s||psi_s|)^2. Exact whenever the
// target has at most two basis components (any two distinct basis states
// differ on some qubit, so one Z rotation tunes their relative phase
// freely), which covers every peak target produced here.
double fidelity_local_z_opt(const QubitState& psi, const QubitState& target);

// Bins x, conditions the spectrum's joint state on it, labels and scores
// the result. Throws std::invalid_argument on an empty spectrum.
HeraldedOutcome classify_outcome(double x, const PeakSpectrum& spectrum);

// A gate readied for repeated shots: bus attached, rotations applied,
// spectrum computed once.
struct PreparedGate {
    JointState state;
    PeakSpectrum spectrum;
};

// Parity gate: R(theta sigma_z) on each of 2 qubits.
PreparedGate prepare_parity_gate_2q(const GateConfig& config, const QubitState& input);

// GHZ gate: R(theta sigma_z1) R(theta sigma_z2) R(-2 theta sigma_z3).
PreparedGate prepare_gate_3q(const GateConfig& config, const QubitState& input);

// One shot: sample the homodyne record and classify it.
HeraldedOutcome run_shot(const PreparedGate& gate, RngStream& rng);

HeraldedOutcome run_parity_gate_2q(const GateConfig& config, const QubitState& input, RngStream& rng);
HeraldedOutcome run_gate_3q(const GateConfig& config, const QubitState& input, RngStream& rng);

// Aggregate statistics over many shots. Per-label fidelity sums use the
// Z-corrected fidelity of each shot's conditioned state.
struct TrialStats {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> peak_counts;
    std::array<std::uint64_t, kNumLabels> label_counts{};
    std::array<double, kNumLabels> fidelity_sums{};
};

// Runs `trials` shots with per-trial RNG substreams of `seed`. The fold
// order is fixed by the block scheme, so the result is identical for every
// worker count. threads <= 0 selects hardware concurrency.
TrialStats run_gate_trials(const PreparedGate& gate, std::uint64_t trials, std::uint64_t seed,
                           int threads = 0);

enum class GateKind { Parity2Q, Ghz3Q };

PreparedGate prepare_gate(GateKind kind, const GateConfig& config, const QubitState& input);

// Analytic (quadrature-integrated) conditional fidelities: for each bin,
// the pdf-weighted mean of the Z-corrected fidelity between the conditioned
// state and the bin's peak target.
struct ConditionalFidelityReport {
    std::vector<double> per_peak;                // mean fidelity within each bin
    std::vector<double> peak_weight;             // pdf mass of each bin
    std::array<double, kNumLabels> per_label{};  // weight-averaged; NaN if label absent
};

// Uses the gate's uniform-superposition input. Degenerate spectra whose
// peak means coincide (alpha sin theta = 0) collapse each bin to its peak
// point and report the pointwise fidelity there, which is the zero-width
// limit of the integral. Throws NumericError if the quadrature error
// estimate is not negligible.
ConditionalFidelityReport expected_conditional_fidelity(const GateConfig& config, GateKind kind);

}  // namespace qubus
