#include "qubus/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "qubus/parallel.hpp"
#include "qubus/quadrature.hpp"

namespace qubus {

namespace {

constexpr double kPhaseMergeTol = 1e-12;
constexpr double kPurityTol = 1e-9;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Gaussian mass beyond 12 standard deviations is ~1e-33; integration windows
// are clipped to the peak means padded by this.
constexpr double kTailWindow = 12.0;

}  // namespace

const char* to_string(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::GHZ: return "GHZ";
        case OutcomeLabel::BELL: return "BELL";
        case OutcomeLabel::PRODUCT: return "PRODUCT";
    }
    return "?";
}

OutcomeLabel entanglement_label(const QubitState& psi) {
    if (psi.n == 1) return OutcomeLabel::PRODUCT;
    int separable = 0;
    for (int q = 0; q < psi.n; ++q) {
        const std::uint32_t mask = 1u << (psi.n - 1 - q);
        // 2x2 reduced state of qubit q: pair up amplitudes differing only
        // in this bit.
        std::unordered_map<std::uint32_t, std::pair<Amp, Amp>> pairs;
        pairs.reserve(psi.amps.size());
        for (const auto& [bits, a] : psi.amps) {
            auto& entry = pairs[bits & ~mask];
            ((bits & mask) ? entry.second : entry.first) = a;
        }
        double r00 = 0.0, r11 = 0.0;
        Amp r01{0.0, 0.0};
        for (const auto& [key, entry] : pairs) {
            r00 += std::norm(entry.first);
            r11 += std::norm(entry.second);
            r01 += entry.first * std::conj(entry.second);
        }
        const double purity = r00 * r00 + r11 * r11 + 2.0 * std::norm(r01);
        if (purity >= 1.0 - kPurityTol) ++separable;
    }
    if (separable == psi.n) return OutcomeLabel::PRODUCT;
    if (separable == 0) return psi.n == 2 ? OutcomeLabel::BELL : OutcomeLabel::GHZ;
    return OutcomeLabel::BELL;
}

PeakSpectrum::PeakSpectrum(JointState state, std::vector<Peak> peaks, std::vector<double> thresholds)
    : state_(std::move(state)), peaks_(std::move(peaks)), thresholds_(std::move(thresholds)) {}

PeakSpectrum PeakSpectrum::from_state(const JointState& state) {
    std::vector<Branch> branches = state.branches();
    std::sort(branches.begin(), branches.end(),
              [](const Branch& a, const Branch& b) { return a.bus_phase < b.bus_phase; });

    std::vector<Peak> peaks;
    std::size_t i = 0;
    while (i < branches.size()) {
        std::size_t j = i;
        std::vector<std::pair<std::uint32_t, Amp>> group;
        double prob = 0.0;
        double phase_weighted = 0.0;
        while (j < branches.size() && branches[j].bus_phase - branches[i].bus_phase <= kPhaseMergeTol) {
            const double w = std::norm(branches[j].amp);
            prob += w;
            phase_weighted += w * branches[j].bus_phase;
            group.emplace_back(branches[j].bits, branches[j].amp);
            ++j;
        }
        Peak peak;
        peak.bus_phase = phase_weighted / prob;
        peak.mean = quadrature_mean(state.alpha(), peak.bus_phase);
        peak.prob = prob;
        // renormalize the group's amplitudes to get the heralded state
        for (auto& [bits, a] : group) a /= std::sqrt(prob);
        peak.qubit_state = QubitState::from_sparse(state.num_qubits(), std::move(group));
        peak.label = entanglement_label(peak.qubit_state);
        peaks.push_back(std::move(peak));
        i = j;
    }

    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        return a.mean != b.mean ? a.mean < b.mean : a.bus_phase < b.bus_phase;
    });
    std::vector<double> thresholds;
    thresholds.reserve(peaks.size() - 1);
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
        thresholds.push_back(0.5 * (peaks[k].mean + peaks[k + 1].mean));
    }
    return PeakSpectrum(state, std::move(peaks), std::move(thresholds));
}

int PeakSpectrum::peak_index(double x) const {
    // number of thresholds strictly below x; x exactly on a threshold is
    // not counted, which lands it in the lower-mean bin
    auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), x);
    return static_cast<int>(it - thresholds_.begin());
}

double PeakSpectrum::exact_misclassification() const {
    double total = 0.0;
    for (std::size_t i = 0; i < peaks_.size(); ++i) {
        const double m = peaks_[i].mean;
        double outside = 0.0;
        if (i > 0) outside += 0.5 * std::erfc((m - thresholds_[i - 1]) * kInvSqrt2);
        if (i + 1 < peaks_.size()) outside += 0.5 * std::erfc((thresholds_[i] - m) * kInvSqrt2);
        total += peaks_[i].prob * outside;
    }
    return total;
}

std::vector<double> decision_thresholds(const PeakSpectrum& spectrum) {
    return spectrum.thresholds();
}

double p_err(double alpha, double gap) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("p_err: alpha must be finite and >= 0");
    }
    if (!(gap >= 0.0 && gap <= std::numbers::pi)) {
        throw std::invalid_argument("p_err: gap must lie in [0, pi]");
    }
    return 0.5 * std::erfc(alpha * std::sin(gap) * kInvSqrt2);
}

double exact_misclassification(const PeakSpectrum& spectrum) {
    return spectrum.exact_misclassification();
}

double fidelity_local_z_opt(const QubitState& psi, const QubitState& target) {
    if (psi.n != target.n) {
        throw std::invalid_argument("fidelity requires equal register sizes");
    }
    double s = 0.0;
    for (const auto& [bits, t] : target.amps) s += std::abs(t) * std::abs(psi.amplitude(bits));
    return s * s;
}

HeraldedOutcome classify_outcome(double x, const PeakSpectrum& spectrum) {
    if (spectrum.peaks().empty()) throw std::invalid_argument("empty spectrum");
    const int idx = spectrum.peak_index(x);
    const Peak& peak = spectrum.peaks()[idx];
    ConditionedState cond = condition_on_outcome(spectrum.state(), x);
    HeraldedOutcome out;
    out.peak_index = idx;
    out.x = x;
    out.fidelity_to_target = fidelity_local_z_opt(cond.state, peak.qubit_state);
    out.projected_state = std::move(cond.state);
    out.label = peak.label;
    return out;
}

PreparedGate prepare_parity_gate_2q(const GateConfig& config, const QubitState& input) {
    config.validate();
    if (input.n != 2) throw std::invalid_argument("parity gate requires a 2-qubit input");
    JointState state = JointState::attach_bus(input, config.alpha);
    state = apply_conditional_rotation(state, 0, config.theta);
    state = apply_conditional_rotation(state, 1, config.theta);
    PeakSpectrum spectrum = PeakSpectrum::from_state(state);
    return PreparedGate{std::move(state), std::move(spectrum)};
}

PreparedGate prepare_gate_3q(const GateConfig& config, const QubitState& input) {
    config.validate();
    if (input.n != 3) throw std::invalid_argument("GHZ gate requires a 3-qubit input");
    JointState state = JointState::attach_bus(input, config.alpha);
    state = apply_conditional_rotation(state, 0, config.theta);
    state = apply_conditional_rotation(state, 1, config.theta);
    state = apply_conditional_rotation(state, 2, -2.0 * config.theta);
    PeakSpectrum spectrum = PeakSpectrum::from_state(state);
    return PreparedGate{std::move(state), std::move(spectrum)};
}

PreparedGate prepare_gate(GateKind kind, const GateConfig& config, const QubitState& input) {
    return kind == GateKind::Parity2Q ? prepare_parity_gate_2q(config, input)
                                      : prepare_gate_3q(config, input);
}

HeraldedOutcome run_shot(const PreparedGate& gate, RngStream& rng) {
    return classify_outcome(sample_homodyne(gate.state, rng).x, gate.spectrum);
}

HeraldedOutcome run_parity_gate_2q(const GateConfig& config, const QubitState& input, RngStream& rng) {
    return run_shot(prepare_parity_gate_2q(config, input), rng);
}

HeraldedOutcome run_gate_3q(const GateConfig& config, const QubitState& input, RngStream& rng) {
    return run_shot(prepare_gate_3q(config, input), rng);
}

TrialStats run_gate_trials(const PreparedGate& gate, std::uint64_t trials, std::uint64_t seed,
                           int threads) {
    TrialStats zero;
    zero.peak_counts.assign(gate.spectrum.peaks().size(), 0);

    auto body = [&gate, seed](TrialStats& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::substream(seed, i);
            const HeraldedOutcome out = run_shot(gate, rng);
            ++acc.trials;
            ++acc.peak_counts[out.peak_index];
            ++acc.label_counts[label_index(out.label)];
            acc.fidelity_sums[label_index(out.label)] += out.fidelity_to_target;
        }
    };
    auto fold = [](TrialStats& total, const TrialStats& blk) {
        total.trials += blk.trials;
        for (std::size_t i = 0; i < total.peak_counts.size(); ++i) {
            total.peak_counts[i] += blk.peak_counts[i];
        }
        for (std::size_t i = 0; i < kNumLabels; ++i) {
            total.label_counts[i] += blk.label_counts[i];
            total.fidelity_sums[i] += blk.fidelity_sums[i];
        }
    };
    return parallel_trials(trials, threads, zero, body, fold);
}

ConditionalFidelityReport expected_conditional_fidelity(const GateConfig& config, GateKind kind) {
    const int n = kind == GateKind::Parity2Q ? 2 : 3;
    const PreparedGate gate = prepare_gate(kind, config, QubitState::uniform_plus(n));
    const auto& peaks = gate.spectrum.peaks();
    const auto& thresholds = gate.spectrum.thresholds();

    std::vector<double> means;
    means.reserve(peaks.size());
    for (const auto& p : peaks) means.push_back(p.mean);
    const double window_lo = means.front() - kTailWindow;
    const double window_hi = means.back() + kTailWindow;

    ConditionalFidelityReport report;
    report.per_peak.resize(peaks.size());
    report.peak_weight.resize(peaks.size());
    std::array<double, kNumLabels> label_num{};
    std::array<double, kNumLabels> label_den{};

    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const double bin_lo = i > 0 ? thresholds[i - 1] : -std::numeric_limits<double>::infinity();
        const double bin_hi = i + 1 < peaks.size() ? thresholds[i]
                                                   : std::numeric_limits<double>::infinity();
        const double lo = std::max(bin_lo, window_lo);
        const double hi = std::min(bin_hi, window_hi);

        auto fid_at = [&](double x) {
            return fidelity_local_z_opt(condition_on_outcome(gate.state, x).state,
                                        peaks[i].qubit_state);
        };

        double num, den;
        if (hi - lo > kPhaseMergeTol) {
            double err_num = 0.0, err_den = 0.0;
            num = integrate([&](double x) { return homodyne_pdf(gate.state, x) * fid_at(x); },
                            lo, hi, means, &err_num);
            den = integrate([&](double x) { return homodyne_pdf(gate.state, x); },
                            lo, hi, means, &err_den);
            const double err = err_num + err_den;
            if (!(err <= 1e-9 * std::max(1.0, std::abs(den)))) {
                std::ostringstream msg;
                msg << "conditional-fidelity quadrature did not converge on bin " << i
                    << " [" << lo << ", " << hi << "]: error estimate " << err;
                throw NumericError(msg.str());
            }
        } else {
            // coincident peak means (alpha sin theta = 0): the bin has zero
            // width, so report the pointwise limit at the peak and carry the
            // peak's own probability as its weight
            num = peaks[i].prob * fid_at(peaks[i].mean);
            den = peaks[i].prob;
        }
        report.per_peak[i] = num / den;
        report.peak_weight[i] = den;
        label_num[label_index(peaks[i].label)] += num;
        label_den[label_index(peaks[i].label)] += den;
    }

    for (std::size_t l = 0; l < kNumLabels; ++l) {
        report.per_label[l] = label_den[l] > 0.0 ? label_num[l] / label_den[l]
                                                 : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

}  // namespace qubus
