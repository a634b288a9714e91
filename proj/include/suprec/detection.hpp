#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "suprec/circuit.hpp"
#include "suprec/rng.hpp"

namespace suprec {

// Threshold (click / no-click) detector. Defaults are the ideal
// unit-efficiency, dark-count-free case.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_click_probability = 0.0;
};

inline double click_probability(double mean_photons, const DetectorModel& model) {
    return 1.0 - (1.0 - model.dark_click_probability) * std::exp(-model.efficiency * mean_photons);
}

// Each port clicks independently with probability
// 1 - (1 - dark) exp(-efficiency |a_i|^2).
inline std::vector<bool> threshold_detect(const AmplitudeVector& v, const DetectorModel& model, Rng& rng) {
    std::vector<bool> clicks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        clicks[i] = rng.bernoulli(click_probability(std::norm(v[i]), model));
    return clicks;
}

struct DolinarConfig {
    int num_slices = 1000;
    double amplitude_cap = 0.0;  // 0 selects the default 10 |a| sqrt(num_slices)
    std::uint64_t rng_seed = 0;
};

// Raw measurement data of one trial.
struct DetectionRecord {
    std::vector<bool> clicks;
    std::optional<int> dolinar_port;
    std::optional<int> dolinar_decision;  // +1 or -1
};

// Adaptive displacement receiver discriminating the hypotheses +-a. The
// signal is split into uniform time slices; in each slice the feedback
// displaces by the standard law u(t) = -s_hat a / sqrt(1 - e^{-4 a^2 t})
// (magnitude clamped near t = 0), nulling the currently favoured hypothesis,
// and the posterior is updated by Bayes' rule from the click record. As the
// slice count grows the error probability approaches the Helstrom bound.
//
// The per-slice Bernoulli process is simulated exactly but event by event:
// between clicks the posterior evolves deterministically, so the next click
// slice is drawn by inverting the cumulative no-click survival probability.
class DolinarReceiver {
public:
    DolinarReceiver(double hypothesis_amplitude, const DolinarConfig& config)
        : a_(hypothesis_amplitude), n_(config.num_slices) {
        if (!(a_ >= 0.0)) throw std::invalid_argument("dolinar: hypothesis amplitude must be real >= 0");
        if (n_ < 1) throw std::invalid_argument("dolinar: num_slices must be >= 1");
        double cap = config.amplitude_cap > 0.0 ? config.amplitude_cap
                                                : 10.0 * a_ * std::sqrt(static_cast<double>(n_));
        u_.resize(n_);
        sum_u_.assign(n_ + 1, 0.0);
        sum_u2_.assign(n_ + 1, 0.0);
        for (int k = 0; k < n_; ++k) {
            double t = (k + 0.5) / n_;
            double denom = std::sqrt(-std::expm1(-4.0 * a_ * a_ * t));
            double u = a_ > 0.0 ? std::min(cap, a_ / denom) : 0.0;
            u_[k] = u;
            sum_u_[k + 1] = sum_u_[k] + u / n_;
            sum_u2_[k + 1] = sum_u2_[k] + u * u / n_;
        }
    }

    // Simulates one shot with the given received amplitude (normally one of
    // the two hypotheses, but any amplitude is accepted; a vacuum input
    // yields an uninformative fifty-fifty outcome). Returns +1 or -1.
    int decide(double received_amplitude, Rng& rng) const {
        int guess = rng.coin() ? 1 : -1;  // symmetric tie-break at the flat prior
        if (a_ == 0.0) return guess;
        double log_odds = 0.0;  // ln P(+a) / P(-a)
        int k = 0;
        while (k < n_) {
            double threshold = rng.exponential();
            int kc = find_click_slice(received_amplitude, guess, k, threshold);
            int span_end = kc < 0 ? n_ : kc;
            // No-click stretch: likelihood exp(-rates) under each hypothesis.
            log_odds += rate_sum(-a_, guess, k, span_end) - rate_sum(a_, guess, k, span_end);
            if (kc < 0) break;
            double rp = slice_rate(a_, guess, kc);
            double rm = slice_rate(-a_, guess, kc);
            log_odds += std::log(-std::expm1(-rp)) - std::log(-std::expm1(-rm));
            k = kc + 1;
            if (log_odds != 0.0) guess = log_odds > 0.0 ? 1 : -1;
        }
        if (log_odds == 0.0) return rng.coin() ? 1 : -1;
        return log_odds > 0.0 ? 1 : -1;
    }

    int num_slices() const { return n_; }
    double displacement(int slice) const { return u_[slice]; }

private:
    // Poisson intensity of slice k for signal amplitude amp while the
    // feedback nulls hypothesis sign `guess`.
    double slice_rate(double amp, int guess, int k) const {
        double d = amp - guess * u_[k];
        return d * d / n_;
    }

    // Sum of slice rates over [k1, k2).
    double rate_sum(double amp, int guess, int k1, int k2) const {
        return amp * amp * (k2 - k1) / n_ - 2.0 * amp * guess * (sum_u_[k2] - sum_u_[k1]) +
               (sum_u2_[k2] - sum_u2_[k1]);
    }

    // Smallest slice index kc >= k with cumulative rate exceeding the
    // exponential threshold, or -1 if the trial ends without a click.
    int find_click_slice(double amp, int guess, int k, double threshold) const {
        if (rate_sum(amp, guess, k, n_) < threshold) return -1;
        int lo = k + 1, hi = n_;
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (rate_sum(amp, guess, k, mid) >= threshold)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo - 1;
    }

    double a_;
    int n_;
    std::vector<double> u_;
    std::vector<double> sum_u_;   // prefix sums of u / N
    std::vector<double> sum_u2_;  // prefix sums of u^2 / N
};

inline int dolinar_decide(double received_amplitude, double hypothesis_amplitude,
                          const DolinarConfig& config, Rng& rng) {
    return DolinarReceiver(hypothesis_amplitude, config).decide(received_amplitude, rng);
}

// Outcome of decoding one detection record.
enum class OutcomeKind { WordIndex, PlusWord, MinusWord, Erasure, Ambiguous };

struct DecodeOutcome {
    OutcomeKind kind;
    int word_index = -1;
};

// Direct PPM readout: exactly one click identifies the word, none is an
// erasure, several (possible only with dark counts) are ambiguous.
inline DecodeOutcome decode_direct(const DetectionRecord& record) {
    if (record.dolinar_port) throw std::invalid_argument("decode_direct: record has a Dolinar port");
    int count = 0, index = -1;
    for (std::size_t i = 0; i < record.clicks.size(); ++i)
        if (record.clicks[i]) {
            ++count;
            index = static_cast<int>(i);
        }
    if (count == 0) return {OutcomeKind::Erasure};
    if (count > 1) return {OutcomeKind::Ambiguous};
    return {OutcomeKind::WordIndex, index};
}

// Hybrid readout: a photon-counter click wins outright; otherwise the
// Dolinar decision separates the ++...+ and --...- words.
inline DecodeOutcome decode_hybrid(const DetectionRecord& record) {
    if (!record.dolinar_port || !record.dolinar_decision)
        throw std::invalid_argument("decode_hybrid: record lacks Dolinar data");
    int count = 0, index = -1;
    for (std::size_t i = 0; i < record.clicks.size(); ++i) {
        if (static_cast<int>(i) == *record.dolinar_port) continue;
        if (record.clicks[i]) {
            ++count;
            index = static_cast<int>(i);
        }
    }
    if (count > 1) return {OutcomeKind::Ambiguous};
    if (count == 1) return {OutcomeKind::WordIndex, index};
    return {*record.dolinar_decision > 0 ? OutcomeKind::PlusWord : OutcomeKind::MinusWord};
}

}  // namespace suprec
