#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "suprec/circuit.hpp"
#include "suprec/detection.hpp"
#include "suprec/hadamard.hpp"
#include "suprec/infotheory.hpp"
#include "suprec/rng.hpp"

namespace suprec {

enum class Scheme { DirectPpm, Hybrid };

inline std::string scheme_name(Scheme s) { return s == Scheme::DirectPpm ? "DIRECT_PPM" : "HYBRID"; }

struct SchemeConfig {
    Scheme scheme = Scheme::DirectPpm;
    ChannelParams params;
    DetectorModel detector;
    std::optional<DolinarConfig> dolinar;
    bool use_decomposed_plan = false;
    double per_op_transmission = 1.0;
    long long trials = 1;
    std::uint64_t seed = 0;
    bool stratified = false;  // allocate trials proportionally to priors
    int threads = 0;          // 0 picks hardware concurrency
};

inline void validate_config(const SchemeConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!is_supported_order(cfg.params.L) || cfg.params.L < 2)
        throw std::invalid_argument("config: unsupported sequence length L");
    if (cfg.params.n_bar < 0.0) throw std::invalid_argument("config: negative nbar");
    if (cfg.params.lambda < 0.0 || cfg.params.lambda > 1.0)
        throw std::invalid_argument("config: lambda outside [0, 1]");
    if (!(cfg.per_op_transmission > 0.0) || cfg.per_op_transmission > 1.0)
        throw std::invalid_argument("config: per_op_transmission outside (0, 1]");
    if ((cfg.scheme == Scheme::Hybrid) != cfg.dolinar.has_value())
        throw std::invalid_argument("config: dolinar settings present iff scheme is HYBRID");
}

// Empirical channel estimate: counts[input][outcome] plus the configured
// input priors.
struct ConfusionMatrix {
    std::vector<std::string> input_labels;
    std::vector<std::string> outcome_labels;
    std::vector<double> input_priors;
    std::vector<std::vector<long long>> counts;

    long long row_total(std::size_t r) const {
        return std::accumulate(counts[r].begin(), counts[r].end(), 0ll);
    }
    long long total() const {
        long long t = 0;
        for (std::size_t r = 0; r < counts.size(); ++r) t += row_total(r);
        return t;
    }
};

// Input prior over words. For DIRECT_PPM all L rows are uniform; for HYBRID
// the ++..+ and --..- words carry (1-lambda)/2 each and the remaining rows
// lambda/(L-1), with the minus word as the extra final input.
inline std::vector<double> word_priors(Scheme scheme, int L, double lambda) {
    if (scheme == Scheme::DirectPpm) return std::vector<double>(L, 1.0 / L);
    std::vector<double> p(L + 1, lambda / (L - 1));
    p[0] = 0.5 * (1.0 - lambda);
    p[L] = 0.5 * (1.0 - lambda);
    return p;
}

inline int sample_index(const std::vector<double>& priors, Rng& rng) {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < priors.size(); ++i) {
        acc += priors[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(priors.size()) - 1;
}

inline Codeword sample_word(Scheme scheme, const HadamardMatrix& h, double lambda, Rng& rng) {
    int idx = sample_index(word_priors(scheme, h.order, lambda), rng);
    return idx == h.order ? extended_minus_word(h) : codeword(h, idx);
}

// Deterministic proportional allocation: trial t gets the input whose
// cumulative quota it falls into, remainders going to the largest
// fractional parts.
inline std::vector<long long> stratified_allocation(const std::vector<double>& priors, long long trials) {
    std::size_t n = priors.size();
    std::vector<long long> alloc(n);
    std::vector<std::pair<double, std::size_t>> frac(n);
    long long assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double exact = priors[i] * trials;
        alloc[i] = static_cast<long long>(std::floor(exact));
        assigned += alloc[i];
        frac[i] = {exact - alloc[i], i};
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (long long r = 0; r < trials - assigned; ++r) ++alloc[frac[static_cast<std::size_t>(r) % n].second];
    return alloc;
}

namespace detail {

// Everything precomputed once per config: per-word output amplitudes, click
// probabilities, and the Dolinar tables.
struct TrialEngine {
    SchemeConfig cfg;
    int L = 0;
    int num_inputs = 0;
    std::vector<double> priors;
    std::vector<std::vector<double>> click_prob;  // [input][port]
    std::vector<double> dolinar_amp;              // [input], hybrid only
    std::optional<DolinarReceiver> receiver;
    double eta = 1.0;
    std::vector<long long> strat_cum;  // cumulative stratified allocation

    explicit TrialEngine(const SchemeConfig& config) : cfg(config) {
        validate_config(cfg);
        L = cfg.params.L;
        HadamardMatrix h = construct(L);
        SquareMatrix w = rescaled_matrix(h);

        CircuitPlan plan;
        bool lossy = cfg.per_op_transmission < 1.0;
        if (cfg.use_decomposed_plan || lossy) {
            plan = decompose_triangular(w);
            if (lossy) {
                auto [eq, e] = equalize_attenuation(plan, cfg.per_op_transmission);
                plan = std::move(eq);
                eta = e;
            }
        }

        bool hybrid = cfg.scheme == Scheme::Hybrid;
        num_inputs = hybrid ? L + 1 : L;
        priors = word_priors(cfg.scheme, L, cfg.params.lambda);

        click_prob.resize(num_inputs);
        dolinar_amp.assign(num_inputs, 0.0);
        for (int r = 0; r < num_inputs; ++r) {
            Codeword word = r == L ? extended_minus_word(h) : codeword(h, r);
            AmplitudeVector in = encode_word(word, cfg.params.n_bar);
            AmplitudeVector out;
            if (cfg.use_decomposed_plan || lossy) {
                out = apply_plan(plan, in);
            } else {
                out = apply_matrix(w, in);
            }
            click_prob[r].resize(L);
            for (int port = 0; port < L; ++port)
                click_prob[r][port] = click_probability(std::norm(out[port]), cfg.detector);
            if (hybrid) dolinar_amp[r] = out[0].real();
        }
        if (hybrid) {
            double hyp = std::abs(dolinar_amp[0]);
            receiver.emplace(hyp, *cfg.dolinar);
        }
        if (cfg.stratified) {
            auto alloc = stratified_allocation(priors, cfg.trials);
            strat_cum.resize(alloc.size() + 1, 0);
            for (std::size_t i = 0; i < alloc.size(); ++i) strat_cum[i + 1] = strat_cum[i] + alloc[i];
        }
    }

    int input_for_trial(long long t, Rng& rng) const {
        if (!cfg.stratified) return sample_index(priors, rng);
        auto it = std::upper_bound(strat_cum.begin(), strat_cum.end(), t);
        return static_cast<int>(it - strat_cum.begin()) - 1;
    }

    // Outcome columns. DIRECT_PPM: W0..W{L-1}, ERASURE, AMBIGUOUS.
    // HYBRID: PLUS, W1..W{L-1}, MINUS, AMBIGUOUS.
    int num_outcomes() const { return L + 2; }
};

}  // namespace detail

// Runs cfg.trials independent trials, one derived RNG stream per trial, and
// accumulates the confusion matrix. Deterministic for a fixed config,
// independent of the worker count.
inline ConfusionMatrix run_trials(const SchemeConfig& cfg) {
    detail::TrialEngine engine(cfg);
    int rows = engine.num_inputs, cols = engine.num_outcomes();

    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, static_cast<int>(std::min<long long>(threads, cfg.trials)));
    std::vector<std::vector<std::vector<long long>>> partial(
        threads, std::vector<std::vector<long long>>(rows, std::vector<long long>(cols, 0)));

    ConfusionMatrix cm;
    cm.input_priors = engine.priors;
    bool hybrid = cfg.scheme == Scheme::Hybrid;
    for (int r = 0; r < rows; ++r) {
        if (hybrid && r == 0)
            cm.input_labels.push_back("PLUS");
        else if (hybrid && r == engine.L)
            cm.input_labels.push_back("MINUS");
        else
            cm.input_labels.push_back("W" + std::to_string(r));
    }
    for (int c = 0; c < cols; ++c) {
        if (hybrid && c == 0)
            cm.outcome_labels.push_back("PLUS");
        else if (hybrid && c == engine.L)
            cm.outcome_labels.push_back("MINUS");
        else if (!hybrid && c == engine.L)
            cm.outcome_labels.push_back("ERASURE");
        else if (c == engine.L + 1)
            cm.outcome_labels.push_back("AMBIGUOUS");
        else
            cm.outcome_labels.push_back("W" + std::to_string(c));
    }
    cm.counts.assign(rows, std::vector<long long>(cols, 0));

    std::vector<std::thread> pool;
    for (int worker = 0; worker < threads; ++worker)
        pool.emplace_back([&, worker] {
            long long chunk = (cfg.trials + threads - 1) / threads;
            long long lo = worker * chunk, hi = std::min<long long>(cfg.trials, lo + chunk);
            auto& mine = partial[worker];
            for (long long t = lo; t < hi; ++t) {
                Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(t));
                int row = engine.input_for_trial(t, rng);
                const auto& p = engine.click_prob[row];
                int first_port = hybrid ? 1 : 0;
                int clicks = 0, port = -1;
                for (int i = first_port; i < engine.L; ++i)
                    if (rng.bernoulli(p[i])) {
                        ++clicks;
                        port = i;
                    }
                int col;
                if (clicks > 1)
                    col = engine.L + 1;
                else if (!hybrid)
                    col = clicks == 1 ? port : engine.L;
                else if (clicks == 1)
                    col = port;
                else
                    col = engine.receiver->decide(engine.dolinar_amp[row], rng) > 0 ? 0 : engine.L;
                ++mine[row][col];
            }
        });
    for (auto& th : pool) th.join();
    for (int w = 0; w < threads; ++w)
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) cm.counts[r][c] += partial[w][r][c];
    return cm;
}

// Plug-in mutual information (bits per word) from the configured priors and
// empirical conditional outcome distributions.
inline double plug_in_mutual_information(const std::vector<double>& priors,
                                         const std::vector<std::vector<long long>>& counts) {
    std::size_t rows = counts.size(), cols = counts.empty() ? 0 : counts[0].size();
    std::vector<double> py(cols, 0.0);
    std::vector<std::vector<double>> pyx(rows, std::vector<double>(cols, 0.0));
    for (std::size_t r = 0; r < rows; ++r) {
        long long total = std::accumulate(counts[r].begin(), counts[r].end(), 0ll);
        if (total == 0) continue;
        for (std::size_t c = 0; c < cols; ++c) {
            pyx[r][c] = static_cast<double>(counts[r][c]) / total;
            py[c] += priors[r] * pyx[r][c];
        }
    }
    double mi = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (pyx[r][c] > 0.0 && py[c] > 0.0)
                mi += priors[r] * pyx[r][c] * std::log2(pyx[r][c] / py[c]);
    return mi;
}

struct MutualInformationEstimate {
    double bits_per_word = 0.0;
    double stderr_bits_per_word = 0.0;
};

// Plug-in estimate with a nonparametric bootstrap (resampling trials within
// each input row) for the standard error.
inline MutualInformationEstimate empirical_mutual_information(const ConfusionMatrix& cm,
                                                              int resamples = 200,
                                                              std::uint64_t seed = 0x5eedb001ull) {
    if (cm.total() == 0) throw std::invalid_argument("empirical_mutual_information: empty matrix");
    MutualInformationEstimate est;
    est.bits_per_word = plug_in_mutual_information(cm.input_priors, cm.counts);

    std::size_t rows = cm.counts.size(), cols = cm.counts[0].size();
    std::vector<double> samples;
    samples.reserve(resamples);
    for (int b = 0; b < resamples; ++b) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(b));
        std::mt19937_64 gen(rng.next_u64());
        std::vector<std::vector<long long>> boot(rows, std::vector<long long>(cols, 0));
        for (std::size_t r = 0; r < rows; ++r) {
            long long remaining = cm.row_total(r);
            double mass = 1.0;
            for (std::size_t c = 0; c + 1 < cols && remaining > 0; ++c) {
                double p = cm.counts[r][c] / (static_cast<double>(cm.row_total(r)) * mass);
                p = std::clamp(p, 0.0, 1.0);
                std::binomial_distribution<long long> bin(remaining, p);
                long long k = bin(gen);
                boot[r][c] = k;
                remaining -= k;
                mass -= static_cast<double>(cm.counts[r][c]) / cm.row_total(r);
                if (mass <= 0.0) break;
            }
            boot[r][cols - 1] += remaining;
        }
        samples.push_back(plug_in_mutual_information(cm.input_priors, boot));
    }
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    est.stderr_bits_per_word = std::sqrt(var / (samples.size() - 1));
    return est;
}

// Bundle of analytic and empirical per-bin rates for one configuration.
struct RateReport {
    SchemeConfig config;
    double eta = 1.0;
    double analytic_rate = 0.0;        // bits per bin
    double empirical_rate = 0.0;       // bits per bin
    double empirical_stderr = 0.0;     // bits per bin
    double erasure_frequency = -1.0;   // DIRECT_PPM only
    ConfusionMatrix confusion;
};

inline double analytic_rate_for(const SchemeConfig& cfg, double eta) {
    double n_eff = eta * cfg.params.n_bar;
    if (cfg.scheme == Scheme::DirectPpm) return rate_ppm(n_eff, cfg.params.L);
    return rate_hybrid({n_eff, cfg.params.L, cfg.params.lambda, 1.0});
}

inline RateReport compare_report(const SchemeConfig& cfg) {
    RateReport report;
    report.config = cfg;
    if (cfg.per_op_transmission < 1.0) {
        auto plan = decompose_triangular(rescaled_matrix(construct(cfg.params.L)));
        report.eta = equalize_attenuation(plan, cfg.per_op_transmission).second;
    }
    report.confusion = run_trials(cfg);
    auto est = empirical_mutual_information(report.confusion);
    report.empirical_rate = est.bits_per_word / cfg.params.L;
    report.empirical_stderr = est.stderr_bits_per_word / cfg.params.L;
    report.analytic_rate = analytic_rate_for(cfg, report.eta);
    if (cfg.scheme == Scheme::DirectPpm) {
        long long erased = 0;
        for (std::size_t r = 0; r < report.confusion.counts.size(); ++r)
            erased += report.confusion.counts[r][cfg.params.L];
        report.erasure_frequency = static_cast<double>(erased) / report.confusion.total();
    }
    return report;
}

}  // namespace suprec
