#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace suprec {

// I_ind ~ beta * nbar in the weak-pulse limit; kept as the exact expression.
inline double beta_constant() { return 2.0 / std::log(2.0); }

// Channel parameters shared by the analytic formulas: nbar is the mean photon
// number per time bin, L the sequence length, lambda the total prior weight on
// the non-(+-) Hadamard words in the hybrid scheme, transmission the overall
// power transmission eta.
struct ChannelParams {
    double n_bar = 0.0;
    int L = 2;
    double lambda = 0.0;
    double transmission = 1.0;
};

namespace detail {
constexpr double kInvLn2 = 1.4426950408889634;  // 1/ln 2

// Golden-section maximum of f on [lo, hi] to absolute tolerance xtol.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double xtol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}
}  // namespace detail

// H(x) in bits, with 0 log 0 = 0 and stable endpoints.
inline double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("binary_entropy: x outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) * detail::kInvLn2;
}

// Minimum-error probability for discriminating |alpha> from |-alpha> with
// mean photon number n_eff = |alpha|^2.
inline double helstrom_error(double n_eff) {
    if (n_eff < 0.0) throw std::domain_error("helstrom_error: negative photon number");
    return 0.5 * (1.0 - std::sqrt(-std::expm1(-4.0 * n_eff)));
}

// Exact binary-symmetric-channel rate 1 - H(eps(nbar)). Evaluated through
// 0.5 * [(1+s) log2(1+s) + (1-s) log2(1-s)] with s = sqrt(1 - e^{-4 nbar}),
// which stays accurate when eps is close to 1/2.
inline double rate_individual(double n_bar) {
    if (n_bar < 0.0) throw std::domain_error("rate_individual: negative photon number");
    double s = std::sqrt(-std::expm1(-4.0 * n_bar));
    if (s == 0.0) return 0.0;
    double plus = (1.0 + s) * std::log1p(s);
    double minus = (1.0 - s) * std::log1p(-s);  // s = 1 gives 0 * -inf -> handle below
    if (s >= 1.0) minus = 0.0;
    return 0.5 * (plus + minus) * detail::kInvLn2;
}

inline double rate_individual_asymptotic(double n_bar) { return beta_constant() * n_bar; }

// Holevo quantity for the equiprobable BPSK pair.
inline double holevo_bpsk(double n_bar) {
    if (n_bar < 0.0) throw std::domain_error("holevo_bpsk: negative photon number");
    return binary_entropy(0.5 * -std::expm1(-2.0 * n_bar));
}

inline double holevo_bpsk_asymptotic(double n_bar) { return n_bar * std::log2(1.0 / n_bar); }

// Second-order low-power expansion of the narrowband bosonic capacity.
inline double capacity_asymptote(double n_bar) {
    if (n_bar <= 0.0 || n_bar >= 1.0) throw std::domain_error("capacity_asymptote: nbar outside (0, 1)");
    return n_bar * std::log2(1.0 / n_bar) + n_bar * detail::kInvLn2;
}

// p = 1 - e^{-L nbar}.
inline double ppm_click_probability(double n_bar, double L) {
    if (n_bar < 0.0 || L < 1.0) throw std::domain_error("ppm_click_probability: bad arguments");
    return -std::expm1(-L * n_bar);
}

// Erasure-channel rate (p/L) log2 L per bin; L may be continuous.
inline double rate_ppm(double n_bar, double L) {
    if (L < 2.0) throw std::domain_error("rate_ppm: L must be >= 2");
    return ppm_click_probability(n_bar, L) / L * std::log2(L);
}

inline double rate_ppm_asymptotic(double n_bar, double L) { return n_bar * std::log2(L); }

// Maximizes the exact PPM rate over continuous L > 2.
inline std::pair<double, double> ppm_optimal_length(double n_bar) {
    if (n_bar <= 0.0 || n_bar >= 0.1) throw std::domain_error("ppm_optimal_length: nbar outside (0, 0.1)");
    // The maximum sits where L * nbar is order unity; bracket in log L.
    double lo = std::log(2.0), hi = std::log(100.0 / n_bar);
    auto [x, fx] = detail::golden_max([&](double t) { return rate_ppm(n_bar, std::exp(t)); }, lo, hi, 1e-12);
    return {std::exp(x), fx};
}

// Two-term expansion of the optimized PPM rate.
inline double ppm_optimal_rate_asymptotic(double n_bar) {
    return n_bar * std::log2(1.0 / n_bar) - n_bar * std::log2(std::log(1.0 / n_bar));
}

// Z-channel contribution H(lambda p) - lambda H(p).
inline double z_channel_term(double lambda, double p) {
    if (lambda < 0.0 || lambda > 1.0 || p < 0.0 || p > 1.0)
        throw std::domain_error("z_channel_term: arguments outside [0, 1]");
    return binary_entropy(lambda * p) - lambda * binary_entropy(p);
}

inline double z_channel_term_asymptotic(double lambda, double p) {
    if (lambda == 0.0) return 0.0;
    return lambda * p * std::log2(1.0 / lambda);
}

// Exact hybrid-scheme rate per bin:
// (1/L) { (1-lambda)[1 - H(eps(L nbar))] + lambda p log2(L-1) + H(lambda p) - lambda H(p) }.
inline double rate_hybrid(const ChannelParams& params) {
    if (params.L < 2 || params.lambda < 0.0 || params.lambda > 1.0 || params.n_bar < 0.0)
        throw std::domain_error("rate_hybrid: invalid parameters");
    double L = params.L;
    double n = params.n_bar * params.transmission;
    double p = ppm_click_probability(n, L);
    // (1-lambda)(1 - H(eps(L n))) reuses the stable individual-rate form at L n.
    double bsc = rate_individual(L * n);
    return ((1.0 - params.lambda) * bsc + params.lambda * p * std::log2(L - 1.0) +
            z_channel_term(params.lambda, p)) /
           L;
}

// Closed-form asymptotic maximizer of the hybrid prior weight.
inline double lambda_star(int L) {
    double v = (L - 1.0) / (std::exp(1.0) * std::exp2(beta_constant()));
    return v < 1.0 ? v : 1.0;
}

// Maximizes the exact hybrid rate over lambda in [0, 1].
inline std::pair<double, double> optimize_lambda(double n_bar, int L) {
    if (L < 2 || n_bar <= 0.0) throw std::domain_error("optimize_lambda: invalid parameters");
    auto [lam, rate] = detail::golden_max(
        [&](double l) { return rate_hybrid({n_bar, L, l, 1.0}); }, 0.0, 1.0, 1e-10);
    // The optimum may sit on a boundary.
    double r0 = rate_hybrid({n_bar, L, 0.0, 1.0});
    double r1 = rate_hybrid({n_bar, L, 1.0, 1.0});
    if (r0 >= rate && r0 >= r1) return {0.0, r0};
    if (r1 >= rate) return {1.0, r1};
    return {lam, rate};
}

// Piecewise weak-pulse limit of the optimized hybrid rate.
inline double rate_hybrid_asymptotic(double n_bar, double L) {
    if (L < 2.0) throw std::domain_error("rate_hybrid_asymptotic: L must be >= 2");
    double beta = beta_constant();
    double threshold = std::exp(1.0) * std::exp2(beta) + 1.0;
    if (L < threshold)
        return n_bar * (beta + (L - 1.0) / (std::exp(1.0) * std::exp2(beta) * std::log(2.0)));
    return n_bar * std::log2(L - 1.0);
}

}  // namespace suprec
