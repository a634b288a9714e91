#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "suprec/hadamard.hpp"
#include "suprec/infotheory.hpp"
#include "suprec/io.hpp"

namespace suprec {

enum class SweepScheme { Individual, DirectPpm, Hybrid, Holevo, CapacityAsymptote };

inline std::string sweep_scheme_name(SweepScheme s) {
    switch (s) {
        case SweepScheme::Individual: return "INDIVIDUAL";
        case SweepScheme::DirectPpm: return "DIRECT_PPM";
        case SweepScheme::Hybrid: return "HYBRID";
        case SweepScheme::Holevo: return "HOLEVO";
        default: return "CAPACITY_ASYMPTOTE";
    }
}

// One row per (scheme, nbar, L): exact rate, asymptotic rate, and their
// ratios to the exact individual-detection rate. Discrete rows carry the
// supported Hadamard orders; continuous rows sample the asymptotic formulas
// (and the exact expressions, which extend to real L) on a log grid.
struct SweepSpec {
    std::vector<double> n_bar_values = {2e-4, 2e-2};
    std::vector<int> discrete_L;  // empty selects all supported orders >= 2
    std::vector<SweepScheme> schemes = {SweepScheme::DirectPpm, SweepScheme::Hybrid};
    bool normalize_by_individual = true;
    bool continuous_curves = true;
    int continuous_points = 61;
    double continuous_L_max = 32.0;
};

struct SweepRow {
    std::string scheme;
    std::string kind;  // "discrete" or "continuous"
    double n_bar = 0.0;
    double L = 0.0;
    double exact_rate = 0.0;
    double asymptotic_rate = 0.0;
    double ratio_exact = 0.0;       // exact / I_ind exact
    double ratio_asymptotic = 0.0;  // asymptotic / (beta nbar)
};

inline SweepRow evaluate_sweep_point(SweepScheme scheme, double n_bar, double L, const char* kind) {
    SweepRow row;
    row.scheme = sweep_scheme_name(scheme);
    row.kind = kind;
    row.n_bar = n_bar;
    row.L = L;
    switch (scheme) {
        case SweepScheme::Individual:
            row.exact_rate = rate_individual(n_bar);
            row.asymptotic_rate = rate_individual_asymptotic(n_bar);
            break;
        case SweepScheme::DirectPpm:
            row.exact_rate = rate_ppm(n_bar, L);
            row.asymptotic_rate = rate_ppm_asymptotic(n_bar, L);
            break;
        case SweepScheme::Hybrid: {
            int Li = static_cast<int>(std::lround(L));
            if (std::abs(L - Li) < 1e-9) {
                row.exact_rate = optimize_lambda(n_bar, Li).second;
            } else {
                // Continuous L: optimize the exact formula with L real.
                auto [lam, rate] = detail::golden_max(
                    [&](double l) {
                        double p = ppm_click_probability(n_bar, L);
                        return ((1.0 - l) * rate_individual(L * n_bar) + l * p * std::log2(L - 1.0) +
                                z_channel_term(l, p)) /
                               L;
                    },
                    0.0, 1.0, 1e-10);
                (void)lam;
                row.exact_rate = rate;
            }
            row.asymptotic_rate = rate_hybrid_asymptotic(n_bar, L);
            break;
        }
        case SweepScheme::Holevo:
            row.exact_rate = holevo_bpsk(n_bar);
            row.asymptotic_rate = holevo_bpsk_asymptotic(n_bar);
            break;
        case SweepScheme::CapacityAsymptote:
            row.exact_rate = capacity_asymptote(n_bar);
            row.asymptotic_rate = capacity_asymptote(n_bar);
            break;
    }
    double ind = rate_individual(n_bar);
    row.ratio_exact = row.exact_rate / ind;
    row.ratio_asymptotic = row.asymptotic_rate / rate_individual_asymptotic(n_bar);
    return row;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<int> grid = spec.discrete_L;
    if (grid.empty())
        for (int L : supported_orders())
            if (L >= 2) grid.push_back(L);
    std::vector<SweepRow> rows;
    for (SweepScheme scheme : spec.schemes) {
        bool l_dependent = scheme == SweepScheme::DirectPpm || scheme == SweepScheme::Hybrid;
        for (double n : spec.n_bar_values) {
            if (!l_dependent) {
                rows.push_back(evaluate_sweep_point(scheme, n, 0.0, "discrete"));
                continue;
            }
            for (int L : grid) rows.push_back(evaluate_sweep_point(scheme, n, L, "discrete"));
            if (spec.continuous_curves) {
                double lo = std::log(2.0), hi = std::log(spec.continuous_L_max);
                for (int i = 0; i < spec.continuous_points; ++i) {
                    double L = std::exp(lo + (hi - lo) * i / (spec.continuous_points - 1));
                    rows.push_back(evaluate_sweep_point(scheme, n, L, "continuous"));
                }
            }
        }
    }
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os,
                            bool normalize_by_individual = true) {
    os << "scheme,kind,nbar,L,exact_rate,asymptotic_rate";
    if (normalize_by_individual) os << ",ratio_exact,ratio_asymptotic";
    os << "\n";
    for (const auto& r : rows) {
        os << r.scheme << "," << r.kind << "," << fmt17(r.n_bar) << "," << fmt17(r.L) << ","
           << fmt17(r.exact_rate) << "," << fmt17(r.asymptotic_rate);
        if (normalize_by_individual) os << "," << fmt17(r.ratio_exact) << "," << fmt17(r.ratio_asymptotic);
        os << "\n";
    }
}

}  // namespace suprec
