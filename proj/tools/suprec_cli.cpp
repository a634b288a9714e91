// Command-line front end: analytic rate tables, Fig-style sweeps, circuit
// decomposition dumps, Dolinar convergence studies, Monte Carlo runs, and
// Hadamard matrix import/export.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "suprec/circuit.hpp"
#include "suprec/detection.hpp"
#include "suprec/hadamard.hpp"
#include "suprec/infotheory.hpp"
#include "suprec/io.hpp"
#include "suprec/simulation.hpp"
#include "suprec/sweep.hpp"

using namespace suprec;

namespace {

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output path '" + path + "'");
    return file;
}

int cmd_analytic(double n_bar, int L, double lambda_flag, bool lambda_given, const std::string& out,
                 const std::string& format) {
    if (!is_supported_order(L) || L < 2)
        throw std::runtime_error("no Hadamard matrix of order " + std::to_string(L));
    if (n_bar <= 0.0) throw std::runtime_error("nbar must be positive");

    double ind = rate_individual(n_bar);
    double ppm = rate_ppm(n_bar, L);
    auto [lam_opt, hyb_opt] = optimize_lambda(n_bar, L);
    double lambda = lambda_given ? lambda_flag : lam_opt;
    double hyb = rate_hybrid({n_bar, L, lambda, 1.0});
    double holevo = holevo_bpsk(n_bar);
    double cap = n_bar < 1.0 ? capacity_asymptote(n_bar) : holevo;

    std::ofstream file;
    std::ostream& os = open_out(file, out);
    if (format == "json") {
        nlohmann::json j;
        j["nbar"] = n_bar;
        j["L"] = L;
        j["lambda"] = lambda;
        j["lambda_opt"] = lam_opt;
        j["rate_individual"] = ind;
        j["rate_ppm"] = ppm;
        j["rate_hybrid"] = hyb;
        j["rate_hybrid_opt"] = hyb_opt;
        j["rate_hybrid_asymptotic"] = rate_hybrid_asymptotic(n_bar, L);
        j["holevo_bpsk"] = holevo;
        j["capacity_asymptote"] = cap;
        j["ratio_ppm"] = ppm / ind;
        j["ratio_hybrid"] = hyb_opt / ind;
        os << j.dump(2) << "\n";
    } else {
        os << "quantity,value\n";
        os << "nbar," << fmt17(n_bar) << "\n";
        os << "L," << L << "\n";
        os << "lambda," << fmt17(lambda) << "\n";
        os << "lambda_opt," << fmt17(lam_opt) << "\n";
        os << "rate_individual," << fmt17(ind) << "\n";
        os << "rate_ppm," << fmt17(ppm) << "\n";
        os << "rate_hybrid," << fmt17(hyb) << "\n";
        os << "rate_hybrid_opt," << fmt17(hyb_opt) << "\n";
        os << "rate_hybrid_asymptotic," << fmt17(rate_hybrid_asymptotic(n_bar, L)) << "\n";
        os << "holevo_bpsk," << fmt17(holevo) << "\n";
        os << "capacity_asymptote," << fmt17(cap) << "\n";
        os << "ratio_ppm," << fmt17(ppm / ind) << "\n";
        os << "ratio_hybrid," << fmt17(hyb_opt / ind) << "\n";
    }
    return 0;
}

SchemeConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file '" + path + "'");
    return config_from_kv(parse_key_value(is));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superadditive BPSK receiver simulator"};
    app.require_subcommand(1);

    // analytic
    auto* analytic = app.add_subcommand("analytic", "Closed-form rate table for one (nbar, L, lambda)");
    double a_nbar = 2e-4, a_lambda = 0.0;
    int a_L = 8;
    std::string a_out, a_format = "csv";
    analytic->add_option("--nbar", a_nbar, "mean photon number per bin");
    analytic->add_option("--L", a_L, "sequence length");
    auto* a_lambda_opt = analytic->add_option("--lambda", a_lambda, "hybrid prior weight (default: optimal)");
    analytic->add_option("--out", a_out, "output path (default stdout)");
    analytic->add_option("--format", a_format)->check(CLI::IsMember({"csv", "json"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Rate-ratio sweep over sequence lengths");
    std::vector<double> s_nbar = {2e-4, 2e-2};
    std::vector<std::string> s_schemes = {"DIRECT_PPM", "HYBRID"};
    std::string s_out;
    bool s_raw = false;
    int s_points = 61;
    double s_lmax = 32.0;
    sweep->add_option("--nbar", s_nbar, "mean photon numbers");
    sweep->add_option("--schemes", s_schemes, "subset of INDIVIDUAL DIRECT_PPM HYBRID HOLEVO CAPACITY_ASYMPTOTE");
    sweep->add_option("--out", s_out, "output CSV path (default stdout)");
    sweep->add_flag("--raw", s_raw, "omit ratio-to-individual columns");
    sweep->add_option("--points", s_points, "continuous-curve sample count");
    sweep->add_option("--Lmax", s_lmax, "continuous-curve upper L");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run from a config file");
    std::string m_config, m_out;
    double m_nbar = -1.0, m_lambda = -1.0, m_eff = -1.0, m_dark = -1.0, m_trans = -1.0;
    int m_L = 0, m_slices = 0, m_threads = -1;
    long long m_trials = 0;
    std::uint64_t m_seed = 0;
    bool m_seed_given = false;
    simulate->add_option("--config", m_config, "key = value config file");
    simulate->add_option("--nbar", m_nbar);
    simulate->add_option("--L", m_L);
    simulate->add_option("--lambda", m_lambda);
    simulate->add_option("--trials", m_trials);
    simulate->add_option("--seed", m_seed)->each([&](const std::string&) { m_seed_given = true; });
    simulate->add_option("--slices", m_slices);
    simulate->add_option("--efficiency", m_eff);
    simulate->add_option("--dark", m_dark);
    simulate->add_option("--transmission", m_trans);
    simulate->add_option("--threads", m_threads);
    simulate->add_option("--out", m_out, "JSON report path; confusion CSV goes next to it");
    std::string m_scheme;
    simulate->add_option("--scheme", m_scheme)->check(CLI::IsMember({"DIRECT_PPM", "HYBRID"}));

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Triangular beam-splitter plan for the Hadamard circuit");
    int d_L = 8;
    std::string d_out;
    double d_trans = 1.0;
    decompose->add_option("--L", d_L, "sequence length");
    decompose->add_option("--out", d_out, "plan output path (default stdout)");
    decompose->add_option("--transmission", d_trans, "per-op power transmission; adds equalized attenuation");

    // dolinar
    auto* dolinar = app.add_subcommand("dolinar", "Dolinar receiver convergence table");
    double dl_neff = 0.2;
    std::vector<int> dl_slices = {1, 10, 100, 10000};
    long long dl_trials = 100000;
    std::uint64_t dl_seed = 1;
    std::string dl_out;
    dolinar->add_option("--neff", dl_neff, "mean photon number of the discriminated pulse");
    dolinar->add_option("--slices", dl_slices, "slice counts");
    dolinar->add_option("--trials", dl_trials);
    dolinar->add_option("--seed", dl_seed);
    dolinar->add_option("--out", dl_out, "output CSV path (default stdout)");

    // hadamard
    auto* hadamard = app.add_subcommand("hadamard", "Matrix export/import/validate");
    auto* h_export = hadamard->add_subcommand("export", "write construct(L) as text");
    int h_L = 8;
    std::string h_out, h_in;
    h_export->add_option("--L", h_L);
    h_export->add_option("--out", h_out);
    auto* h_import = hadamard->add_subcommand("import", "read and validate a matrix file");
    h_import->add_option("--in", h_in)->required();
    auto* h_validate = hadamard->add_subcommand("validate", "exit 0 iff the file holds a Hadamard matrix");
    std::string h_vin;
    h_validate->add_option("--in", h_vin)->required();
    hadamard->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analytic) return cmd_analytic(a_nbar, a_L, a_lambda, a_lambda_opt->count() > 0, a_out, a_format);

        if (*sweep) {
            SweepSpec spec;
            spec.n_bar_values = s_nbar;
            spec.normalize_by_individual = !s_raw;
            spec.continuous_points = s_points;
            spec.continuous_L_max = s_lmax;
            spec.schemes.clear();
            for (const auto& name : s_schemes) {
                if (name == "INDIVIDUAL")
                    spec.schemes.push_back(SweepScheme::Individual);
                else if (name == "DIRECT_PPM")
                    spec.schemes.push_back(SweepScheme::DirectPpm);
                else if (name == "HYBRID")
                    spec.schemes.push_back(SweepScheme::Hybrid);
                else if (name == "HOLEVO")
                    spec.schemes.push_back(SweepScheme::Holevo);
                else if (name == "CAPACITY_ASYMPTOTE")
                    spec.schemes.push_back(SweepScheme::CapacityAsymptote);
                else
                    throw std::runtime_error("unknown scheme '" + name + "'");
            }
            for (double n : spec.n_bar_values)
                if (n <= 0.0) throw std::runtime_error("nbar values must be positive");
            std::ofstream file;
            std::ostream& os = open_out(file, s_out);
            write_sweep_csv(run_sweep(spec), os, spec.normalize_by_individual);
            return 0;
        }

        if (*simulate) {
            SchemeConfig cfg = m_config.empty() ? SchemeConfig{} : load_config(m_config);
            if (m_config.empty() && m_scheme.empty())
                throw std::runtime_error("simulate needs --config or --scheme plus flags");
            if (!m_scheme.empty()) cfg.scheme = m_scheme == "HYBRID" ? Scheme::Hybrid : Scheme::DirectPpm;
            if (m_nbar >= 0.0) cfg.params.n_bar = m_nbar;
            if (m_L > 0) cfg.params.L = m_L;
            if (m_lambda >= 0.0) cfg.params.lambda = m_lambda;
            if (m_trials > 0) cfg.trials = m_trials;
            if (m_seed_given) cfg.seed = m_seed;
            if (m_eff >= 0.0) cfg.detector.efficiency = m_eff;
            if (m_dark >= 0.0) cfg.detector.dark_click_probability = m_dark;
            if (m_trans > 0.0) cfg.per_op_transmission = m_trans;
            if (m_threads >= 0) cfg.threads = m_threads;
            if (cfg.scheme == Scheme::Hybrid && !cfg.dolinar) cfg.dolinar = DolinarConfig{};
            if (cfg.scheme != Scheme::Hybrid) cfg.dolinar.reset();
            if (cfg.dolinar && m_slices > 0) cfg.dolinar->num_slices = m_slices;
            validate_config(cfg);

            RateReport report = compare_report(cfg);
            nlohmann::json j = report_to_json(report);
            std::cerr << "seed: " << cfg.seed << "\n";
            if (m_out.empty()) {
                std::cout << j.dump(2) << "\n";
                write_confusion_csv(report.confusion, std::cout);
            } else {
                std::ofstream jf(m_out);
                if (!jf) throw std::runtime_error("cannot open output path '" + m_out + "'");
                jf << j.dump(2) << "\n";
                std::string csv_path = m_out + ".confusion.csv";
                std::ofstream cf(csv_path);
                write_confusion_csv(report.confusion, cf);
                std::cerr << "report: " << m_out << "\nconfusion: " << csv_path << "\n";
            }
            return 0;
        }

        if (*decompose) {
            auto w = rescaled_matrix(construct(d_L));
            auto plan = decompose_triangular(w);
            double eta = 1.0;
            if (d_trans < 1.0) {
                auto [eq, e] = equalize_attenuation(plan, d_trans);
                plan = std::move(eq);
                eta = e;
            }
            std::ofstream file;
            std::ostream& os = open_out(file, d_out);
            export_plan(plan, os);
            // Verification against the dense matrix (lossless recomposition).
            auto lossless = d_trans < 1.0 ? decompose_triangular(w) : plan;
            double worst = 0.0;
            auto composed = compose_plan(lossless);
            for (std::size_t i = 0; i < composed.a.size(); ++i)
                worst = std::max(worst, std::abs(composed.a[i] - w.a[i]));
            os << "# max reconstruction error " << fmt17(worst) << "\n";
            if (d_trans < 1.0) os << "# overall transmission eta " << fmt17(eta) << "\n";
            return 0;
        }

        if (*dolinar) {
            if (dl_neff < 0.0) throw std::runtime_error("neff must be nonnegative");
            double target = helstrom_error(dl_neff);
            double amp = std::sqrt(dl_neff);
            std::ofstream file;
            std::ostream& os = open_out(file, dl_out);
            os << "slices,empirical_error,stderr,helstrom_error\n";
            for (int slices : dl_slices) {
                DolinarConfig cfg{slices, 0.0, dl_seed};
                DolinarReceiver receiver(amp, cfg);
                long long errors = 0;
                for (long long t = 0; t < dl_trials; ++t) {
                    Rng rng = make_stream(dl_seed, static_cast<std::uint64_t>(t));
                    int truth = (t & 1) ? 1 : -1;
                    if (receiver.decide(truth * amp, rng) != truth) ++errors;
                }
                double err = static_cast<double>(errors) / dl_trials;
                double se = std::sqrt(std::max(err * (1.0 - err), 1e-300) / dl_trials);
                os << slices << "," << fmt17(err) << "," << fmt17(se) << "," << fmt17(target) << "\n";
            }
            return 0;
        }

        if (*h_export) {
            std::ofstream file;
            std::ostream& os = open_out(file, h_out);
            export_matrix(construct(h_L), os);
            return 0;
        }
        if (*h_import) {
            std::ifstream is(h_in);
            if (!is) throw std::runtime_error("cannot open '" + h_in + "'");
            auto m = import_matrix(is);
            std::cout << "valid Hadamard matrix of order " << m.order << "\n";
            return 0;
        }
        if (*h_validate) {
            std::ifstream is(h_vin);
            if (!is) throw std::runtime_error("cannot open '" + h_vin + "'");
            try {
                import_matrix(is);
            } catch (const std::exception& e) {
                std::cout << "invalid: " << e.what() << "\n";
                return 1;
            }
            std::cout << "valid\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
