#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "suprec/simulation.hpp"

namespace suprec {

// Doubles are emitted with 17 significant digits so files round-trip exactly.
inline std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Flat "key = value" config text, '#' starts a comment.
inline std::map<std::string, std::string> parse_key_value(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

inline SchemeConfig config_from_kv(const std::map<std::string, std::string>& kv) {
    SchemeConfig cfg;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    static const char* known[] = {"scheme",       "L",           "nbar",   "lambda",
                                  "trials",       "seed",        "slices", "efficiency",
                                  "dark",         "transmission", "use_decomposed_plan",
                                  "stratified",   "threads",     "amplitude_cap"};
    for (const auto& [key, value] : kv) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::runtime_error("config: unknown key '" + key + "'");
    }
    if (auto* v = get("scheme")) {
        if (*v == "DIRECT_PPM")
            cfg.scheme = Scheme::DirectPpm;
        else if (*v == "HYBRID")
            cfg.scheme = Scheme::Hybrid;
        else
            throw std::runtime_error("config: scheme must be DIRECT_PPM or HYBRID");
    }
    if (auto* v = get("L")) cfg.params.L = std::stoi(*v);
    if (auto* v = get("nbar")) cfg.params.n_bar = std::stod(*v);
    if (auto* v = get("lambda")) cfg.params.lambda = std::stod(*v);
    if (auto* v = get("trials")) cfg.trials = std::stoll(*v);
    if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto* v = get("efficiency")) cfg.detector.efficiency = std::stod(*v);
    if (auto* v = get("dark")) cfg.detector.dark_click_probability = std::stod(*v);
    if (auto* v = get("transmission")) cfg.per_op_transmission = std::stod(*v);
    if (auto* v = get("use_decomposed_plan")) cfg.use_decomposed_plan = (*v == "true" || *v == "1");
    if (auto* v = get("stratified")) cfg.stratified = (*v == "true" || *v == "1");
    if (auto* v = get("threads")) cfg.threads = std::stoi(*v);
    if (cfg.scheme == Scheme::Hybrid) {
        DolinarConfig d;
        if (auto* v = get("slices")) d.num_slices = std::stoi(*v);
        if (auto* v = get("amplitude_cap")) d.amplitude_cap = std::stod(*v);
        d.rng_seed = cfg.seed;
        cfg.dolinar = d;
    }
    return cfg;
}

inline void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& os) {
    os << "input";
    for (const auto& label : cm.outcome_labels) os << "," << label;
    os << "\n";
    for (std::size_t r = 0; r < cm.counts.size(); ++r) {
        os << cm.input_labels[r];
        for (long long c : cm.counts[r]) os << "," << c;
        os << "\n";
    }
}

inline nlohmann::json report_to_json(const RateReport& report) {
    nlohmann::json j;
    j["scheme"] = scheme_name(report.config.scheme);
    j["L"] = report.config.params.L;
    j["nbar"] = report.config.params.n_bar;
    j["lambda"] = report.config.params.lambda;
    j["trials"] = report.config.trials;
    j["seed"] = report.config.seed;
    j["per_op_transmission"] = report.config.per_op_transmission;
    j["eta"] = report.eta;
    j["analytic_rate_bits_per_bin"] = report.analytic_rate;
    j["empirical_rate_bits_per_bin"] = report.empirical_rate;
    j["empirical_stderr_bits_per_bin"] = report.empirical_stderr;
    if (report.erasure_frequency >= 0.0) j["erasure_frequency"] = report.erasure_frequency;
    nlohmann::json outcomes = nlohmann::json::object();
    for (std::size_t r = 0; r < report.confusion.counts.size(); ++r) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t c = 0; c < report.confusion.counts[r].size(); ++c)
            if (report.confusion.counts[r][c] > 0)
                row[report.confusion.outcome_labels[c]] = report.confusion.counts[r][c];
        outcomes[report.confusion.input_labels[r]] = row;
    }
    j["counts"] = outcomes;
    return j;
}

}  // namespace suprec
