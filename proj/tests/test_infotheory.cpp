#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "suprec/infotheory.hpp"

using namespace suprec;

namespace {

// Direct textbook forms used as oracles at moderate arguments.
double entropy_direct(double x) { return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x); }

}  // namespace

TEST_CASE("binary_entropy endpoints and oracle agreement") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.11) == doctest::Approx(entropy_direct(0.11)).epsilon(1e-14));
    CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-14));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("helstrom_error known values") {
    CHECK(helstrom_error(0.0) == 0.5);
    CHECK(helstrom_error(50.0) < 1e-40);
    CHECK(helstrom_error(0.25) ==
          doctest::Approx(0.5 * (1.0 - std::sqrt(1.0 - std::exp(-1.0)))).epsilon(1e-14));
    CHECK(helstrom_error(0.2) == doctest::Approx(0.12896393844978543).epsilon(1e-14));
    CHECK(helstrom_error(4.0) == doctest::Approx(2.8133794460760697e-08).epsilon(1e-10));
    CHECK_THROWS_AS(helstrom_error(-1.0), std::domain_error);
}

TEST_CASE("rate_individual exact values and weak-pulse slope") {
    CHECK(rate_individual(0.0) == 0.0);
    CHECK(rate_individual(1e-5) / 1e-5 == doctest::Approx(beta_constant()).epsilon(0.01));
    CHECK(rate_individual(2e-2) < beta_constant() * 2e-2);
    CHECK(rate_individual(2e-4) == doctest::Approx(0.0005769241535039735).epsilon(1e-13));
    CHECK(rate_individual(2e-2) == doctest::Approx(0.056193292840600845).epsilon(1e-13));
    CHECK(rate_individual(1.0) == doctest::Approx(0.9576632521445042).epsilon(1e-13));
    CHECK(rate_individual_asymptotic(3e-4) == doctest::Approx(beta_constant() * 3e-4).epsilon(1e-15));
    CHECK_THROWS_AS(rate_individual(-1e-9), std::domain_error);
}

TEST_CASE("holevo_bpsk values and relation to other quantities") {
    CHECK(holevo_bpsk(0.0) == 0.0);
    CHECK(holevo_bpsk(50.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(holevo_bpsk(2e-4) == doctest::Approx(0.0027455611910662055).epsilon(1e-13));
    CHECK(holevo_bpsk(2e-2) == doctest::Approx(0.13921853522266778).epsilon(1e-13));
    CHECK(holevo_bpsk(1.0) == doctest::Approx(0.9867474300396564).epsilon(1e-13));
    CHECK(holevo_bpsk(1e-4) > 4.0 * rate_individual(1e-4));
    // Exact value sits below the second-order expansion but shares the leading term.
    CHECK(holevo_bpsk(1e-4) < capacity_asymptote(1e-4));
    CHECK(holevo_bpsk(1e-4) / holevo_bpsk_asymptotic(1e-4) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("capacity_asymptote arithmetic and domain") {
    double ln2 = std::log(2.0);
    CHECK(capacity_asymptote(1e-3) == doctest::Approx(1e-3 * std::log2(1000.0) + 1e-3 / ln2).epsilon(1e-14));
    CHECK(capacity_asymptote(0.5) == doctest::Approx(0.5 + 0.5 / ln2).epsilon(1e-14));
    CHECK_THROWS_AS(capacity_asymptote(0.0), std::domain_error);
    CHECK_THROWS_AS(capacity_asymptote(1.0), std::domain_error);
}

TEST_CASE("ppm_click_probability limits and stability") {
    CHECK(ppm_click_probability(0.0, 8.0) == 0.0);
    CHECK(ppm_click_probability(100.0, 8.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ppm_click_probability(2e-4, 8.0) == doctest::Approx(0.0015987206823936874).epsilon(1e-14));
    // Tiny arguments stay exact to first order instead of cancelling to zero.
    CHECK(ppm_click_probability(1e-15, 2.0) == doctest::Approx(2e-15).epsilon(1e-9));
    CHECK_THROWS_AS(ppm_click_probability(-1.0, 8.0), std::domain_error);
}

TEST_CASE("rate_ppm and the superadditivity threshold") {
    CHECK(rate_ppm(0.0, 8.0) == 0.0);
    CHECK(rate_ppm(2e-4, 8.0) == doctest::Approx(0.0005995202558976328).epsilon(1e-13));
    CHECK(rate_ppm(2e-2, 16.0) == doctest::Approx(0.06846274073157727).epsilon(1e-13));
    CHECK(rate_ppm(2e-4, 8.0) / rate_individual(2e-4) > 1.0);
    CHECK(rate_ppm(2e-4, 8.0) / rate_individual(2e-4) == doctest::Approx(1.0391665).epsilon(1e-5));
    CHECK(rate_ppm(2e-4, 4.0) / rate_individual(2e-4) < 1.0);
    CHECK(rate_ppm_asymptotic(2e-4, 8.0) == doctest::Approx(2e-4 * 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(rate_ppm(1e-3, 1.5), std::domain_error);
}

TEST_CASE("smallest supported length with a gain is eight") {
    double ind = rate_individual(2e-4);
    int smallest = 0;
    for (int L : {2, 4, 8, 12, 16, 20, 24, 28, 32})
        if (smallest == 0 && rate_ppm(2e-4, L) > ind) smallest = L;
    CHECK(smallest == 8);
}

TEST_CASE("ppm_optimal_length against a numeric oracle") {
    auto [l1, r1] = ppm_optimal_length(2e-4);
    CHECK(l1 == doctest::Approx(1443.9477975434459).epsilon(1e-6));
    CHECK(r1 == doctest::Approx(0.0018232403351270284).epsilon(1e-10));
    auto [l2, r2] = ppm_optimal_length(2e-2);
    CHECK(l2 == doctest::Approx(32.23309072825392).epsilon(1e-6));
    CHECK(r2 == doctest::Approx(0.07386121348524832).epsilon(1e-10));
    CHECK(l1 > l2);  // longer sequences pay off at weaker pulses

    auto [l3, r3] = ppm_optimal_length(1e-6);
    CHECK(r3 == doctest::Approx(ppm_optimal_rate_asymptotic(1e-6)).epsilon(0.05));
    CHECK(l2 * 2e-2 > 0.3);
    CHECK(l2 * 2e-2 < 10.0);
    (void)l3;
    CHECK_THROWS_AS(ppm_optimal_length(0.0), std::domain_error);
    CHECK_THROWS_AS(ppm_optimal_length(0.2), std::domain_error);
}

TEST_CASE("z_channel_term endpoints and small-p behaviour") {
    CHECK(z_channel_term(0.0, 0.3) == 0.0);
    CHECK(z_channel_term(1.0, 0.3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(z_channel_term(0.4, 0.0) == 0.0);
    double exact = z_channel_term(0.3, 1e-3);
    CHECK(exact == doctest::Approx(z_channel_term_asymptotic(0.3, 1e-3)).epsilon(0.02));
    CHECK_THROWS_AS(z_channel_term(-0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(z_channel_term(0.5, 1.1), std::domain_error);
}

TEST_CASE("rate_hybrid endpoint reductions") {
    double n = 3e-4;
    int L = 8;
    double p = ppm_click_probability(n, L);
    CHECK(rate_hybrid({n, L, 1.0, 1.0}) == doctest::Approx(p / L * std::log2(L - 1.0)).epsilon(1e-12));
    CHECK(rate_hybrid({n, L, 0.0, 1.0}) == doctest::Approx(rate_individual(L * n) / L).epsilon(1e-12));
    CHECK(rate_hybrid({2e-4, 8, 0.3, 1.0}) == doctest::Approx(0.0006755835942529269).epsilon(1e-13));
    // transmission folds in as nbar -> eta nbar.
    CHECK(rate_hybrid({n, L, 0.3, 0.9}) == doctest::Approx(rate_hybrid({0.9 * n, L, 0.3, 1.0})).epsilon(1e-14));
    CHECK_THROWS_AS(rate_hybrid({n, 1, 0.3, 1.0}), std::domain_error);
    CHECK_THROWS_AS(rate_hybrid({n, 8, 1.2, 1.0}), std::domain_error);
}

TEST_CASE("optimize_lambda against frozen optima and the closed form") {
    auto [lam8, rate8] = optimize_lambda(2e-4, 8);
    CHECK(lam8 == doctest::Approx(0.34952338613132405).epsilon(1e-5));
    CHECK(rate8 == doctest::Approx(0.0006766471485047908).epsilon(1e-11));
    double e2b = std::exp(1.0) * std::exp2(beta_constant());
    CHECK(rate8 / 2e-4 == doctest::Approx(beta_constant() + 7.0 / (e2b * std::log(2.0))).epsilon(0.01));

    auto [lam32, rate32] = optimize_lambda(2e-4, 32);
    CHECK(lam32 > 0.999);
    CHECK(rate32 == doctest::Approx(2e-4 * std::log2(31.0)).epsilon(0.01));

    auto [lam2, rate2] = optimize_lambda(2e-4, 2);
    CHECK(lam2 == doctest::Approx(0.049829234404339826).epsilon(1e-4));
    CHECK(rate2 / rate_individual(2e-4) == doctest::Approx(1.0246499167471135).epsilon(1e-6));

    auto [lamA, rateA] = optimize_lambda(1e-5, 8);
    (void)rateA;
    CHECK(std::abs(lamA - lambda_star(8)) < 0.02);
    CHECK(lambda_star(8) == doctest::Approx(0.3485094785750476).epsilon(1e-12));
    CHECK(lambda_star(32) == 1.0);
    CHECK_THROWS_AS(optimize_lambda(0.0, 8), std::domain_error);
}

TEST_CASE("optimizer never loses on a dense lambda grid or its endpoints") {
    for (double n : {1e-5, 2e-4, 2e-2}) {
        for (int L : {2, 8, 24}) {
            auto [lam, rate] = optimize_lambda(n, L);
            (void)lam;
            for (int i = 0; i <= 1000; ++i) {
                double l = i / 1000.0;
                CHECK(rate >= rate_hybrid({n, L, l, 1.0}) - 1e-14);
            }
        }
    }
}

TEST_CASE("asymptotic hybrid rate branches") {
    double n = 2e-4;
    double beta = beta_constant();
    double e2b = std::exp(1.0) * std::exp2(beta);
    double ln2 = std::log(2.0);
    CHECK(rate_hybrid_asymptotic(n, 2.0) == doctest::Approx(n * (beta + 1.0 / (e2b * ln2))).epsilon(1e-14));
    CHECK(rate_hybrid_asymptotic(n, 2.0) / (beta * n) == doctest::Approx(1.025).epsilon(1e-3));
    CHECK(rate_hybrid_asymptotic(n, 24.0) == doctest::Approx(n * std::log2(23.0)).epsilon(1e-14));
    CHECK(rate_hybrid_asymptotic(n, 8.0) == doctest::Approx(0.0006776365956441894).epsilon(1e-12));
    // The two branches agree at the threshold length.
    double thr = e2b + 1.0;
    double below = n * (beta + (thr - 1.0) / (e2b * ln2));
    double above = n * std::log2(thr - 1.0);
    CHECK(below == doctest::Approx(above).epsilon(1e-12));
    CHECK(rate_hybrid_asymptotic(n, thr) == doctest::Approx(above).epsilon(1e-12));
    CHECK_THROWS_AS(rate_hybrid_asymptotic(n, 1.0), std::domain_error);
}

TEST_CASE("exact optimum matches the asymptotic formula at weak pulses") {
    for (int L : {2, 4, 8, 12, 16, 20}) {
        double exact = optimize_lambda(1e-6, L).second;
        double asym = rate_hybrid_asymptotic(1e-6, L);
        CHECK(std::abs(exact - asym) / asym < 0.005);
    }
    for (int L : {24, 28, 32}) {
        auto [lam, exact] = optimize_lambda(1e-6, L);
        CHECK(lam > 1.0 - 1e-6);
        CHECK(std::abs(exact - 1e-6 * std::log2(L - 1.0)) / exact < 0.005);
    }
}

TEST_CASE("ordering and ceiling invariants") {
    for (double n = 1e-4; n <= 0.1; n *= 3.0) {
        CHECK(rate_individual(n) <= holevo_bpsk(n) + 1e-15);
        for (int L : {2, 4, 8, 12, 16, 20, 24, 28, 32})
            CHECK(rate_ppm(n, L) <= std::log2(static_cast<double>(L)) / L + 1e-15);
    }
}

TEST_CASE("all analytic formulas are finite and nonnegative over twelve decades") {
    auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    int points = 10000;
    for (int i = 0; i < points; ++i) {
        double n = std::pow(10.0, -12.0 + 12.0 * i / (points - 1.0));
        CHECK(finite_nonneg(helstrom_error(n)));
        CHECK(finite_nonneg(rate_individual(n)));
        CHECK(finite_nonneg(holevo_bpsk(n)));
        if (n < 1.0) CHECK(finite_nonneg(capacity_asymptote(n)));
        CHECK(finite_nonneg(rate_ppm(n, 8.0)));
        CHECK(finite_nonneg(rate_hybrid({n, 8, 0.3, 1.0})));
        CHECK(finite_nonneg(rate_hybrid_asymptotic(n, 8.0)));
        CHECK(finite_nonneg(z_channel_term(0.3, ppm_click_probability(n, 8.0))));
    }
    CHECK(rate_individual(0.0) == 0.0);
    CHECK(holevo_bpsk(0.0) == 0.0);
    CHECK(rate_ppm(0.0, 8.0) == 0.0);
    CHECK(rate_hybrid({0.0, 8, 0.3, 1.0}) == 0.0);
}
