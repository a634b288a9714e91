#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "suprec/detection.hpp"
#include "suprec/infotheory.hpp"
#include "suprec/rng.hpp"

using namespace suprec;

namespace {

// Empirical Dolinar error rate over independent per-trial streams, alternating
// the true hypothesis so both signs are exercised equally.
double dolinar_error(double n_eff, int slices, long long trials, std::uint64_t seed) {
    double a = std::sqrt(n_eff);
    DolinarReceiver receiver(a, DolinarConfig{slices, 0.0, seed});
    long long errors = 0;
    for (long long t = 0; t < trials; ++t) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(t));
        int truth = (t & 1) ? 1 : -1;
        if (receiver.decide(truth * a, rng) != truth) ++errors;
    }
    return static_cast<double>(errors) / trials;
}

double binom_sigma(double p, long long n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("click_probability closed forms") {
    DetectorModel ideal;
    CHECK(click_probability(0.0, ideal) == 0.0);
    CHECK(click_probability(0.01, ideal) == doctest::Approx(1.0 - std::exp(-0.01)).epsilon(1e-14));
    DetectorModel half{0.5, 0.0};
    CHECK(click_probability(2.0, half) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    DetectorModel dark{1.0, 0.2};
    CHECK(click_probability(0.0, dark) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("threshold_detect frequencies match the closed form") {
    long long samples = 1000000;
    DetectorModel ideal;
    AmplitudeVector v = {std::sqrt(0.01), 0.0, {0.0, std::sqrt(0.5)}};
    std::vector<long long> hits(3, 0);
    for (long long t = 0; t < samples; ++t) {
        Rng rng = make_stream(404, static_cast<std::uint64_t>(t));
        auto clicks = threshold_detect(v, ideal, rng);
        for (int i = 0; i < 3; ++i)
            if (clicks[i]) ++hits[i];
    }
    double p0 = 1.0 - std::exp(-0.01), p2 = 1.0 - std::exp(-0.5);
    CHECK(std::abs(hits[0] / static_cast<double>(samples) - p0) < 3.0 * binom_sigma(p0, samples));
    CHECK(hits[1] == 0);
    CHECK(std::abs(hits[2] / static_cast<double>(samples) - p2) < 3.0 * binom_sigma(p2, samples));
}

TEST_CASE("dolinar: vacuum hypotheses give a fair coin") {
    long long trials = 100000;
    double err = dolinar_error(0.0, 100, trials, 9);
    CHECK(std::abs(err - 0.5) < 3.0 * binom_sigma(0.5, trials));
}

TEST_CASE("dolinar converges to the minimum-error bound") {
    long long trials = 1000000;
    double target = helstrom_error(0.2);
    double err = dolinar_error(0.2, 10000, trials, 17);
    CHECK(std::abs(err - target) < 3.0 * binom_sigma(target, trials));
}

TEST_CASE("dolinar at strong pulses is nearly error-free") {
    long long trials = 1000000;
    double err = dolinar_error(4.0, 10000, trials, 23);
    // Target 2.8e-8; three binomial sigmas allow a couple of stray errors.
    CHECK(err < 1e-5);
}

TEST_CASE("dolinar error is monotone non-increasing in the slice count") {
    long long trials = 1000000;
    double prev = 1.0;
    for (int slices : {1, 10, 100, 10000}) {
        double err = dolinar_error(0.2, slices, trials, 31);
        CHECK(err <= prev + 3.0 * binom_sigma(err, trials));
        CHECK(err < prev);  // strict at these spacings and trial counts
        prev = err;
    }
    // A single slice cannot reach the bound.
    double single = dolinar_error(0.2, 1, trials, 31);
    CHECK(single > helstrom_error(0.2) + 0.01);
    CHECK(single < 0.5);
}

TEST_CASE("dolinar is symmetric between the hypotheses") {
    long long trials = 500000;
    double a = std::sqrt(0.2);
    DolinarReceiver receiver(a, DolinarConfig{500, 0.0, 0});
    long long errp = 0, errm = 0;
    for (long long t = 0; t < trials; ++t) {
        Rng rp = make_stream(61, static_cast<std::uint64_t>(t));
        Rng rm = make_stream(62, static_cast<std::uint64_t>(t));
        if (receiver.decide(a, rp) != 1) ++errp;
        if (receiver.decide(-a, rm) != -1) ++errm;
    }
    double ep = static_cast<double>(errp) / trials, em = static_cast<double>(errm) / trials;
    CHECK(std::abs(ep - em) < 3.0 * std::sqrt(ep * (1 - ep) / trials + em * (1 - em) / trials));
}

TEST_CASE("dolinar configuration validation") {
    CHECK_THROWS_AS(DolinarReceiver(-0.1, DolinarConfig{10, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(DolinarReceiver(0.5, DolinarConfig{0, 0.0, 0}), std::invalid_argument);
    // The feedback magnitude respects the configured cap.
    DolinarReceiver capped(1.0, DolinarConfig{100, 2.5, 0});
    for (int k = 0; k < 100; ++k) CHECK(capped.displacement(k) <= 2.5);
    CHECK(capped.displacement(0) == doctest::Approx(2.5));
}

TEST_CASE("decode_direct outcomes") {
    DetectionRecord one{{false, false, true, false}, std::nullopt, std::nullopt};
    auto r = decode_direct(one);
    CHECK(r.kind == OutcomeKind::WordIndex);
    CHECK(r.word_index == 2);

    DetectionRecord none{{false, false, false}, std::nullopt, std::nullopt};
    CHECK(decode_direct(none).kind == OutcomeKind::Erasure);

    DetectionRecord two{{true, false, true}, std::nullopt, std::nullopt};
    CHECK(decode_direct(two).kind == OutcomeKind::Ambiguous);

    DetectionRecord with_port{{false}, 0, 1};
    CHECK_THROWS_AS(decode_direct(with_port), std::invalid_argument);
}

TEST_CASE("decode_hybrid outcomes") {
    DetectionRecord click{{false, false, false, true}, 0, 1};
    auto r = decode_hybrid(click);
    CHECK(r.kind == OutcomeKind::WordIndex);
    CHECK(r.word_index == 3);

    DetectionRecord plus{{false, false, false, false}, 0, 1};
    CHECK(decode_hybrid(plus).kind == OutcomeKind::PlusWord);
    DetectionRecord minus{{false, false, false, false}, 0, -1};
    CHECK(decode_hybrid(minus).kind == OutcomeKind::MinusWord);

    // A click on the Dolinar port itself is ignored by the counter logic.
    DetectionRecord port_click{{true, false, false, false}, 0, -1};
    CHECK(decode_hybrid(port_click).kind == OutcomeKind::MinusWord);

    DetectionRecord two{{false, true, true, false}, 0, 1};
    CHECK(decode_hybrid(two).kind == OutcomeKind::Ambiguous);

    DetectionRecord bare{{false, false}, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(decode_hybrid(bare), std::invalid_argument);
}
