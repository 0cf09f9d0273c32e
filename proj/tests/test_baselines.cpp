#include "hrkl/baselines.hpp"
#include "hrkl/errors.hpp"
#include "oracles/dtw_paths.hpp"
#include "oracles/normal_quantile.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hrkl;

TEST_CASE("dtw small cases") {
    const std::vector<double> a{0, 1, 2}, b{0, 2}, z{0}, t{3};
    CHECK(dtw_distance(a, a) == 0.0);
    CHECK(dtw_distance(z, t) == 3.0);
    CHECK(dtw_distance(a, b) == doctest::Approx(oracle::dtw_by_paths(a, b)));
    CHECK(dtw_distance(a, b) == doctest::Approx(1.0));
}

TEST_CASE("dtw equals the best warping path") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    std::vector<std::vector<double>> corpus;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> s(1 + rng() % 6);
        for (auto& v : s) v = nd(rng);
        corpus.push_back(s);
    }
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            CHECK(dtw_distance(a, b) == doctest::Approx(oracle::dtw_by_paths(a, b)).epsilon(1e-12));
            CHECK(dtw_distance(a, b) == dtw_distance(b, a));
        }
}

TEST_CASE("sax breakpoints are normal quantiles") {
    for (std::size_t alpha = 2; alpha <= 10; ++alpha) {
        const auto bp = sax_breakpoints(alpha);
        REQUIRE(bp.size() == alpha - 1);
        for (std::size_t i = 0; i < bp.size(); ++i)
            CHECK(std::abs(bp[i] - oracle::normal_quantile(static_cast<double>(i + 1) / alpha)) < 1e-3);
    }
    const auto four = sax_breakpoints(4);
    CHECK(four[0] == doctest::Approx(-0.6745).epsilon(1e-3));
    CHECK(std::abs(four[1]) < 1e-12);
    CHECK(four[2] == doctest::Approx(0.6745).epsilon(1e-3));
}

TEST_CASE("sax words") {
    SaxConfig cfg{16, 4, 4, true};
    std::vector<double> ramp(16);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    CHECK(sax_word(ramp, cfg) == "abcd");
    const std::vector<double> flat(16, 2.0);
    CHECK(sax_word(flat, cfg) == "cccc");
    SaxConfig odd{10, 3, 4, true};
    std::vector<double> r10(10);
    for (std::size_t i = 0; i < r10.size(); ++i) r10[i] = static_cast<double>(i);
    CHECK(sax_word(r10, odd).front() == 'a');
    CHECK(sax_word(r10, odd).back() == 'd');
}

TEST_CASE("bag of patterns") {
    SaxConfig cfg{8, 4, 4, true};
    const std::vector<double> flat(40, 1.0);
    const auto h = sax_bop_histogram(flat, cfg);
    REQUIRE(h.size() == 1);
    CHECK(h.begin()->second == 1);

    std::vector<double> s(60);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (auto& v : s) v = nd(rng);
    SaxConfig all = cfg;
    all.numerosity_reduction = false;
    std::size_t total = 0;
    for (const auto& [w, c] : sax_bop_histogram(s, all)) total += c;
    CHECK(total == s.size() - all.window + 1);

    std::vector<double> wave(100);
    for (std::size_t i = 0; i < wave.size(); ++i) wave[i] = std::sin(2 * std::numbers::pi * i / 8.0);
    const auto hw = sax_bop_histogram(wave, all);
    CHECK(hw.size() <= 8);
    CHECK(hw.size() <= 256);
}

TEST_CASE("bop distance") {
    BopHistogram a{{"ab", 2}, {"cd", 1}};
    CHECK(bop_distance(a, a) == 0.0);
    CHECK(bop_distance({{"x", 1}}, {{"y", 1}}) == doctest::Approx(std::sqrt(2.0)));
    BopHistogram b{{"ab", 1}, {"dd", 3}};
    CHECK(bop_distance(a, b) == bop_distance(b, a));
    CHECK(bop_distance(a, b) == doctest::Approx(std::sqrt(1.0 + 1.0 + 9.0)));
}

TEST_CASE("sax config validation") {
    CHECK_THROWS_AS((SaxConfig{4, 8, 4, true}.validate()), ValidationError);
    CHECK_THROWS_AS((SaxConfig{10, 4, 1, true}.validate()), ValidationError);
    CHECK_THROWS_AS((SaxConfig{10, 4, 11, true}.validate()), ValidationError);
    CHECK_NOTHROW((SaxConfig{10, 4, 10, true}.validate()));
}

TEST_CASE("baseline distance matrices") {
    const Dataset d = generate_synthetic(2);
    Dataset small;
    for (std::size_t j = 0; j < 60; j += 12) small.series.push_back(d.series[j]);
    small.series.push_back(d.series[0]);
    small.series.back().id = "copy";
    const DistanceMatrix dtw = dtw_distance_matrix(small);
    CHECK(dtw.P == dtw.P.transpose());
    CHECK(dtw.P.diagonal().isZero(0.0));
    CHECK(dtw.P(0, 5) == 0.0);
    const DistanceMatrix bop = sax_bop_distance_matrix(small, {25, 8, 4, true});
    CHECK(bop.P == bop.P.transpose());
    CHECK(bop.P(0, 5) == 0.0);
    CHECK(bop.P(0, 1) > 0.0);
}
