#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "rankskew/random.hpp"
#include "rankskew/series.hpp"
#include "rankskew/synth.hpp"
#include "test_util.hpp"

using namespace rankskew;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Date ymd(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

ReturnSeries daily(std::vector<double> v) {
    return ReturnSeries::from_values("s", Period::daily, std::move(v));
}

ReturnSeries monthly(std::vector<double> v) {
    return ReturnSeries::from_values("s", Period::monthly, std::move(v));
}

}  // namespace

TEST_CASE("return series validates its points", "[series]") {
    REQUIRE_THROWS_AS(ReturnSeries("x", Period::daily, {ymd(2020, 1, 2), ymd(2020, 1, 2)}, {0.1, 0.2}),
                      Error);
    REQUIRE_THROWS_AS(ReturnSeries("x", Period::daily, {ymd(2020, 1, 3), ymd(2020, 1, 2)}, {0.1, 0.2}),
                      Error);
    REQUIRE_THROWS_AS(ReturnSeries("x", Period::daily, {ymd(2020, 1, 2), ymd(2020, 1, 3)},
                                   {0.1, std::numeric_limits<double>::quiet_NaN()}),
                      Error);
    REQUIRE_THROWS_AS(ReturnSeries("x", Period::daily, {}, {}), Error);
    const auto s = monthly({0.1, 0.2, 0.3});
    CHECK(s.date(0) == ymd(1900, 1, 31));
    CHECK(s.date(1) == ymd(1900, 2, 28));
    CHECK(s.date(2) == ymd(1900, 3, 31));
}

TEST_CASE("standardize", "[series]") {
    SECTION("already standard input is unchanged") {
        const auto st = standardize(daily({-1.0, 1.0}));
        CHECK(st.series.value(0) == -1.0);
        CHECK(st.series.value(1) == 1.0);
        CHECK(st.mean == 0.0);
        CHECK(st.scale == 1.0);
    }
    SECTION("affine shift and scale") {
        const auto st = standardize(daily({1.0, 3.0}));
        CHECK(st.series.value(0) == -1.0);
        CHECK(st.series.value(1) == 1.0);
        CHECK(st.mean == 2.0);
        CHECK(st.scale == 1.0);
    }
    SECTION("population variance of {-3, 1, 1, 1}") {
        const auto st = standardize(daily({-3.0, 1.0, 1.0, 1.0}));
        CHECK_THAT(st.series.value(0), WithinAbs(-std::sqrt(3.0), 1e-15));
        for (std::size_t i = 1; i < 4; ++i) {
            CHECK_THAT(st.series.value(i), WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
        }
        CHECK_THAT(st.scale, WithinAbs(std::sqrt(3.0), 1e-15));
    }
    SECTION("errors") {
        REQUIRE_ERROR(standardize(daily({0.5, 0.5, 0.5})), ZeroVariance);
        REQUIRE_ERROR(standardize(daily({0.5})), TooShort);
    }
    SECTION("moments, zero cumulative sum and idempotence on a large sample") {
        const auto x = synth::gaussian_values(100000, 3);
        std::vector<double> shifted(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = 0.01 + 0.02 * x[i];
        const auto st = standardize(daily(shifted));
        const auto z = st.series.values();
        const double m = mean_of(z);
        CHECK(std::abs(m) <= 1e-12);
        CHECK_THAT(population_variance(z, m), WithinAbs(1.0, 1e-9));
        CHECK(std::abs(std::accumulate(z.begin(), z.end(), 0.0)) <= 1e-9);
        const auto again = standardize(st.series);
        for (std::size_t i = 0; i < z.size(); i += 997) {
            CHECK_THAT(again.series.value(i), WithinAbs(z[i], 1e-12));
        }
    }
}

TEST_CASE("excess returns", "[series]") {
    SECTION("monthly accrual") {
        const auto s = monthly({0.01, 0.01});
        const RateSeries r("rf", {ymd(1899, 12, 1)}, {0.06});
        const auto e = excess_returns(s, r);
        CHECK_THAT(e.value(0), WithinAbs(0.005, 1e-15));
    }
    SECTION("daily accrual") {
        const auto s = daily({0.001, 0.002});
        const RateSeries r("rf", {ymd(1900, 1, 1)}, {0.0252});
        CHECK_THAT(excess_returns(s, r).value(0), WithinAbs(0.0009, 1e-15));
    }
    SECTION("zero rate is the identity") {
        const auto s = daily({0.001, -0.002, 0.003});
        const RateSeries r("rf", {ymd(1900, 1, 1)}, {0.0});
        CHECK(excess_returns(s, r) == s);
    }
    SECTION("last known rate is carried forward") {
        const auto s = daily({0.0, 0.0, 0.0, 0.0});
        const RateSeries r("rf", {ymd(1900, 1, 1), ymd(1900, 1, 3)}, {0.252, 0.504});
        const auto e = excess_returns(s, r);
        CHECK_THAT(e.value(1), WithinAbs(-0.001, 1e-15));
        CHECK_THAT(e.value(2), WithinAbs(-0.002, 1e-15));
        CHECK_THAT(e.value(3), WithinAbs(-0.002, 1e-15));
    }
    SECTION("no coverage") {
        const auto s = daily({0.0, 0.0});
        const RateSeries r("rf", {ymd(1900, 1, 2)}, {0.01});
        REQUIRE_ERROR(excess_returns(s, r), NoRateCoverage);
    }
}

TEST_CASE("aggregate_monthly", "[series]") {
    SECTION("one month of constant returns") {
        std::vector<Date> d;
        for (unsigned i = 1; i <= 21; ++i) d.push_back(ymd(2021, 3, i));
        const ReturnSeries s("x", Period::daily, d, std::vector<double>(21, 0.001));
        const auto m = aggregate_monthly(s);
        REQUIRE(m.size() == 1);
        CHECK_THAT(m.value(0), WithinAbs(0.021, 1e-15));
        CHECK(m.date(0) == ymd(2021, 3, 31));
        CHECK(m.period() == Period::monthly);
    }
    SECTION("grouping and empty months") {
        const ReturnSeries s("x", Period::daily, {ymd(2021, 1, 4), ymd(2021, 1, 5), ymd(2021, 3, 1)},
                             {0.01, -0.02, 0.03});
        const auto m = aggregate_monthly(s);
        REQUIRE(m.size() == 2);
        CHECK_THAT(m.value(0), WithinAbs(-0.01, 1e-15));
        CHECK(m.date(0) == ymd(2021, 1, 31));
        CHECK(m.value(1) == 0.03);
        CHECK(m.date(1) == ymd(2021, 3, 31));
    }
    SECTION("total is preserved") {
        const auto x = synth::gaussian_values(5000, 9);
        const auto m = aggregate_monthly(daily(x));
        const double in = std::accumulate(x.begin(), x.end(), 0.0);
        const double out = std::accumulate(m.values().begin(), m.values().end(), 0.0);
        CHECK_THAT(out, WithinAbs(in, 1e-10));
    }
    SECTION("monthly input is rejected") {
        REQUIRE_ERROR(aggregate_monthly(monthly({0.1, 0.2})), WrongPeriod);
    }
}

TEST_CASE("risk_manage", "[series]") {
    SECTION("constant amplitude gives sqrt(2/pi)") {
        std::vector<double> x(200);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0 ? 0.03 : -0.03);
        const auto r = risk_manage(daily(x));
        REQUIRE(r.size() == 180);
        for (double v : r.values()) CHECK_THAT(std::abs(v), WithinRel(std::sqrt(2.0 / std::numbers::pi), 1e-12));
        CHECK(r.date(0) == daily(x).date(20));
    }
    SECTION("scale invariance") {
        const auto x = synth::gaussian_values(3000, 5);
        std::vector<double> x4(x.size()), x5(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x4[i] = 4.0 * x[i];
            x5[i] = 5.0 * x[i];
        }
        const auto a = risk_manage(daily(x));
        const auto b = risk_manage(daily(x4));
        const auto c = risk_manage(daily(x5));
        CHECK(a.values().size() == b.values().size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.value(i) == b.value(i));
            CHECK_THAT(c.value(i), WithinRel(a.value(i), 1e-13));
        }
    }
    SECTION("i.i.d. Gaussian output has unit volatility") {
        auto x = synth::gaussian_values(10000, 11);
        for (double& v : x) v *= 0.02;
        const auto r = risk_manage(daily(x));
        const double m = mean_of(r.values());
        CHECK_THAT(std::sqrt(population_variance(r.values(), m)), WithinAbs(1.0, 0.05));
    }
    SECTION("uses only past information") {
        auto x = synth::gaussian_values(400, 2);
        const auto base = risk_manage(daily(x));
        const double before = x[300];
        x[300] = 5.0;
        const auto bumped = risk_manage(daily(x));
        for (std::size_t i = 0; i + 20 < 300; ++i) CHECK(base.value(i) == bumped.value(i));
        // Day 300 is scaled by the volatility known at day 299, unchanged by the bump.
        CHECK(bumped.value(300 - 20) * before == Catch::Approx(base.value(300 - 20) * 5.0));
        CHECK(base.value(301 - 20) != bumped.value(301 - 20));
    }
    SECTION("errors") {
        REQUIRE_ERROR(risk_manage(daily(std::vector<double>(20, 0.01))), TooShort);
        REQUIRE_ERROR(risk_manage(monthly(std::vector<double>(40, 0.01))), WrongPeriod);
    }
}

TEST_CASE("symmetrize", "[series]") {
    SECTION("hand example") {
        const auto s = daily({0.02, -0.01, 0.03});
        const double signs[] = {1.0, -1.0, 1.0};
        const auto out = symmetrize_with_signs(s, signs);
        CHECK_THAT(out.value(0), WithinAbs(0.02, 1e-15));
        CHECK_THAT(out.value(1), WithinAbs(0.04 / 3.0 + 0.04 / 3.0 + 0.01, 1e-15));
        CHECK_THAT(out.value(2), WithinAbs(0.03, 1e-15));
    }
    SECTION("all-plus signs give the input") {
        const auto s = daily({0.02, -0.01, 0.03, 0.5});
        const std::vector<double> plus(4, 1.0);
        const auto out = symmetrize_with_signs(s, plus);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK_THAT(out.value(i), WithinAbs(s.value(i), 1e-15));
    }
    SECTION("deterministic per seed and different across seeds") {
        const auto s = daily(synth::gaussian_values(1000, 1));
        CHECK(symmetrize(s, 42) == symmetrize(s, 42));
        CHECK(!(symmetrize(s, 42) == symmetrize(s, 43)));
    }
    SECTION("amplitudes about the mean are preserved") {
        const auto s = daily(synth::gaussian_values(1000, 1));
        const double m = mean_of(s.values());
        const auto out = symmetrize(s, 7);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK_THAT(std::abs(out.value(i) - m), WithinAbs(std::abs(s.value(i) - m), 1e-15));
        }
    }
    SECTION("mean return is preserved on average over seeds") {
        auto x = synth::gaussian_values(2000, 4);
        for (double& v : x) v = 0.0005 + 0.01 * v * v * (v > 0 ? 1.0 : -2.0);
        const auto s = daily(x);
        const double target = perf_stats(s).ann_return;
        std::vector<double> means;
        for (std::uint64_t seed = 0; seed < 100; ++seed) means.push_back(perf_stats(symmetrize(s, seed)).ann_return);
        const double mu = mean_of(means);
        const double se = std::sqrt(population_variance(means, mu) * 100.0 / 99.0 / 100.0);
        CHECK(std::abs(mu - target) <= 2.0 * se);
    }
}

TEST_CASE("perf_stats", "[series]") {
    SECTION("annualization arithmetic") {
        // Alternating 0.0004 +/- 0.01: mean 0.0004, population sd 0.01.
        std::vector<double> x(252 * 4);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.0004 + (i % 2 == 0 ? 0.01 : -0.01);
        const auto p = perf_stats(daily(x));
        CHECK_THAT(p.sharpe, WithinRel(0.04 * std::sqrt(252.0), 1e-9));
        CHECK_THAT(p.ann_vol, WithinRel(0.01 * std::sqrt(252.0), 1e-9));
        CHECK_THAT(p.ann_return, WithinRel(0.0004 * 252.0, 1e-9));
        CHECK_THAT(p.t_stat, WithinRel(p.sharpe * 2.0, 1e-12));
        CHECK(p.n_periods == x.size());
    }
    SECTION("zero mean") {
        const auto p = perf_stats(daily({0.01, -0.01, 0.01, -0.01}));
        CHECK(p.sharpe == 0.0);
        CHECK(p.t_stat == 0.0);
    }
    SECTION("four years at Sharpe 1") {
        std::vector<double> x(48);
        const double sd = 0.05;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = sd / std::sqrt(12.0) + (i % 2 == 0 ? sd : -sd);
        const auto p = perf_stats(monthly(x));
        CHECK_THAT(p.sharpe, WithinRel(1.0, 1e-12));
        CHECK_THAT(p.t_stat, WithinRel(2.0, 1e-12));
    }
    SECTION("constant series") {
        REQUIRE_ERROR(perf_stats(daily({0.1, 0.1})), ZeroVariance);
    }
}

TEST_CASE("equal_weight_aggregate", "[series]") {
    const ReturnSeries a("a", Period::daily, {ymd(2020, 1, 1), ymd(2020, 1, 2), ymd(2020, 1, 3)},
                         {0.01, 0.02, 0.03});
    const ReturnSeries b("b", Period::daily, {ymd(2020, 1, 2), ymd(2020, 1, 3)}, {0.04, 0.05});
    SECTION("one series is the identity") {
        const auto out = equal_weight_aggregate(std::span(&a, 1));
        CHECK(std::vector<double>(out.values().begin(), out.values().end()) ==
              std::vector<double>(a.values().begin(), a.values().end()));
    }
    SECTION("availability rule") {
        const std::vector<ReturnSeries> both{a, b};
        const auto out = equal_weight_aggregate(both);
        REQUIRE(out.size() == 3);
        CHECK(out.value(0) == 0.01);
        CHECK_THAT(out.value(1), WithinAbs(0.03, 1e-15));
        CHECK_THAT(out.value(2), WithinAbs(0.04, 1e-15));
    }
    SECTION("same-date mean") {
        const ReturnSeries c("c", Period::daily, {ymd(2020, 1, 1)}, {0.01});
        const ReturnSeries d("d", Period::daily, {ymd(2020, 1, 1)}, {0.03});
        const std::vector<ReturnSeries> cd{c, d};
        CHECK_THAT(equal_weight_aggregate(cd).value(0), WithinAbs(0.02, 1e-15));
    }
    SECTION("K copies give the series back exactly") {
        const auto s = daily(synth::gaussian_values(500, 8));
        const std::vector<ReturnSeries> copies(7, s);
        const auto out = equal_weight_aggregate(copies);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(out.value(i) == s.value(i));
    }
    SECTION("errors") {
        REQUIRE_ERROR(equal_weight_aggregate(std::span<const ReturnSeries>{}), EmptyInput);
        const std::vector<ReturnSeries> mixed{a, monthly({0.1, 0.2})};
        REQUIRE_ERROR(equal_weight_aggregate(mixed), WrongPeriod);
    }
}

TEST_CASE("random helpers depend only on the engine", "[series]") {
    Rng a = make_rng(5);
    Rng b = make_rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform_open(a);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(u == uniform_open(b));
        CHECK(uniform_index(a, 17) == uniform_index(b, 17));
    }
    CHECK(uniform_index(a, 1) == 0);
}
