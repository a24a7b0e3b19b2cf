#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landca/rng.hpp"
#include "landca/validation.hpp"

using namespace landca;

namespace {

Raster<LandClass> grid_of(std::size_t ncols, std::size_t nrows, LandClass fill) {
    return Raster<LandClass>(ncols, nrows, fill, LandClass::NoData);
}

LandClass random_class(Rng& rng) { return static_cast<LandClass>(rng.next_below(3)); }

}  // namespace

TEST_SUITE("validation") {

TEST_CASE("a perfect simulation has no misses or false alarms") {
    Rng rng(3);
    auto t0 = grid_of(10, 10, LandClass::NonUrban);
    auto t1 = t0;
    for (std::size_t i = 0; i < t0.size(); ++i) {
        t0[i] = random_class(rng);
        t1[i] = rng.next_below(5) == 0 ? LandClass::Urban : t0[i];
    }
    const ChangeConfusion c = change_confusion(t0, t1, t1);
    CHECK(c.misses == 0);
    CHECK(c.false_alarms == 0);
    CHECK(figure_of_merit(c) == 1.0);
}

TEST_CASE("a null simulation misses every observed change") {
    auto t0 = grid_of(8, 8, LandClass::NonUrban);
    auto t1 = t0;
    for (std::size_t i = 0; i < 10; ++i) t1[i] = LandClass::Urban;
    const ChangeConfusion c = change_confusion(t0, t1, t0);
    CHECK(c.hits == 0);
    CHECK(c.misses == 10);
    CHECK(c.false_alarms == 0);
    CHECK(figure_of_merit(c) == 0.0);
}

TEST_CASE("confusion counts match a brute-force tally and partition the valid cells") {
    Rng rng(17);
    auto t0 = grid_of(10, 10, LandClass::NonUrban);
    auto t1 = t0, sim = t0;
    for (std::size_t i = 0; i < t0.size(); ++i) {
        t0[i] = rng.next_below(12) == 0 ? LandClass::NoData : random_class(rng);
        t1[i] = random_class(rng);
        sim[i] = rng.next_below(12) == 0 ? LandClass::NoData : random_class(rng);
    }
    const ChangeConfusion c = change_confusion(t0, t1, sim);

    std::size_t hits = 0, misses = 0, false_alarms = 0, rejections = 0, valid = 0;
    for (std::size_t i = 0; i < t0.size(); ++i) {
        if (t0[i] == LandClass::NoData || t1[i] == LandClass::NoData || sim[i] == LandClass::NoData)
            continue;
        ++valid;
        const bool obs = t0[i] != LandClass::Urban && t1[i] == LandClass::Urban;
        const bool simulated = t0[i] != LandClass::Urban && sim[i] == LandClass::Urban;
        if (obs && simulated) ++hits;
        else if (obs) ++misses;
        else if (simulated) ++false_alarms;
        else ++rejections;
    }
    CHECK(c.hits == hits);
    CHECK(c.misses == misses);
    CHECK(c.false_alarms == false_alarms);
    CHECK(c.correct_rejections == rejections);
    CHECK(c.total() == valid);
}

TEST_CASE("metric formulas on hand-built confusions") {
    ChangeConfusion c;
    c.hits = 2;
    c.misses = 1;
    c.false_alarms = 1;
    CHECK(figure_of_merit(c) == 0.5);

    c.hits = 3;
    c.misses = 1;
    c.false_alarms = 2;
    CHECK(producer_accuracy(c) == 0.75);
    CHECK(user_accuracy(c) == 0.6);

    ChangeConfusion no_miss{5, 0, 2, 0};
    CHECK(producer_accuracy(no_miss) == 1.0);
    ChangeConfusion no_alarm{5, 2, 0, 0};
    CHECK(user_accuracy(no_alarm) == 1.0);
}

TEST_CASE("undefined metrics raise instead of dividing by zero") {
    ChangeConfusion none{0, 0, 0, 100};
    CHECK_THROWS_AS(figure_of_merit(none), Error);
    CHECK_THROWS_AS(producer_accuracy(none), Error);
    CHECK_THROWS_AS(user_accuracy(none), Error);
}

TEST_CASE("figure of merit never exceeds producer or user accuracy") {
    Rng rng(29);
    for (int trial = 0; trial < 1000; ++trial) {
        ChangeConfusion c;
        c.hits = 1 + rng.next_below(50);
        c.misses = rng.next_below(50);
        c.false_alarms = rng.next_below(50);
        const double fom = figure_of_merit(c);
        CHECK(fom <= producer_accuracy(c) + 1e-15);
        CHECK(fom <= user_accuracy(c) + 1e-15);
        CHECK(fom >= 0.0);
        CHECK(fom <= 1.0);
    }
}

TEST_CASE("farmland accounting counts flagged nonurban cells") {
    auto t0 = grid_of(10, 1, LandClass::NonUrban);
    t0.cellsize = 30.0;
    Raster<int> flag(10, 1, 0, -9999);
    flag.cellsize = 30.0;
    for (std::size_t i = 0; i < 10; ++i) flag[i] = 1;

    auto t1 = t0;
    for (std::size_t i = 0; i < 10; ++i) t1[i] = LandClass::Urban;  // everything converts

    const std::vector<double> areas = farmland_series({t0, t1}, flag);
    CHECK(areas[0] == doctest::Approx(10 * 900.0).epsilon(1e-15));
    CHECK(areas[1] == 0.0);
    // losing 10 cells at 30 m resolution is 9,000 m^2
    CHECK(areas[0] - areas[1] == doctest::Approx(9000.0).epsilon(1e-15));

    const std::vector<double> constant = farmland_series({t0, t0, t0}, flag);
    CHECK(constant[0] == constant[1]);
    CHECK(constant[1] == constant[2]);
}

TEST_CASE("farmland ignores unflagged and non-nonurban cells") {
    auto t0 = grid_of(4, 1, LandClass::NonUrban);
    t0.at(0, 3) = LandClass::Limited;
    Raster<int> flag(4, 1, 0, -9999);
    flag[0] = 1;
    flag[3] = 1;  // flagged but limited, so never farmland
    const std::vector<double> areas = farmland_series({t0}, flag);
    CHECK(areas[0] == doctest::Approx(900.0).epsilon(1e-15));
}

TEST_CASE("series fit on the identity and on a constant offset") {
    const std::vector<double> actual{10, 12, 9, 14, 11, 13};
    const SeriesFit perfect = series_fit(actual, actual);
    CHECK(perfect.std_dev == 0.0);
    CHECK(perfect.r_squared == 1.0);

    // sim = actual + c: residuals are constant, so their spread is zero,
    // while R^2 drops by n c^2 / SS_tot.
    std::vector<double> offset = actual;
    const double c = 2.5;
    for (double& v : offset) v += c;
    const SeriesFit fit = series_fit(offset, actual);
    CHECK(fit.std_dev == doctest::Approx(0.0).epsilon(1e-15));
    double mean = 0;
    for (double v : actual) mean += v;
    mean /= static_cast<double>(actual.size());
    double ss_tot = 0;
    for (double v : actual) ss_tot += (v - mean) * (v - mean);
    const double expected_r2 = 1.0 - static_cast<double>(actual.size()) * c * c / ss_tot;
    CHECK(fit.r_squared == doctest::Approx(expected_r2).epsilon(1e-12));
}

TEST_CASE("series fit matches a direct spreadsheet-style evaluation") {
    Rng rng(31);
    std::vector<double> sim(12), actual(12);
    for (std::size_t i = 0; i < 12; ++i) {
        actual[i] = 100.0 + 10.0 * rng.next_unit();
        sim[i] = actual[i] + 3.0 * (rng.next_unit() - 0.5);
    }
    const SeriesFit fit = series_fit(sim, actual);

    double rmean = 0;
    for (std::size_t i = 0; i < 12; ++i) rmean += sim[i] - actual[i];
    rmean /= 12.0;
    double rvar = 0;
    for (std::size_t i = 0; i < 12; ++i) {
        const double d = sim[i] - actual[i] - rmean;
        rvar += d * d;
    }
    const double expected_std = std::sqrt(rvar / 12.0);

    double amean = 0;
    for (double a : actual) amean += a;
    amean /= 12.0;
    double ss_tot = 0, ss_res = 0;
    for (std::size_t i = 0; i < 12; ++i) {
        ss_tot += (actual[i] - amean) * (actual[i] - amean);
        ss_res += (actual[i] - sim[i]) * (actual[i] - sim[i]);
    }
    CHECK(fit.std_dev == doctest::Approx(expected_std).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0 - ss_res / ss_tot).epsilon(1e-12));
    CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("constant actual series has no defined R^2") {
    CHECK_THROWS_AS(series_fit(std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5}), Error);
    CHECK_THROWS_AS(series_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), Error);
}

}  // TEST_SUITE
