#include <doctest.h>

#include <algorithm>
#include <set>

#include "landca/landclass.hpp"
#include "landca/normalize.hpp"
#include "landca/raster.hpp"
#include "landca/rng.hpp"

using namespace landca;

namespace {

Raster<double> raster_from(const std::vector<double>& values, std::size_t ncols, std::size_t nrows,
                           double nodata = -9999.0) {
    Raster<double> r(ncols, nrows, 0.0, nodata);
    r.values = values;
    return r;
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("conversion codes are the fixed bijection over ordered class pairs") {
    CHECK(conversion_code(LandClass::Urban, LandClass::Urban) == 1);
    CHECK(conversion_code(LandClass::NonUrban, LandClass::Urban) == 4);
    CHECK(conversion_code(LandClass::Limited, LandClass::Limited) == 9);
    CHECK(code_nonurban_to_urban() == 4);
    CHECK(code_limited_to_urban() == 7);

    std::set<int> seen;
    for (LandClass from : {LandClass::Urban, LandClass::NonUrban, LandClass::Limited}) {
        for (LandClass to : {LandClass::Urban, LandClass::NonUrban, LandClass::Limited}) {
            const int code = conversion_code(from, to);
            CHECK(code >= 1);
            CHECK(code <= 9);
            seen.insert(code);
            const ConversionType ct = decode_conversion(code);
            CHECK(ct.from == from);
            CHECK(ct.to == to);
        }
    }
    CHECK(seen.size() == 9);
}

TEST_CASE("conversion codes reject NoData") {
    CHECK_THROWS_AS(conversion_code(LandClass::NoData, LandClass::Urban), Error);
    CHECK_THROWS_AS(conversion_code(LandClass::Urban, LandClass::NoData), Error);
    try {
        conversion_code(LandClass::NoData, LandClass::Urban);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_class);
    }
}

TEST_CASE("reclassify maps categories, counts classes and passes nodata through") {
    Raster<int> source(3, 1, 0, -9999);
    source.values = {80, 50, -9999};  // artificial surfaces, wetland, missing
    const std::map<int, LandClass> mapping = {{80, LandClass::Urban}, {50, LandClass::Limited}};

    const ReclassResult result = reclassify(source, mapping);
    CHECK(result.classes[0] == LandClass::Urban);
    CHECK(result.classes[1] == LandClass::Limited);
    CHECK(result.classes[2] == LandClass::NoData);
    CHECK(result.counts[static_cast<std::size_t>(LandClass::Urban)] == 1);
    CHECK(result.counts[static_cast<std::size_t>(LandClass::Limited)] == 1);
    CHECK(result.counts[static_cast<std::size_t>(LandClass::NoData)] == 1);
}

TEST_CASE("reclassify rejects unmapped codes naming code and cell") {
    Raster<int> source(2, 2, 0, -9999);
    source.values = {1, 1, 7, 1};
    const std::map<int, LandClass> mapping = {{1, LandClass::NonUrban}};
    try {
        reclassify(source, mapping);
        FAIL("expected unmapped_code error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unmapped_code);
        CHECK(std::string(e.what()).find("7") != std::string::npos);
        CHECK(std::string(e.what()).find("(1,0)") != std::string::npos);
    }
}

TEST_CASE("three-sigma normalization reproduces the hand-worked dataset") {
    // {1,2,3,4,5}: mu = 3, mean absolute deviation = (2+1+0+1+2)/5 = 1.2,
    // clip bounds fall back to the data range [1, 5], midpoint maps to 0.5.
    const auto r = raster_from({1, 2, 3, 4, 5}, 5, 1);
    const auto [normalized, stats] = normalize_sigma(r);
    CHECK(stats.mu == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(stats.sigma == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(stats.x1 == 1.0);
    CHECK(stats.x2 == 5.0);
    CHECK(normalized[2] == 0.5);
    CHECK(normalized[0] == 0.0);  // x == x1
    CHECK(normalized[4] == 1.0);  // x == x2
}

TEST_CASE("values outside the clip band saturate") {
    // Tight cluster plus one far outlier: x1 = mu - 3 sigma stays above the
    // minimum, so the outlier lands on the 0 branch.
    std::vector<double> values{100, 101, 102, 103, 104, 105, 106, 107, 108, 109, -500};
    const auto [normalized, stats] = normalize_sigma(raster_from(values, values.size(), 1));
    CHECK(stats.x1 > -500.0);
    CHECK(normalized[10] == 0.0);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(normalized[i] >= 0.0);
        CHECK(normalized[i] <= 1.0);
    }
}

TEST_CASE("normalization is monotone, bounded and keeps nodata") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 20 + rng.next_below(100);
        Raster<double> r(n, 1, 0.0, -9999.0);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = rng.next_below(20) == 0 ? -9999.0 : (rng.next_unit() * 2000.0 - 1000.0);
        }
        std::vector<double> valid;
        for (std::size_t i = 0; i < n; ++i)
            if (!r.is_nodata(i)) valid.push_back(r[i]);
        if (std::set<double>(valid.begin(), valid.end()).size() < 2) continue;

        const auto [normalized, stats] = normalize_sigma(r);
        int violations = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.is_nodata(i)) {
                if (normalized[i] != -9999.0) ++violations;
                continue;
            }
            if (normalized[i] < 0.0 || normalized[i] > 1.0) ++violations;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (r.is_nodata(j)) continue;
                if (r[i] <= r[j] && normalized[i] > normalized[j]) ++violations;
                if (r[i] > r[j] && normalized[i] < normalized[j]) ++violations;
            }
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("stored stats reproduce the training output bit for bit") {
    Rng rng(55);
    Raster<double> r(40, 3, 0.0, -1.0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rng.next_unit() * 300.0;
    const auto [normalized, stats] = normalize_sigma(r);
    const Raster<double> again = normalize_with(r, stats);
    REQUIRE(again.size() == normalized.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(again[i] == normalized[i]);
}

TEST_CASE("constant rasters are rejected rather than silently flattened") {
    const auto r = raster_from({4, 4, 4, 4}, 4, 1);
    CHECK_THROWS_AS(normalize_sigma(r), Error);
    try {
        normalize_sigma(r);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::degenerate_range);
    }
}

TEST_CASE("min-max normalization") {
    const std::vector<double> out = normalize_minmax({0, 5, 10});
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.5);
    CHECK(out[2] == 1.0);
    CHECK_THROWS_AS(normalize_minmax({3, 3, 3}), Error);
    CHECK_THROWS_AS(normalize_minmax({3}), Error);
}

TEST_CASE("cross-raster alignment is enforced") {
    Raster<double> a(4, 4, 0.0, -1.0), b(5, 4, 0.0, -1.0);
    CHECK_THROWS_AS(require_aligned(a, b, "test"), Error);
    Raster<double> c(4, 4, 0.0, -1.0);
    c.cellsize = 60.0;
    a.cellsize = 30.0;
    CHECK_THROWS_AS(require_aligned(a, c, "test"), Error);
}

}  // TEST_SUITE
