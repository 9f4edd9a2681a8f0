#include "klsign/equidist.hpp"

#include "klsign/kloosterman.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace klsign;
using namespace klsign::equidist;

namespace {

double inverse_cdf(double u)
{
    double lo = 0, hi = std::numbers::pi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (st_cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("Sato-Tate cdf")
{
    CHECK(st_cdf(0.0) == 0.0);
    CHECK(st_cdf(std::numbers::pi) == 1.0);
    CHECK(st_cdf(std::numbers::pi / 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(st_cdf(std::numbers::pi / 4) == doctest::Approx(0.25 - 1 / (2 * std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(st_cdf(-0.1), std::domain_error);
    CHECK_THROWS_AS(st_cdf(3.2), std::domain_error);
    double prev = 0;
    for (int k = 1; k <= 1000; ++k) {
        const double v = st_cdf(std::numbers::pi * k / 1000);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("vertical and horizontal samples")
{
    const auto v3 = vertical_sample(3);
    REQUIRE(v3.angles.size() == 2);
    for (int a = 1; a <= 2; ++a)
        CHECK(v3.angles[static_cast<std::size_t>(a - 1)]
            == doctest::Approx(std::acos(kloosterman::s_direct(a, 1, 3) / (2 * std::sqrt(3.0)))).epsilon(1e-12));

    const auto v101 = vertical_sample(101, 3);
    CHECK(v101.angles.size() == 100);
    CHECK(v101.angles == vertical_sample(101, 1).angles);
    for (std::size_t i = 0; i < v101.angles.size(); i += 7)
        CHECK(v101.angles[i] == doctest::Approx(kloosterman::angle(static_cast<i64>(i + 1), 101).theta).epsilon(1e-10));

    CHECK_THROWS(vertical_sample(100));
    CHECK_THROWS(vertical_sample(1000003));

    const auto h = horizontal_sample(10, 1);
    CHECK(h.angles.size() == 4);
    CHECK(h.angles[1] == doctest::Approx(kloosterman::angle(1, 3).theta));
    CHECK(horizontal_sample(10, 3).angles.size() == 3);
    CHECK(horizontal_sample(1000, 2, 3).angles == horizontal_sample(1000, 2, 1).angles);
    CHECK_THROWS(horizontal_sample(2e5, 1));
}

TEST_CASE("discrepancy")
{
    AngleSample one;
    one.angles = {std::numbers::pi / 2};
    CHECK(discrepancy(one) == doctest::Approx(0.5).epsilon(1e-15));

    AngleSample q;
    const int n = 999;
    for (int k = 0; k < n; ++k)
        q.angles.push_back(inverse_cdf((k + 0.5) / n));
    CHECK(discrepancy(q) < 2.0 / (n + 1));

    AngleSample clump;
    clump.angles.assign(50, 0.1);
    CHECK(discrepancy(clump) > 0.9);
}

TEST_CASE("equidistribution improves with p")
{
    const double d_small = discrepancy(vertical_sample(101));
    const double d_big = discrepancy(vertical_sample(10007));
    CHECK(d_big < 0.05);
    CHECK(d_big < d_small);

    const auto s = summarize(vertical_sample(10007));
    CHECK(s.count == 10006);
    CHECK(s.bins.size() == 10);
    std::uint64_t total = 0;
    for (auto b : s.bins)
        total += b;
    CHECK(total == s.count);
    // E[cos theta] = 0 and E[cos^2 theta] = 1/4 under Sato-Tate
    CHECK(std::abs(s.mean_cos) < 0.02);
    CHECK(s.mean_cos2 == doctest::Approx(0.25).epsilon(0.08));
}
