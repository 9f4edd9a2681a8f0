#include "klsign/rsums.hpp"

#include "klsign/kloosterman.hpp"

#include <doctest.h>

#include <cmath>

using namespace klsign;
using namespace klsign::rsums;
using arith::u64;

namespace {

double naive_lambda(u64 d, double sqrt_D)
{
    if (static_cast<double>(d) > sqrt_D)
        return 0.0;
    int mu = 1;
    u64 m = d;
    for (u64 p = 2; p * p <= m; ++p) {
        if (m % p)
            continue;
        m /= p;
        if (m % p == 0)
            return 0.0;
        mu = -mu;
    }
    if (m > 1)
        mu = -mu;
    return mu * std::pow(std::log(sqrt_D / static_cast<double>(d)) / std::log(sqrt_D), 14);
}

// sum of lambda_d over d <= sqrt(D) dividing n * modulus_extra
double naive_divisor_sum(u64 n, u64 extra, double sqrt_D)
{
    double s = 0;
    for (u64 d = 1; static_cast<double>(d) <= sqrt_D; ++d)
        if ((n % d) * (extra % d) % d == 0)
            s += naive_lambda(d, sqrt_D);
    return s;
}

bool naive_squarefree(u64 n)
{
    for (u64 p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0)
            return false;
    return true;
}

int naive_omega(u64 n)
{
    int w = 0;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ++w;
            while (n % p == 0)
                n /= p;
        }
    return w + (n > 1);
}

struct NaiveR {
    double R1 = 0, R2 = 0, R3 = 0, Rp = 0, Rm = 0, H = 0;
};

NaiveR naive_rsums(double X, double rho, const sieve::SieveConfig& cfg)
{
    NaiveR r;
    for (u64 n = 2; static_cast<double>(n) < 2 * X; ++n) {
        const double g = g_eval(static_cast<double>(n) / X);
        if (g <= 0 || !naive_squarefree(n))
            continue;
        const double kl = kloosterman::s_direct(1, 1, n) / std::sqrt(static_cast<double>(n));
        const double s = naive_divisor_sum(n, cfg.Pi_l, cfg.sqrt_D);
        const double W = s * s;
        const double c = std::pow(2.0, naive_omega(n));
        r.R1 += g * std::abs(kl) * W;
        r.R2 += g * kl * W;
        r.R3 += g * std::abs(kl) * c * W;
        r.Rp += g * (std::abs(kl) + kl) * (rho - c) * W;
        r.Rm += g * (std::abs(kl) - kl) * (rho - c) * W;
        const double h = naive_divisor_sum(n, 1, cfg.sqrt_D);
        r.H += g * std::abs(kl) * h * h;
    }
    return r;
}

} // namespace

TEST_CASE("g and its mass")
{
    CHECK(g_eval(1.0) == 0.0);
    CHECK(g_eval(2.0) == 0.0);
    CHECK(g_eval(0.5) == 0.0);
    CHECK(g_eval(2.5) == 0.0);
    CHECK(g_eval(1.5) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
    CHECK(g_eval(1.5) == doctest::Approx(0.0183156).epsilon(1e-6));
    for (double x = 1.001; x < 2; x += 0.01)
        CHECK(g_eval(x) >= 0.0);
    const auto& w = smooth_weight();
    CHECK(w.gtilde1 > 0);
    CHECK(w.gtilde1 == doctest::Approx(0.00702985840661).epsilon(1e-10));
    CHECK(w.support_lo == 1.0);
    CHECK(w.support_hi == 2.0);
}

TEST_CASE("compute_rsums against a brute-force oracle")
{
    for (double X : {100.0, 1000.0}) {
        const auto cfg = sieve::SieveConfig::from_scale(X);
        const auto r = compute_rsums(X, 5.0, cfg);
        const auto o = naive_rsums(X, 5.0, cfg);
        CHECK(r.R1 > 0);
        CHECK(r.R3 > 0);
        CHECK(r.R1 == doctest::Approx(o.R1).epsilon(1e-9));
        CHECK(r.R2 == doctest::Approx(o.R2).epsilon(1e-9));
        CHECK(r.R3 == doctest::Approx(o.R3).epsilon(1e-9));
        CHECK(r.Rplus == doctest::Approx(o.Rp).epsilon(1e-9));
        CHECK(r.Rminus == doctest::Approx(o.Rm).epsilon(1e-9));
        CHECK(h_sum(X, cfg) == doctest::Approx(o.H).epsilon(1e-9));
        CHECK(h_sum(X, cfg) >= 0);
    }
    CHECK_THROWS_AS(compute_rsums(1.5, 5, sieve::SieveConfig::from_scale(10)), std::invalid_argument);
    CHECK_THROWS_AS(compute_rsums(2e7, 5, sieve::SieveConfig::from_scale(10)), std::invalid_argument);
    CHECK_THROWS_AS(compute_rsums(100, 0, sieve::SieveConfig::from_scale(100)), std::invalid_argument);
    CHECK_THROWS_AS(h_sum(5, sieve::SieveConfig::from_scale(10)), std::invalid_argument);
}

TEST_CASE("decomposition inequality and triangle inequality")
{
    for (double X : {1e2, 1e3, 1e4}) {
        const auto cfg = sieve::SieveConfig::from_scale(X);
        for (double rho : {4.5, 5.0, 6.0}) {
            const auto r = compute_rsums(X, rho, cfg, 2);
            const double tol = 1e-6 * r.R1;
            CHECK(r.Rplus >= rho * r.R1 + rho * r.R2 - 2 * r.R3 - tol);
            CHECK(r.Rminus >= rho * r.R1 - rho * r.R2 - 2 * r.R3 - tol);
            CHECK(std::abs(r.R2) <= r.R1);
            CHECK(r.R1 >= 0);
            CHECK(r.R3 >= 0);
            CHECK(r.n_terms > 0);
        }
    }
}

TEST_CASE("rsums are independent of the thread count")
{
    const auto cfg = sieve::SieveConfig::from_scale(30000);
    const auto a = compute_rsums(30000, 5, cfg, 1);
    const auto b = compute_rsums(30000, 5, cfg, 3);
    CHECK(a.R1 == b.R1);
    CHECK(a.R2 == b.R2);
    CHECK(a.R3 == b.R3);
    CHECK(a.Rplus == b.Rplus);
    CHECK(a.Rminus == b.Rminus);
    CHECK(a.n_terms == b.n_terms);
}

TEST_CASE("h_sum: primes above sqrt(D) contribute g |Kl|")
{
    // at X = 100, sqrt(D) is about 3, so a prime n > 3 has only d = 1 dividing it
    const double X = 100;
    const auto cfg = sieve::SieveConfig::from_scale(X);
    const double sq = cfg.sqrt_D;
    CHECK(sq < 4);
    const u64 n = 149;
    const double s = naive_divisor_sum(n, 1, sq);
    CHECK(s == 1.0);
}

TEST_CASE("bv_probe")
{
    const double X = 1000;
    const auto cfg = sieve::SieveConfig::from_scale(X);
    double direct = 0;
    for (u64 n = 1001; n < 2000; ++n)
        if (naive_squarefree(n))
            direct += g_eval(static_cast<double>(n) / X) * kloosterman::s_direct(1, 1, n) / std::sqrt(static_cast<double>(n));
    CHECK(bv_probe(X, 1, cfg) == doctest::Approx(std::abs(direct)).epsilon(1e-9));

    double oracle = 0;
    for (u64 q = 1; q <= 10; ++q) {
        double inner = 0;
        for (u64 n = 1001; n < 2000; ++n)
            if (n % q == 0 && naive_squarefree(n))
                inner += g_eval(static_cast<double>(n) / X) * kloosterman::s_direct(1, 1, n) / std::sqrt(static_cast<double>(n));
        oracle += std::pow(3.0, naive_omega(q)) * std::abs(inner);
    }
    const double v = bv_probe(X, 10, cfg);
    CHECK(v >= 0);
    CHECK(v == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(bv_probe(X, 0.5, cfg) == 0.0);
    CHECK_THROWS(bv_probe(X, 40, cfg));
    CHECK_THROWS(bv_probe(2e6, 10, cfg));
}

TEST_CASE("census examples")
{
    const auto c2 = census(2);
    REQUIRE(c2.records.size() == 1);
    CHECK(c2.records[0].q == 3);
    CHECK(c2.records[0].sign == Sign::negative);
    CHECK(c2.records[0].kl == doctest::Approx(-1 / std::sqrt(3.0)));
    CHECK(c2.records[0].p2 == 0);

    const auto c4 = census(4);
    REQUIRE(c4.records.size() == 3);
    CHECK(c4.records[0].q == 5);
    CHECK(c4.records[0].sign == Sign::positive);
    CHECK(c4.records[1].q == 6);
    CHECK(c4.records[1].p1 == 2);
    CHECK(c4.records[1].p2 == 3);
    CHECK(c4.records[2].q == 7);

    CHECK_THROWS(census(1));
    CHECK_THROWS(census(20'000'000));
}

TEST_CASE("census at X = 1e4")
{
    const auto c = census(10000, 1);
    CHECK(c.pos_count > 0);
    CHECK(c.neg_count > 0);
    CHECK(c.flagged_count == 0);
    CHECK(c.pos_count + c.neg_count == arith::enumerate_targets(10000).size());
    CHECK(c.pos_count == 1741);
    CHECK(c.neg_count == 1739);
    int checked = 0;
    for (const auto& r : c.records) {
        CHECK(std::abs(r.kl) <= std::pow(2.0, r.omega) + 1e-9);
        CHECK((r.kl > 0) == (r.sign == Sign::positive));
        CHECK(std::abs(r.kl) >= 1e-10);
        if (r.q % 37 == 0) {
            ++checked;
            CHECK(r.kl == doctest::Approx(kloosterman::s_direct(1, 1, r.q) / std::sqrt(static_cast<double>(r.q))).epsilon(1e-9).scale(1e-9));
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("sharded census equals serial census")
{
    const auto a = census(5000, 1);
    for (unsigned k : {2u, 3u, 4u, 7u}) {
        const auto b = census(5000, k);
        REQUIRE(a.records.size() == b.records.size());
        CHECK(a.pos_count == b.pos_count);
        CHECK(a.neg_count == b.neg_count);
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            REQUIRE(a.records[i].q == b.records[i].q);
            REQUIRE(a.records[i].kl == b.records[i].kl);
        }
    }
}
