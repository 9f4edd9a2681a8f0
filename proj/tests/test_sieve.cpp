#include "klsign/sieve.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace klsign;
using namespace klsign::sieve;
using arith::u64;

namespace {

// Squarefree divisors of prod(primes), listed exhaustively.
std::vector<u64> all_divisors(const std::vector<u64>& primes)
{
    std::vector<u64> d{1};
    for (u64 p : primes) {
        const std::size_t k = d.size();
        for (std::size_t i = 0; i < k; ++i)
            d.push_back(d[i] * p);
    }
    return d;
}

double oracle_lambda(u64 d, double sqrt_D)
{
    if (static_cast<double>(d) > sqrt_D)
        return 0.0;
    const auto f = arith::factorize(d);
    if (!f.squarefree())
        return 0.0;
    const double x = std::log(sqrt_D / static_cast<double>(d)) / std::log(sqrt_D);
    return f.mobius() * std::pow(x, 14);
}

// sum over ordered pairs of divisors of d with lcm exactly d.
double oracle_xi(u64 d, double sqrt_D)
{
    const auto f = arith::factorize(d);
    std::vector<u64> ps;
    for (const auto& pp : f.factors())
        ps.push_back(pp.prime);
    const auto divs = all_divisors(ps);
    double s = 0;
    for (u64 h1 : divs)
        for (u64 h2 : divs)
            if (h1 / arith::gcd(h1, h2) * h2 == d)
                s += oracle_lambda(h1, sqrt_D) * oracle_lambda(h2, sqrt_D);
    return s;
}

std::vector<u64> radical_primes(u64 n, const SieveConfig& cfg)
{
    std::vector<u64> ps = cfg.pi_primes;
    const auto f = arith::factorize(n);
    for (const auto& pp : f.factors())
        if (std::find(ps.begin(), ps.end(), pp.prime) == ps.end())
            ps.push_back(pp.prime);
    std::sort(ps.begin(), ps.end());
    return ps;
}

} // namespace

TEST_CASE("SieveConfig")
{
    const auto cfg = SieveConfig::from_scale(1e6);
    CHECK(cfg.Pi_l == 6469693230ull);
    CHECK(cfg.F_exponent == 14);
    CHECK(cfg.D < std::sqrt(cfg.X));
    CHECK(cfg.sqrt_D == doctest::Approx(std::pow(1e6, 0.48 / 2)));
    CHECK(cfg.F(0.0) == 0.0);
    CHECK(cfg.F(1.0) == 1.0);
    CHECK(cfg.F(1.5) == 0.0);
    CHECK(cfg.F(-0.1) == 0.0);
    CHECK_THROWS(SieveConfig::from_scale(5));
    CHECK_THROWS(SieveConfig::from_scale(100, 0.5));
    CHECK_THROWS(SieveConfig::with_sqrt_level(1.0));
}

TEST_CASE("lambda_d examples")
{
    const auto cfg = SieveConfig::with_sqrt_level(100);
    CHECK(lambda_d(1, cfg) == 1.0);
    CHECK(lambda_d(1, SieveConfig::from_scale(10)) == 1.0);
    CHECK(lambda_d(101, cfg) == 0.0);
    CHECK(lambda_d(4, cfg) == 0.0);
    CHECK(lambda_d(2, cfg) == doctest::Approx(-0.1019013693292826).epsilon(1e-12));
    CHECK(binomial(14, 10) == 1001);
    for (u64 d = 1; d <= 200; ++d) {
        CHECK(lambda_d(d, cfg) == doctest::Approx(oracle_lambda(d, 100)).epsilon(1e-12).scale(1e-300));
        CHECK(std::abs(lambda_d(d, cfg)) <= 1.0);
        CHECK(lambda_d(arith::factorize(d), cfg) == lambda_d(d, cfg));
    }
}

TEST_CASE("xi_d against exhaustive pair enumeration")
{
    const auto cfg = SieveConfig::with_sqrt_level(100);
    CHECK(xi_d(1, cfg) == 1.0);
    for (u64 p : {2ull, 3ull, 7ull, 97ull}) {
        const double l = lambda_d(p, cfg);
        CHECK(xi_d(p, cfg) == doctest::Approx(2 * l + l * l).epsilon(1e-12));
    }
    CHECK(std::abs(xi_d(30, cfg)) <= 27.0);
    CHECK(xi_d(12, cfg) == 0.0);
    CHECK(xi_d(10007, cfg) == 0.0); // above D
    for (u64 d = 1; d <= 3000; ++d) {
        const auto f = arith::factorize(d);
        const double x = xi_d(d, cfg);
        CHECK(std::abs(x) <= std::pow(3.0, f.omega()) + 1e-12);
        if (f.squarefree())
            CHECK(x == doctest::Approx(oracle_xi(d, 100)).epsilon(1e-10).scale(1e-12));
    }
}

TEST_CASE("weight_W examples")
{
    // only d = 1 survives below sqrt(D) = 1.9
    const auto tiny = SieveConfig::with_sqrt_level(1.9);
    CHECK(weight_W(arith::factorize(31 * 37), tiny) == 1.0);

    const auto cfg = SieveConfig::with_sqrt_level(1000);
    double s = 0;
    for (u64 d : all_divisors(cfg.pi_primes))
        s += oracle_lambda(d, 1000);
    CHECK(weight_W(arith::factorize(1), cfg) == doctest::Approx(s * s).epsilon(1e-12));

    for (u64 n : {12ull, 18ull, 50ull, 98ull, 4 * 1009ull}) {
        const auto f = arith::factorize(n);
        CHECK(weight_W(f, cfg) == doctest::Approx(weight_W(arith::factorize(f.radical()), cfg)).epsilon(1e-14));
    }
    CHECK(weigh(arith::factorize(77), cfg).W >= 0.0);

    std::vector<u64> many;
    for (u64 p : arith::primes_up_to(100))
        many.push_back(p);
    CHECK_THROWS_AS(lambda_divisor_sum(many, cfg), std::length_error);
}

TEST_CASE("xi consistency: sum of xi_d over d | n Pi_l equals W(n)")
{
    const auto cfg = SieveConfig::with_sqrt_level(12);
    for (u64 n = 1; n <= 10000; ++n) {
        const auto f = arith::factorize(n);
        if (!f.squarefree())
            continue;
        double s = 0;
        for (u64 d : all_divisors(radical_primes(n, cfg))) {
            if (static_cast<double>(d) > cfg.D)
                continue;
            s += xi_d(d, cfg);
        }
        REQUIRE(s == doctest::Approx(weight_W(f, cfg)).epsilon(1e-9).scale(1e-9));
    }
    const auto wide = SieveConfig::with_sqrt_level(100);
    for (u64 n : {1ull, 2ull, 31ull, 311ull, 3 * 31ull, 37 * 41ull}) {
        double s = 0;
        for (u64 d : all_divisors(radical_primes(n, wide)))
            if (static_cast<double>(d) <= wide.D)
                s += oracle_xi(d, 100);
        CHECK(s == doctest::Approx(weight_W(arith::factorize(n), wide)).epsilon(1e-9).scale(1e-9));
    }
}

TEST_CASE("divisor moments cancel below order l")
{
    long double plog = 1;
    long double max_term = 0;
    for (u64 p : arith::first_primes(10))
        plog *= std::log(static_cast<long double>(p));
    const long double log_pi = std::log(6469693230.0L);
    for (int j = 0; j <= 9; ++j) {
        max_term = std::pow(log_pi, j);
        CHECK(std::abs(divisor_moment(j, 10)) < 1e-6L * max_term);
    }
    CHECK(divisor_moment(0, 3) == 0.0L);
    long double fact = 1;
    for (int k = 2; k <= 10; ++k)
        fact *= k;
    CHECK(static_cast<double>(divisor_moment(10, 10) / (fact * plog)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(static_cast<double>(plog) == doctest::Approx(1291.948).epsilon(1e-6));
    CHECK(truncated_divisor_moment(3, 10, 1e12L) == divisor_moment(3, 10));
    CHECK_THROWS(divisor_moment(1, 16));
}

TEST_CASE("lambda_pi_sum two routes and leading term")
{
    for (double r : {1e3, 1e6}) {
        const auto v = lambda_pi_sum(SieveConfig::with_sqrt_level(r));
        CHECK(std::abs(static_cast<double>((v.value - v.binomial_value) / v.value)) < 1e-9);
    }
    const auto a = lambda_pi_sum(SieveConfig::with_sqrt_level(1e3));
    const auto b = lambda_pi_sum(SieveConfig::with_sqrt_level(1e6));
    CHECK(static_cast<double>(a.value) == doctest::Approx(0.6657453139541).epsilon(1e-10));
    CHECK(static_cast<double>(b.value) == doctest::Approx(0.1477532524065).epsilon(1e-10));
    CHECK(static_cast<double>(a.ratio()) == doctest::Approx(3.509e-5).epsilon(1e-3));
    CHECK(static_cast<double>(b.ratio()) == doctest::Approx(0.0079756).epsilon(1e-4));
    CHECK(std::abs(1 - b.ratio()) < std::abs(1 - a.ratio()));
    // beyond Pi_10 the untruncated expansion applies
    const auto c = lambda_pi_sum(SieveConfig::with_sqrt_level(1e20));
    CHECK(std::abs(static_cast<double>((c.value - c.binomial_value) / c.value)) < 1e-9);
    CHECK(static_cast<double>(c.ratio()) == doctest::Approx(0.3323).epsilon(1e-3));
}
