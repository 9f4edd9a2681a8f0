#include "klsign/sieve.hpp"

#include "klsign/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace klsign::sieve {

namespace {

constexpr std::size_t kMaxRadicalPrimes = 20;

void check_moment_args(int j, int l)
{
    if (j < 0)
        throw std::invalid_argument("divisor_moment: j must be >= 0");
    if (l < 1 || l > 15)
        throw std::invalid_argument("divisor_moment: l must lie in [1, 15]");
}

double lambda_from_log(int sign, double log_d, const SieveConfig& cfg)
{
    const double L = cfg.log_sqrt_D();
    return sign * cfg.F((L - log_d) / L);
}

// Depth-first walk over squarefree divisors of prod(primes) not exceeding
// `limit`; primes ascending, so a failing extension prunes the rest.
template <class Visit>
void walk_divisors(std::span<const u64> primes, double limit, std::size_t start, double d, int sign, double log_d, Visit& visit)
{
    visit(d, sign, log_d);
    for (std::size_t i = start; i < primes.size(); ++i) {
        double next = d * static_cast<double>(primes[i]);
        if (next > limit)
            break;
        walk_divisors(primes, limit, i + 1, next, -sign, log_d + std::log(static_cast<double>(primes[i])), visit);
    }
}

} // namespace

SieveConfig SieveConfig::from_scale(double X, double epsilon)
{
    if (!(X >= 10))
        throw std::invalid_argument("SieveConfig: X must be >= 10");
    if (!(epsilon > 0 && epsilon < 0.5))
        throw std::invalid_argument("SieveConfig: epsilon must lie in (0, 1/2)");
    SieveConfig cfg;
    cfg.X = X;
    cfg.epsilon = epsilon;
    cfg.D = std::pow(X, 0.5 - epsilon);
    cfg.sqrt_D = std::sqrt(cfg.D);
    cfg.F_exponent = cfg.kappa + cfg.l;
    cfg.pi_primes = arith::first_primes(cfg.l);
    cfg.Pi_l = arith::primorial(cfg.l);
    return cfg;
}

SieveConfig SieveConfig::with_sqrt_level(double sqrt_D, double epsilon)
{
    if (!(sqrt_D > 1))
        throw std::invalid_argument("SieveConfig: sqrt_D must exceed 1");
    if (!(epsilon > 0 && epsilon < 0.5))
        throw std::invalid_argument("SieveConfig: epsilon must lie in (0, 1/2)");
    SieveConfig cfg;
    cfg.epsilon = epsilon;
    cfg.sqrt_D = sqrt_D;
    cfg.D = sqrt_D * sqrt_D;
    cfg.X = std::pow(cfg.D, 1.0 / (0.5 - epsilon));
    cfg.F_exponent = cfg.kappa + cfg.l;
    cfg.pi_primes = arith::first_primes(cfg.l);
    cfg.Pi_l = arith::primorial(cfg.l);
    return cfg;
}

double SieveConfig::log_sqrt_D() const
{
    return std::log(sqrt_D);
}

double SieveConfig::F(double x) const
{
    if (x < 0 || x > 1)
        return 0.0;
    return std::pow(x, F_exponent);
}

u64 binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    u64 r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<u64>(n - k + i) / static_cast<u64>(i);
    return r;
}

double lambda_d(const arith::FactoredInteger& d, const SieveConfig& cfg)
{
    if (d.value() == 1)
        return 1.0;
    if (static_cast<double>(d.value()) > cfg.sqrt_D || !d.squarefree())
        return 0.0;
    return lambda_from_log(d.mobius(), std::log(static_cast<double>(d.value())), cfg);
}

double lambda_d(u64 d, const SieveConfig& cfg)
{
    if (d == 0)
        throw std::invalid_argument("lambda_d: d must be positive");
    if (d == 1)
        return 1.0;
    if (static_cast<double>(d) > cfg.sqrt_D)
        return 0.0;
    return lambda_d(arith::factorize(d), cfg);
}

double xi_d(u64 d, const SieveConfig& cfg)
{
    if (d == 0)
        throw std::invalid_argument("xi_d: d must be positive");
    if (static_cast<double>(d) > cfg.D)
        return 0.0;
    const auto fd = arith::factorize(d);
    if (!fd.squarefree())
        return 0.0;
    std::vector<u64> primes;
    for (const auto& f : fd.factors())
        primes.push_back(f.prime);

    // Each prime of d goes to h1 only, h2 only, or both: 3^omega ordered pairs.
    const std::size_t w = primes.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < w; ++i)
        total *= 3;
    double acc = 0;
    for (std::size_t code = 0; code < total; ++code) {
        u64 h1 = 1, h2 = 1;
        std::size_t c = code;
        for (std::size_t i = 0; i < w; ++i, c /= 3) {
            switch (c % 3) {
            case 0:
                h1 *= primes[i];
                break;
            case 1:
                h2 *= primes[i];
                break;
            default:
                h1 *= primes[i];
                h2 *= primes[i];
            }
        }
        if (static_cast<double>(h1) > cfg.sqrt_D || static_cast<double>(h2) > cfg.sqrt_D)
            continue;
        acc += lambda_d(h1, cfg) * lambda_d(h2, cfg);
    }
    return acc;
}

double lambda_divisor_sum(std::span<const u64> primes, const SieveConfig& cfg)
{
    if (primes.size() > kMaxRadicalPrimes)
        throw std::length_error("lambda_divisor_sum: radical has more than 20 prime factors");
    double acc = 0;
    auto visit = [&](double d, int sign, double log_d) {
        acc += d == 1.0 ? 1.0 : lambda_from_log(sign, log_d, cfg);
    };
    walk_divisors(primes, cfg.sqrt_D, 0, 1.0, 1, 0.0, visit);
    return acc;
}

double weight_W(const arith::FactoredInteger& n, const SieveConfig& cfg)
{
    std::vector<u64> primes(cfg.pi_primes.begin(), cfg.pi_primes.end());
    for (const auto& f : n.factors())
        primes.push_back(f.prime);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    const double s = lambda_divisor_sum(primes, cfg);
    return s * s;
}

WeightedModulus weigh(arith::FactoredInteger n, const SieveConfig& cfg)
{
    double w = weight_W(n, cfg);
    return {std::move(n), w};
}

namespace {

long double moment_impl(int j, int l, long double y, bool truncate)
{
    check_moment_args(j, l);
    const auto primes = arith::first_primes(l);
    CompensatedSum<long double> acc;
    const unsigned count = 1u << l;
    for (unsigned mask = 0; mask < count; ++mask) {
        long double log_d = 0;
        long double d = 1;
        int sign = 1;
        for (int i = 0; i < l; ++i) {
            if (mask & (1u << i)) {
                log_d += std::log(static_cast<long double>(primes[i]));
                d *= static_cast<long double>(primes[i]);
                sign = -sign;
            }
        }
        if (truncate && d > y)
            continue;
        acc += sign * std::pow(log_d, static_cast<long double>(j));
    }
    return acc.value();
}

} // namespace

long double divisor_moment(int j, int l)
{
    return moment_impl(j, l, 0, false);
}

long double truncated_divisor_moment(int j, int l, long double y)
{
    return moment_impl(j, l, y, true);
}

LambdaPiSum lambda_pi_sum(const SieveConfig& cfg)
{
    if (cfg.l != 10 || cfg.F_exponent != 14)
        throw std::invalid_argument("lambda_pi_sum: requires l = 10 and F(x) = x^14");
    const long double L = std::log(static_cast<long double>(cfg.sqrt_D));
    const auto primes = arith::first_primes(cfg.l);

    LambdaPiSum out;

    CompensatedSum<long double> direct;
    for (unsigned mask = 0; mask < (1u << cfg.l); ++mask) {
        long double d = 1, log_d = 0;
        int sign = 1;
        for (int i = 0; i < cfg.l; ++i) {
            if (mask & (1u << i)) {
                d *= static_cast<long double>(primes[i]);
                log_d += std::log(static_cast<long double>(primes[i]));
                sign = -sign;
            }
        }
        if (d > static_cast<long double>(cfg.sqrt_D))
            continue;
        direct += sign * std::pow((L - log_d) / L, static_cast<long double>(cfg.F_exponent));
    }
    out.value = direct.value();

    CompensatedSum<long double> expanded;
    for (int j = 0; j <= cfg.F_exponent; ++j) {
        long double term = static_cast<long double>(binomial(cfg.F_exponent, j))
            * truncated_divisor_moment(j, cfg.l, static_cast<long double>(cfg.sqrt_D)) / std::pow(L, static_cast<long double>(j));
        expanded += (j % 2 == 0) ? term : -term;
    }
    out.binomial_value = expanded.value();

    long double prod_log = 1;
    for (u64 p : primes)
        prod_log *= std::log(static_cast<long double>(p));
    long double l_fact = 1;
    for (int i = 2; i <= cfg.l; ++i)
        l_fact *= i;
    out.leading_term = l_fact * static_cast<long double>(binomial(cfg.F_exponent, cfg.l)) * prod_log / std::pow(L, static_cast<long double>(cfg.l));
    return out;
}

} // namespace klsign::sieve
