#include "klsign/constants.hpp"

#include "klsign/arith.hpp"
#include "klsign/numeric.hpp"
#include "klsign/parallel.hpp"
#include "klsign/rsums.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace klsign::constants {

namespace {

constexpr double kBoxEdge = 0.5;
constexpr std::uint64_t kMcBlock = 1u << 16;

double tail_sum(std::span<const double> tail)
{
    return std::accumulate(tail.begin(), tail.end(), 0.0);
}

bool all_at_least(std::span<const double> tail, double eta)
{
    for (double a : tail)
        if (!(a >= eta && a < 1.0))
            return false;
    return true;
}

bool strictly_decreasing(std::span<const double> tail)
{
    for (std::size_t k = 1; k < tail.size(); ++k)
        if (!(tail[k] < tail[k - 1]))
            return false;
    return true;
}

} // namespace

double literature_C(int i)
{
    switch (i) {
    case 2: return kC2;
    case 3: return kC3;
    case 4: return kC4;
    case 5: return kC5;
    default: throw std::invalid_argument("literature_C: i must be in {2,3,4,5}");
    }
}

double F_power(double x, int exponent)
{
    if (x < 0.0 || x > 1.0)
        return 0.0;
    return std::pow(x, exponent);
}

double L_value(std::span<const double> alpha, int F_exponent)
{
    if (alpha.empty() || alpha.size() > 16)
        throw std::invalid_argument("L_value: need between 1 and 16 exponents");
    double rest = 0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (!(alpha[k] > 0.0 && alpha[k] < 1.0))
            throw std::invalid_argument("L_value: exponents must lie in (0, 1)");
        if (k > 0)
            rest += alpha[k];
    }
    if (std::abs(alpha[0] - (1.0 - rest)) > 1e-12)
        throw std::invalid_argument("L_value: alpha_1 must equal 1 - alpha_2 - ... - alpha_i");

    const std::size_t n = alpha.size();
    double total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double s = 0;
        int size = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (mask >> k & 1u) {
                s += alpha[k];
                ++size;
            }
        if (s >= 0.25)
            continue;
        const double term = F_power(1.0 - 4.0 * s, F_exponent);
        total += (size % 2 == 0) ? term : -term;
    }
    return total;
}

RegionSpec region(int i, double eta)
{
    RegionSpec r;
    r.i = i;
    r.eta = eta;
    r.C = literature_C(i);
    switch (i) {
    case 2:
        r.contains = [eta](std::span<const double> t) {
            if (t.size() != 1 || !all_at_least(t, eta))
                return false;
            return (0.75 + eta) * (1.0 - t[0]) < t[0] && t[0] < 0.5;
        };
        break;
    case 3:
        r.contains = [eta](std::span<const double> t) {
            if (t.size() != 2 || !all_at_least(t, eta))
                return false;
            const double a1 = 1.0 - tail_sum(t);
            return 0.5 * a1 < t[0] && t[1] < t[0] && t[0] < a1;
        };
        break;
    case 4:
        r.contains = [eta](std::span<const double> t) {
            if (t.size() != 3 || !all_at_least(t, eta))
                return false;
            const double a1 = 1.0 - tail_sum(t);
            return 0.5 * a1 < t[0] + t[1] && strictly_decreasing(t) && t[0] < a1;
        };
        break;
    case 5:
        r.contains = [eta](std::span<const double> t) {
            if (t.size() != 4 || !all_at_least(t, eta))
                return false;
            const double a1 = 1.0 - tail_sum(t);
            return 0.5 * a1 < t[0] + t[1] + t[2] && 0.5 * (t[1] + t[2] + t[3]) < t[0] && strictly_decreasing(t)
                && t[0] < a1;
        };
        break;
    default:
        throw std::invalid_argument("region: i must be in {2,3,4,5}");
    }
    return r;
}

double A_integrand(const RegionSpec& r, std::span<const double> tail, int F_exponent)
{
    if (!r.contains(tail))
        return 0.0;
    std::array<double, 8> alpha{};
    const double a1 = 1.0 - tail_sum(tail);
    alpha[0] = a1;
    double denom = a1;
    for (std::size_t k = 0; k < tail.size(); ++k) {
        alpha[k + 1] = tail[k];
        denom *= tail[k];
    }
    const double L = L_value(std::span<const double>(alpha.data(), tail.size() + 1), F_exponent);
    return L * L / denom;
}

quadrature::QuadratureResult A_closed_form(double eta)
{
    quadrature::QuadratureResult res;
    res.method = quadrature::Method::closed_form;
    const double lo = std::max(eta, (0.75 + eta) / (1.75 + eta));
    if (!(lo < 0.5)) {
        res.note = "region empty";
        return res;
    }
    // lo > 1/4 forces L_2 = 1; the antiderivative log(a/(1-a)) vanishes at 1/2.
    res.value = -std::log(lo / (1.0 - lo));
    return res;
}

quadrature::QuadratureResult A_adaptive(int i, double eta)
{
    const RegionSpec r = region(i, eta);
    if (i == 2) {
        const double lo = std::max(eta, (0.75 + eta) / (1.75 + eta));
        if (!(lo < 0.5)) {
            quadrature::QuadratureResult res;
            res.note = "region empty";
            return res;
        }
        auto f = [&](double a) {
            const std::array<double, 2> alpha{1.0 - a, a};
            const double L = L_value(alpha);
            return L * L / (a * (1.0 - a));
        };
        return quadrature::integrate_adaptive(f, lo, 0.5, 1e-13, 1e-12);
    }
    if (i != 3)
        throw std::invalid_argument("A_adaptive: only i = 2 and i = 3 are supported");

    std::uint64_t evals = 0;
    double inner_err = 0;
    auto outer = [&](double a2) {
        const double lo = std::max(eta, 1.0 - 3.0 * a2);
        const double hi = std::min(a2, 1.0 - 2.0 * a2);
        if (!(hi > lo))
            return 0.0;
        auto inner = [&](double a3) {
            const std::array<double, 2> t{a2, a3};
            return A_integrand(r, t);
        };
        auto q = quadrature::integrate_adaptive(inner, lo, hi, 1e-12, 1e-10);
        evals += q.samples;
        inner_err = std::max(inner_err, q.abs_error_estimate);
        return q.value;
    };
    auto res = quadrature::integrate_adaptive(outer, std::max(0.25, eta), 0.5, 1e-10, 1e-9);
    res.samples += evals;
    res.abs_error_estimate += inner_err * 0.25;
    if (res.value == 0)
        res.note = "region empty";
    return res;
}

quadrature::QuadratureResult A_monte_carlo(const RegionSpec& r, const MonteCarloOptions& opt, int F_exponent)
{
    if (r.i < 2 || r.i > 5)
        throw std::invalid_argument("A_monte_carlo: i must be in {2,3,4,5}");
    if (opt.samples < 2 * static_cast<std::uint64_t>(opt.strata) || opt.strata < 1)
        throw std::invalid_argument("A_monte_carlo: need at least two samples per stratum");

    const int dims = r.i - 1;
    const auto S = static_cast<std::size_t>(opt.strata);
    const double h = kBoxEdge / static_cast<double>(S);

    struct Acc {
        std::vector<CompensatedSum<double>> sum, sumsq;
        std::vector<std::uint64_t> count;
        std::uint64_t hits = 0;
    };
    const std::size_t n_blocks = static_cast<std::size_t>((opt.samples + kMcBlock - 1) / kMcBlock);
    std::vector<Acc> blocks(n_blocks);

    parallel_for(n_blocks, opt.threads, [&](std::size_t b) {
        Acc& acc = blocks[b];
        acc.sum.resize(S);
        acc.sumsq.resize(S);
        acc.count.assign(S, 0);
        const std::uint64_t k0 = b * kMcBlock;
        const std::uint64_t k1 = std::min<std::uint64_t>(opt.samples, k0 + kMcBlock);
        std::array<double, 4> t{};
        for (std::uint64_t k = k0; k < k1; ++k) {
            const std::size_t s = static_cast<std::size_t>(k % S);
            t[0] = (static_cast<double>(s) + quadrature::counter_uniform(opt.seed, k, 0)) * h;
            for (int d = 1; d < dims; ++d)
                t[static_cast<std::size_t>(d)] = kBoxEdge * quadrature::counter_uniform(opt.seed, k, static_cast<std::uint32_t>(d));
            const double f = A_integrand(r, std::span<const double>(t.data(), static_cast<std::size_t>(dims)), F_exponent);
            if (f != 0.0)
                ++acc.hits;
            acc.sum[s] += f;
            acc.sumsq[s] += f * f;
            ++acc.count[s];
        }
    });

    std::vector<CompensatedSum<double>> sum(S), sumsq(S);
    std::vector<std::uint64_t> count(S, 0);
    std::uint64_t hits = 0;
    for (const auto& acc : blocks) {
        for (std::size_t s = 0; s < S; ++s) {
            sum[s] += acc.sum[s].value();
            sumsq[s] += acc.sumsq[s].value();
            count[s] += acc.count[s];
        }
        hits += acc.hits;
    }

    const double vol = h * std::pow(kBoxEdge, dims - 1);
    CompensatedSum<double> value, var;
    for (std::size_t s = 0; s < S; ++s) {
        const double n = static_cast<double>(count[s]);
        const double mean = sum[s].value() / n;
        const double m2 = std::max(0.0, sumsq[s].value() / n - mean * mean) * n / (n - 1.0);
        value += vol * mean;
        var += vol * vol * m2 / n;
    }

    quadrature::QuadratureResult res;
    res.method = quadrature::Method::monte_carlo;
    res.value = value.value();
    res.abs_error_estimate = std::sqrt(var.value());
    res.samples = opt.samples;
    res.seed = opt.seed;
    if (hits == 0)
        res.note = "region empty";
    return res;
}

long double log_primorial_product(int l)
{
    long double p = 1;
    for (auto q : arith::first_primes(l))
        p *= std::log(static_cast<long double>(q));
    return p;
}

C1Value C1(const sieve::SieveConfig& cfg, double A2, double C2_input, double gtilde1)
{
    if (!(A2 > 0 && C2_input > 0 && gtilde1 > 0))
        throw std::invalid_argument("C1: inputs must be positive");
    long double base = std::pow(4.0L, cfg.l);
    for (int k = 2; k <= cfg.l; ++k)
        base *= k;
    base *= static_cast<long double>(sieve::binomial(cfg.F_exponent, cfg.l));
    base *= log_primorial_product(cfg.l);
    const long double sq = base * base;
    C1Value v;
    v.literature_factor = sq * static_cast<long double>(kC1Factor) * gtilde1;
    v.assembled = sq * 4.0L * A2 * C2_input * gtilde1;
    return v;
}

long double C2_final(double gtilde1)
{
    if (!(gtilde1 > 0))
        throw std::invalid_argument("C2_final: gtilde1 must be positive");
    const long double lp = log_primorial_product(10);
    return std::pow(4.0L, 21) * 1024.0L * lp * lp * static_cast<long double>(kC2Factor) * gtilde1;
}

bool rho_window(double rho)
{
    for (int omega = 0; omega <= 6; ++omega) {
        const double c = std::ldexp(1.0, omega);
        if (omega <= 2 && !(rho - c > 0))
            return false;
        if (omega >= 3 && !(rho - c <= 0))
            return false;
    }
    return true;
}

Rational j_integral(int j)
{
    if (j < 1 || j > 4)
        throw std::invalid_argument("j_integral: j must be in 1..4");
    const auto F = Polynomial<Rational>::monomial(14);
    const auto D = F.derivative(j + 10);
    const auto one_minus = Polynomial<Rational>::linear(Rational(1), Rational(-1));
    const auto x_plus_3 = Polynomial<Rational>::linear(Rational(3), Rational(1));
    const auto integrand = D * D * one_minus.pow(j - 1) * x_plus_3.pow(j - 1);
    return integrand.integral_01();
}

Rational c2_sum()
{
    Rational total(0);
    for (int j = 1; j <= 4; ++j) {
        BigInt g = 1;
        for (int k = 2; k <= j - 1; ++k)
            g *= k;
        total += Rational(static_cast<long long>(sieve::binomial(4, j))) / Rational(g * g) * j_integral(j);
    }
    return total;
}

EulerValue euler_G(std::uint64_t P)
{
    if (P < 100)
        throw std::invalid_argument("euler_G: truncation prime must be >= 100");
    CompensatedSum<long double> log_g;
    for (auto p : arith::primes_up_to(P)) {
        const long double x = 1.0L / static_cast<long double>(p);
        log_g += std::log1p(4.0L * x) + 4.0L * std::log1p(-x);
    }
    EulerValue v;
    const long double g = std::exp(log_g.value());
    v.value = static_cast<double>(g);
    // every factor lies in (exp(-10/(p(p-1))), 1], and sum_{p > P} 10/(p(p-1)) <= 10/P
    v.tail_bound = static_cast<double>(g * -std::expm1(-10.0L / static_cast<long double>(P)));
    return v;
}

double beta(std::uint64_t p, double s, int kappa)
{
    return (std::pow(static_cast<double>(p), s + 1.0) + kappa) / kappa;
}

double I_product(double t1, double t2)
{
    if (!(t1 > 0 && t2 > 0))
        throw std::invalid_argument("I_product: t1 and t2 must be positive");
    long double prod = 1;
    for (auto p : arith::first_primes(10)) {
        const double pd = static_cast<double>(p);
        const double x1 = std::pow(pd, -t1);
        const double x2 = std::pow(pd, -t2);
        const double expanded = 1.0 - x1 - x2 + std::pow(pd, -(t1 + t2));
        const double factored = (-std::expm1(-t1 * std::log(pd))) * (-std::expm1(-t2 * std::log(pd)));
        if (std::abs(expanded - factored) > 1e-12)
            throw std::logic_error("I_product: numerator identity failed at p = " + std::to_string(p));
        const double b = beta(p, 0.0);
        const double den = 1.0 - x1 / b - x2 / b + std::pow(pd, -(t1 + t2)) / b;
        if (den == 0.0 || !std::isfinite(den))
            throw std::domain_error("I_product: denominator factor vanishes at p = " + std::to_string(p));
        prod *= static_cast<long double>(factored) / den;
    }
    return static_cast<double>(prod);
}

double diagonal_order(std::span<const double> s_values)
{
    std::vector<double> x, y;
    for (double s : s_values) {
        x.push_back(std::log(s));
        y.push_back(std::log(I_product(s, s)));
    }
    return fit_slope(x, y);
}

ConstantsReport build_report(double eta, const MonteCarloOptions& opt)
{
    ConstantsReport r;
    r.A2_closed = A_closed_form(eta);
    r.A2_quad = A_adaptive(2, eta);
    r.A3 = A_monte_carlo(region(3, eta), opt);
    r.A4 = A_monte_carlo(region(4, eta), opt);
    r.A5 = A_monte_carlo(region(5, eta), opt);
    r.gtilde1 = rsums::smooth_weight().gtilde1;
    r.C1 = C1(sieve::SieveConfig::from_scale(1e4), kA2Literature, kC2, r.gtilde1);
    r.C2_final = C2_final(r.gtilde1);
    r.ratio_C1_over_2C2 = r.C1.literature_factor / (2 * r.C2_final);
    for (int j = 1; j <= 4; ++j)
        r.j_integrals.push_back(j_integral(j));
    r.c2_sum = c2_sum();
    r.euler_G = euler_G(100000);
    const std::array<double, 3> s{1e-2, 1e-3, 1e-4};
    r.I_diagonal_order = diagonal_order(s);
    r.seed = opt.seed;
    r.samples = opt.samples;
    return r;
}

} // namespace klsign::constants
