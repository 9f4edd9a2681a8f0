#include "klsign/residue.hpp"

#include "klsign/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace klsign::residue {

namespace {

using Series = SeriesExpansion<Rational>;
using Bivariate = BivariateSeries<Rational>;

BigInt factorial(int n)
{
    BigInt f = 1;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

Rational rpow(const Rational& x, int e)
{
    Rational r(1);
    const Rational b = e < 0 ? Rational(1) / x : x;
    for (int i = 0; i < std::abs(e); ++i)
        r *= b;
    return r;
}

// sum_n n! p_n L^{-n} s^{-n}
Series check_transform(const Polynomial<Rational>& P, const Rational& L)
{
    if (P.is_zero())
        return Series();
    const int d = P.degree();
    std::vector<Rational> c(static_cast<std::size_t>(d) + 1, Rational(0));
    for (int n = 0; n <= d; ++n)
        c[static_cast<std::size_t>(d - n)] = Rational(factorial(n)) * P.coefficient(n) * rpow(L, -n);
    return Series(-d, std::move(c));
}

ResidueProblem oriented(const ResidueProblem& prob)
{
    if (!prob.swap_expansion)
        return prob;
    ResidueProblem t = prob;
    std::swap(t.P, t.Q);
    std::swap(t.v1, t.v2);
    t.Z.clear();
    for (const auto& [k, c] : prob.Z)
        t.Z[{k.second, k.first}] = c;
    t.swap_expansion = false;
    return t;
}

// The s1^{-1} row of Z (s1+s2)^{-v} s1^{v1-1} P_check(s1) exp(L s1).
Series first_row(const ResidueProblem& p, int K)
{
    const auto U1 = check_transform(p.P, p.log_M).shifted(p.v1 - 1) * Series::exp_series(p.log_M, K);
    const auto B = Bivariate::polynomial(p.Z) * Bivariate::binomial_kernel(p.v, K);
    return B.times_s1(U1).row(-1);
}

Series second_factor(const ResidueProblem& p, int K)
{
    return check_transform(p.Q, p.log_M).shifted(p.v2 - 1) * Series::exp_series(p.log_M, K);
}

int z_min_j(const ResidueProblem& p)
{
    int jmin = 0;
    bool any = false;
    for (const auto& [k, c] : p.Z)
        if (c != 0) {
            jmin = any ? std::min(jmin, k.first) : k.first;
            any = true;
        }
    return jmin;
}

bool z_is_zero(const ResidueProblem& p)
{
    for (const auto& [k, c] : p.Z)
        if (c != 0)
            return false;
    return true;
}

} // namespace

void ResidueProblem::validate() const
{
    if (v < 1 || v1 < 1 || v2 < 1)
        throw std::invalid_argument("ResidueProblem: v, v1, v2 must be positive");
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("ResidueProblem: m must be even and positive");
    if (!(log_M > 0))
        throw std::invalid_argument("ResidueProblem: M must exceed 1");
    if (!P.is_zero() && P.valuation() < v1 + m / 2)
        throw std::invalid_argument("ResidueProblem: P must vanish to order v1 + m/2 at 0");
    if (!Q.is_zero() && Q.valuation() < v2 + m / 2)
        throw std::invalid_argument("ResidueProblem: Q must vanish to order v2 + m/2 at 0");
    for (const auto& [k, c] : Z) {
        if (k.first < 0 || k.second < 0)
            throw std::invalid_argument("ResidueProblem: Z must be a polynomial");
        if (c != 0 && k.first + k.second < m)
            throw std::invalid_argument("ResidueProblem: Z(s, s xi) must vanish to order m at 0");
    }
}

ResidueProblem committed_problem(const Rational& log_M)
{
    ResidueProblem p;
    p.P = Polynomial<Rational>::monomial(2);
    p.Q = Polynomial<Rational>::monomial(2);
    p.Z[{1, 1}] = Rational(1);
    p.log_M = log_M;
    p.v = p.v1 = p.v2 = 1;
    p.m = 2;
    return p;
}

int required_order(const ResidueProblem& prob)
{
    prob.validate();
    const ResidueProblem p = oriented(prob);
    if (z_is_zero(p) || p.P.is_zero() || p.Q.is_zero())
        return 0;
    const int K1 = std::max(0, p.P.degree() - p.v1 - z_min_j(p));
    const Series row = first_row(p, K1);
    if (row.is_zero())
        return K1;
    const int K2 = -1 - row.low() - (p.v2 - 1 - p.Q.degree());
    return std::max({K1, K2, 0});
}

Rational residue_exact(const ResidueProblem& prob, int K)
{
    const int need = required_order(prob);
    if (K < 0)
        K = need;
    else if (K < need)
        throw std::length_error("residue: truncation order " + std::to_string(K) + " is insufficient; need at least "
            + std::to_string(need));
    const ResidueProblem p = oriented(prob);
    if (z_is_zero(p) || p.P.is_zero() || p.Q.is_zero())
        return Rational(0);
    const Series S = first_row(p, K) * second_factor(p, K);
    return S.coefficient(-1);
}

double residue_numeric(const ResidueProblem& prob, int K)
{
    return static_cast<double>(residue_exact(prob, K));
}

Rational c0_Zm(const ResidueProblem& prob)
{
    prob.validate();
    Rational diag(0);
    for (const auto& [k, c] : prob.Z) {
        if (c == 0 || k.first + k.second != prob.m)
            continue;
        if (k.first != prob.m / 2)
            throw std::invalid_argument("c0_Zm: degree-m part of Z is not a multiple of (s1 s2)^{m/2}");
        diag = c;
    }
    return Rational(factorial(prob.m)) * diag;
}

Rational residue_main_term_exact(const ResidueProblem& prob)
{
    const Rational cz = c0_Zm(prob);
    const auto one_minus = Polynomial<Rational>::linear(Rational(1), Rational(-1));
    const auto integrand =
        prob.P.derivative(prob.v1 + prob.m / 2) * prob.Q.derivative(prob.v2 + prob.m / 2) * one_minus.pow(prob.v - 1);
    const Rational denom = Rational(factorial(prob.v - 1) * factorial(prob.m));
    return cz * rpow(prob.log_M, prob.v - prob.v1 - prob.v2 - prob.m) / denom * integrand.integral_01();
}

double residue_main_term(const ResidueProblem& prob)
{
    return static_cast<double>(residue_main_term_exact(prob));
}

double scaling_probe(ResidueProblem prob, std::span<const Rational> log_Ms)
{
    if (log_Ms.size() < 3)
        throw std::invalid_argument("scaling_probe: need at least three values of M");
    std::vector<double> x, y;
    for (const auto& L : log_Ms) {
        prob.log_M = L;
        const double r = std::abs(residue_numeric(prob));
        if (!(r >= 1e-30))
            throw std::runtime_error("scaling_probe: residue below 1e-30 at log M = " + L.str());
        x.push_back(std::log(static_cast<double>(L)));
        y.push_back(std::log(r));
    }
    return fit_slope(x, y);
}

double perron_kernel(double x, int k)
{
    if (k < 0)
        throw std::invalid_argument("perron_kernel: k must be non-negative");
    if (!(x > 1.0))
        return 0.0;
    return std::pow(std::log(x), k) / std::tgamma(k + 1.0);
}

double mellin_verify(std::span<const double> y, double N, const Polynomial<double>& F)
{
    if (!(N > 1.0))
        throw std::invalid_argument("mellin_verify: N must exceed 1");
    if (N == std::floor(N))
        throw std::invalid_argument("mellin_verify: N must not be an integer");
    if (F(0.0) != 0.0)
        throw std::invalid_argument("mellin_verify: F(0) must vanish");

    const double logN = std::log(N);
    std::vector<double> a(static_cast<std::size_t>(std::max(F.degree(), 0)) + 1);
    for (int k = 0; k <= F.degree(); ++k)
        a[static_cast<std::size_t>(k)] = F.coefficient(k) * std::tgamma(k + 1.0);

    CompensatedSum<double> left, right;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        if (y[i] == 0.0)
            continue;
        if (n <= N)
            left += y[i] * F(std::log(N / n) / logN);
        double inner = 0;
        for (int k = 0; k <= F.degree(); ++k)
            inner += a[static_cast<std::size_t>(k)] * std::pow(logN, -k) * perron_kernel(N / n, k);
        right += y[i] * inner;
    }
    return std::abs(left.value() - right.value());
}

} // namespace klsign::residue
