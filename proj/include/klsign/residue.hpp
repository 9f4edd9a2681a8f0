#pragma once

/**
 * @file residue.hpp
 * @brief Truncated Laurent series and a double-residue bench.
 *
 * For polynomials P, Q vanishing at 0, L = log M and
 *   P_check(s) = sum_n n! [x^n]P / (s L)^n,
 * the residue at (0, 0) of
 *   P_check(s1) Q_check(s2) Z(s1, s2) s1^{v1-1} s2^{v2-1} M^{s1+s2} / (s1+s2)^v
 * is extracted on the domain |s1| < |s2| (or the swapped one) and compared
 * with the main term
 *   c0Z L^{v-v1-v2-m} / ((v-1)! m!) int_0^1 P^{(v1+m/2)} Q^{(v2+m/2)} (1-x)^{v-1} dx.
 */

#include "klsign/polynomial.hpp"

#include <climits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace klsign::residue {

// sum_{e >= low} c_e s^e; coefficients with e <= valid_through are exact,
// higher ones are unknown.
template <class T>
class SeriesExpansion {
public:
    static constexpr int kExact = INT_MAX;

    SeriesExpansion() = default;
    SeriesExpansion(int low, std::vector<T> coeffs, int valid_through = kExact)
        : low_(low), c_(std::move(coeffs)), valid_(valid_through)
    {
        normalize();
    }

    static SeriesExpansion monomial(int e, T coeff = T(1)) { return SeriesExpansion(e, {coeff}); }

    // exp(L s) through s^K.
    static SeriesExpansion exp_series(const T& L, int K)
    {
        if (K < 0)
            throw std::invalid_argument("exp_series: negative order");
        std::vector<T> c(static_cast<std::size_t>(K) + 1);
        c[0] = T(1);
        for (int a = 1; a <= K; ++a)
            c[static_cast<std::size_t>(a)] = c[static_cast<std::size_t>(a - 1)] * L / T(a);
        return SeriesExpansion(0, std::move(c), K);
    }

    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
    int valid_through() const { return valid_; }
    bool exact() const { return valid_ == kExact; }
    bool is_zero() const { return c_.empty(); }

    T coefficient(int e) const
    {
        if (e > valid_)
            throw std::out_of_range("coefficient s^" + std::to_string(e) + " lies beyond the truncation order "
                + std::to_string(valid_));
        if (e < low_ || e > high())
            return T(0);
        return c_[static_cast<std::size_t>(e - low_)];
    }

    // Multiplication by s^k.
    SeriesExpansion shifted(int k) const
    {
        return SeriesExpansion(low_ + k, c_, valid_ == kExact ? kExact : valid_ + k);
    }

    // Substitution s -> lambda s.
    SeriesExpansion scaled_argument(const T& lambda) const
    {
        std::vector<T> c = c_;
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] *= power(lambda, low_ + static_cast<int>(i));
        return SeriesExpansion(low_, std::move(c), valid_);
    }

    // Drops every exponent above e_max and marks them unknown.
    SeriesExpansion truncated(int e_max) const
    {
        std::vector<T> c;
        for (int e = low_; e <= std::min(e_max, high()); ++e)
            c.push_back(c_[static_cast<std::size_t>(e - low_)]);
        return SeriesExpansion(low_, std::move(c), std::min(valid_, e_max));
    }

    // 1 / (this) when the lowest coefficient is nonzero, exact through the
    // same relative order.
    SeriesExpansion reciprocal() const
    {
        if (is_zero())
            throw std::domain_error("reciprocal of the zero series");
        const int rel = exact() ? high() - low_ : valid_ - low_;
        if (exact() && high() != low_)
            throw std::domain_error("reciprocal of a polynomial needs a truncation order");
        std::vector<T> r(static_cast<std::size_t>(rel) + 1);
        const T u = c_[0];
        r[0] = T(1) / u;
        for (int k = 1; k <= rel; ++k) {
            T s(0);
            for (int i = 1; i <= k && i < static_cast<int>(c_.size()); ++i)
                s += c_[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
            r[static_cast<std::size_t>(k)] = -s / u;
        }
        return SeriesExpansion(-low_, std::move(r), exact() ? kExact : -low_ + rel);
    }

    friend SeriesExpansion operator+(const SeriesExpansion& a, const SeriesExpansion& b)
    {
        if (a.is_zero() && a.exact())
            return b;
        if (b.is_zero() && b.exact())
            return a;
        const int lo = std::min(a.low_, b.low_);
        const int valid = std::min(a.valid_, b.valid_);
        const int hi = std::min(std::max(a.high(), b.high()), valid);
        std::vector<T> c;
        for (int e = lo; e <= hi; ++e)
            c.push_back(a.raw(e) + b.raw(e));
        return SeriesExpansion(lo, std::move(c), valid);
    }

    friend SeriesExpansion operator*(const SeriesExpansion& a, const SeriesExpansion& b)
    {
        if ((a.is_zero() && a.exact()) || (b.is_zero() && b.exact()))
            return SeriesExpansion();
        const int valid = combine_valid(a.low_, a.valid_, b.low_, b.valid_);
        if (a.is_zero() || b.is_zero())
            return SeriesExpansion(0, {}, valid);
        const int lo = a.low_ + b.low_;
        const int hi = std::min(a.high() + b.high(), valid);
        if (hi < lo)
            return SeriesExpansion(lo, {}, valid);
        std::vector<T> c(static_cast<std::size_t>(hi - lo) + 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                const int e = a.low_ + static_cast<int>(i) + b.low_ + static_cast<int>(j);
                if (e <= hi)
                    c[static_cast<std::size_t>(e - lo)] += a.c_[i] * b.c_[j];
            }
        return SeriesExpansion(lo, std::move(c), valid);
    }

    SeriesExpansion scaled(const T& k) const
    {
        std::vector<T> c = c_;
        for (auto& x : c)
            x *= k;
        return SeriesExpansion(low_, std::move(c), valid_);
    }

    // The lowest exponent of a product is low_a + low_b, so a missing term of
    // one factor first shows up at that factor's cutoff plus the other's low.
    static int combine_valid(int low_a, int valid_a, int low_b, int valid_b)
    {
        long long v = kExact;
        if (valid_b != kExact)
            v = std::min<long long>(v, static_cast<long long>(low_a) + valid_b);
        if (valid_a != kExact)
            v = std::min<long long>(v, static_cast<long long>(low_b) + valid_a);
        return static_cast<int>(v);
    }

private:
    T raw(int e) const { return (e < low_ || e > high()) ? T(0) : c_[static_cast<std::size_t>(e - low_)]; }

    static T power(const T& x, int e)
    {
        T r(1);
        const T b = e < 0 ? T(1) / x : x;
        for (int i = 0; i < std::abs(e); ++i)
            r *= b;
        return r;
    }

    void normalize()
    {
        while (!c_.empty() && c_.back() == T(0))
            c_.pop_back();
        std::size_t k = 0;
        while (k < c_.size() && c_[k] == T(0))
            ++k;
        if (k == c_.size()) {
            c_.clear();
            return;
        }
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
            low_ += static_cast<int>(k);
        }
    }

    int low_ = 0;
    std::vector<T> c_;
    int valid_ = kExact;
};

// sum c_{jk} s1^j s2^k with a truncation in s1 only: coefficients with
// j <= valid1 are exact for every k. low1 bounds the s1 exponents of the
// untruncated series from below.
template <class T>
class BivariateSeries {
public:
    using Key = std::pair<int, int>;
    static constexpr int kExact = SeriesExpansion<T>::kExact;

    BivariateSeries() = default;
    BivariateSeries(std::map<Key, T> terms, int low1, int valid1 = kExact)
        : terms_(std::move(terms)), low1_(low1), valid1_(valid1)
    {
        prune();
    }

    static BivariateSeries polynomial(const std::map<Key, T>& terms)
    {
        int lo = 0;
        bool first = true;
        for (const auto& [k, c] : terms)
            if (c != T(0)) {
                lo = first ? k.first : std::min(lo, k.first);
                first = false;
            }
        return BivariateSeries(terms, lo);
    }

    // (s1 + s2)^{-v} = sum_n C(-v, n) s1^n s2^{-v-n} on |s1| < |s2|, n <= K.
    static BivariateSeries binomial_kernel(int v, int K)
    {
        std::map<Key, T> t;
        T c(1);
        for (int n = 0; n <= K; ++n) {
            t[{n, -v - n}] = c;
            c = c * T(-v - n) / T(n + 1);
        }
        return BivariateSeries(std::move(t), 0, K);
    }

    int low1() const { return low1_; }
    int valid1() const { return valid1_; }
    const std::map<Key, T>& terms() const { return terms_; }

    T coefficient(int j, int k) const
    {
        if (j > valid1_)
            throw std::out_of_range("coefficient s1^" + std::to_string(j) + " lies beyond the truncation order "
                + std::to_string(valid1_));
        auto it = terms_.find({j, k});
        return it == terms_.end() ? T(0) : it->second;
    }

    // The coefficient of s1^j as an exact series in s2.
    SeriesExpansion<T> row(int j) const
    {
        if (j > valid1_)
            throw std::out_of_range("row s1^" + std::to_string(j) + " lies beyond the truncation order "
                + std::to_string(valid1_));
        int lo = 0, hi = -1;
        bool any = false;
        for (const auto& [k, c] : terms_)
            if (k.first == j) {
                lo = any ? std::min(lo, k.second) : k.second;
                hi = any ? std::max(hi, k.second) : k.second;
                any = true;
            }
        if (!any)
            return SeriesExpansion<T>();
        std::vector<T> c(static_cast<std::size_t>(hi - lo) + 1, T(0));
        for (const auto& [k, v] : terms_)
            if (k.first == j)
                c[static_cast<std::size_t>(k.second - lo)] = v;
        return SeriesExpansion<T>(lo, std::move(c));
    }

    BivariateSeries transposed() const
    {
        if (valid1_ != kExact)
            throw std::logic_error("transposing a series truncated in s1");
        std::map<Key, T> t;
        for (const auto& [k, c] : terms_)
            t[{k.second, k.first}] = c;
        return polynomial(t);
    }

    friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b)
    {
        const int valid = SeriesExpansion<T>::combine_valid(a.low1_, a.valid1_, b.low1_, b.valid1_);
        std::map<Key, T> t;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                const int j = ka.first + kb.first;
                if (j > valid)
                    continue;
                t[{j, ka.second + kb.second}] += ca * cb;
            }
        return BivariateSeries(std::move(t), a.low1_ + b.low1_, valid);
    }

    // Product with a series in s1 alone.
    BivariateSeries times_s1(const SeriesExpansion<T>& u) const
    {
        std::map<Key, T> t;
        if (!u.is_zero())
            for (int e = u.low(); e <= u.high(); ++e)
                if (u.coefficient(e) != T(0))
                    t[{e, 0}] = u.coefficient(e);
        return *this * BivariateSeries(std::move(t), u.low(), u.valid_through());
    }

private:
    void prune()
    {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (it->second == T(0) || it->first.first > valid1_) ? terms_.erase(it) : std::next(it);
    }

    std::map<Key, T> terms_;
    int low1_ = 0;
    int valid1_ = kExact;
};

struct ResidueProblem {
    Polynomial<Rational> P;
    Polynomial<Rational> Q;
    std::map<std::pair<int, int>, Rational> Z; // z_{jk} s1^j s2^k, j, k >= 0
    Rational log_M{20};
    int v = 1;
    int v1 = 1;
    int v2 = 1;
    int m = 2;
    bool swap_expansion = false; // expand on |s2| < |s1| instead

    // Vanishing orders of P and Q, the diagonal conditions on Z (no terms of
    // total degree below m), m even and positive, v's positive, log M > 0.
    // Throws std::invalid_argument.
    void validate() const;
};

// v = v1 = v2 = 1, m = 2, P = Q = x^2, Z = s1 s2.
ResidueProblem committed_problem(const Rational& log_M);

// Smallest truncation order K for which the residue is fully determined.
int required_order(const ResidueProblem& prob);

// Exact residue by iterated extraction: the s1^{-1} row first, then the
// s2^{-1} coefficient. K < 0 selects required_order; a smaller explicit K
// throws std::length_error naming the order needed.
Rational residue_exact(const ResidueProblem& prob, int K = -1);
double residue_numeric(const ResidueProblem& prob, int K = -1);

// m! z_{m/2, m/2}: the product C0 Z^{(m)}(0,0) read off from the normalization
// d^m/ds^m Z(s, s xi)|_0 = C0 xi^{m/2} Z^{(m)}(0,0). Throws if other
// degree-m terms are present.
Rational c0_Zm(const ResidueProblem& prob);

Rational residue_main_term_exact(const ResidueProblem& prob);
double residue_main_term(const ResidueProblem& prob);

// Slope of log|residue| against log log M over the given log M values
// (at least three). Throws std::runtime_error when a residue falls below 1e-30.
double scaling_probe(ResidueProblem prob, std::span<const Rational> log_Ms);

// (1/2 pi i) int_{(c)} x^s s^{-k-1} ds: (log x)^k / k! for x > 1, else 0.
double perron_kernel(double x, int k);

// |sum_{n <= N} y_n F(log(N/n)/log N) - sum_n y_n sum_k a_k (log N)^{-k} perron(N/n, k)|
// with F(x) = sum_k a_k x^k / k!. y[i] holds y_{i+1}. N must be a
// non-integer above 1 and F(0) = 0.
double mellin_verify(std::span<const double> y, double N, const Polynomial<double>& F);

} // namespace klsign::residue
