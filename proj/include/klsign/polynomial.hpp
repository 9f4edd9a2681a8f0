#pragma once

// Dense univariate polynomials over an exact or floating field.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace klsign {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(int k, T coeff = T(1))
    {
        if (k < 0)
            throw std::invalid_argument("Polynomial::monomial: negative degree");
        std::vector<T> c(static_cast<std::size_t>(k) + 1, T(0));
        c.back() = coeff;
        return Polynomial(std::move(c));
    }

    // c0 + c1 x
    static Polynomial linear(T c0, T c1) { return Polynomial({c0, c1}); }

    bool is_zero() const { return c_.empty(); }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    // Order of vanishing at 0; degree()+1 for the zero polynomial.
    int valuation() const
    {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] != T(0))
                return static_cast<int>(k);
        return degree() + 1;
    }

    T coefficient(int k) const { return k >= 0 && k <= degree() ? c_[static_cast<std::size_t>(k)] : T(0); }
    const std::vector<T>& coefficients() const { return c_; }

    Polynomial derivative(int times = 1) const
    {
        std::vector<T> c = c_;
        for (int t = 0; t < times && !c.empty(); ++t) {
            for (std::size_t k = 1; k < c.size(); ++k)
                c[k - 1] = c[k] * T(static_cast<long long>(k));
            c.pop_back();
        }
        return Polynomial(std::move(c));
    }

    // Exact integral over [0, 1].
    T integral_01() const
    {
        T s(0);
        for (std::size_t k = 0; k < c_.size(); ++k)
            s += c_[k] / T(static_cast<long long>(k + 1));
        return s;
    }

    T operator()(const T& x) const
    {
        T s(0);
        for (std::size_t k = c_.size(); k-- > 0;)
            s = s * x + c_[k];
        return s;
    }

    Polynomial pow(int n) const
    {
        if (n < 0)
            throw std::invalid_argument("Polynomial::pow: negative exponent");
        Polynomial r({T(1)});
        for (int i = 0; i < n; ++i)
            r = r * *this;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            c[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k)
            c[k] += b.c_[k];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b)
    {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t k = 0; k < a.c_.size(); ++k)
            c[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k)
            c[k] -= b.c_[k];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return Polynomial();
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == T(0))
            c_.pop_back();
    }

    std::vector<T> c_;
};

} // namespace klsign
