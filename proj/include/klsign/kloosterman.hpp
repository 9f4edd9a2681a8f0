#pragma once

// Kloosterman sums S(m,n;q) = sum_{a mod q, (a,q)=1} e_q(m a + n abar).
//
// Character convention: e_q(x) = exp(2 pi i x / q). The modulus enters only
// through the character, so callers pass the integer numerator (m a + n abar)
// and never pre-divide by q.

#include "klsign/arith.hpp"

#include <complex>
#include <string_view>
#include <vector>

namespace klsign::kloosterman {

using arith::i64;
using arith::u32;
using arith::u64;

enum class Method { direct, multiplicative };

std::string_view to_string(Method m);

struct KloostermanEval {
    i64 m = 0;
    i64 n = 0;
    u64 q = 0;
    double value = 0.0;
    Method method = Method::direct;
    bool bound_ok = false;
};

struct Angle {
    u64 p = 0;
    i64 a = 0;
    double theta = 0.0; // in [0, pi]
};

// Literal definition, one extended-Euclid inverse per unit. Returns the
// full complex sum; the imaginary part vanishes up to roundoff.
std::complex<double> s_direct_complex(i64 m, i64 n, u64 q);

// Real part of s_direct_complex. Throws std::invalid_argument for q < 2 and
// std::logic_error if the imaginary part exceeds 1e-9 sqrt(q).
double s_direct(i64 m, i64 n, u64 q);

// s_direct accumulated in long double with compensated summation; used to
// re-examine sums that land near zero.
long double s_direct_extended(i64 m, i64 n, u64 q);

// S(1, c; p) for all c at a fixed prime p, using a batch inverse table and a
// table of cos(2 pi k / p). Building costs O(p); each sum costs O(p).
class PrimeKernel {
public:
    PrimeKernel() = default;
    explicit PrimeKernel(u32 p) { rebuild(p); }

    void rebuild(u32 p);
    u32 prime() const { return p_; }

    // S(1, c; p) for c in [0, p).
    double sum_unit(u32 c) const;

    // S(m, n; p) for arbitrary m, n.
    double sum(i64 m, i64 n) const;

private:
    u32 p_ = 0;
    std::vector<u32> inv_;
    std::vector<u32> scratch_;
    std::vector<double> cos_;
};

// S(m, n; p) for a prime p by a walk over powers of a primitive root; no
// inverse table, so a single evaluation costs about p/2 steps.
double s_prime(i64 m, i64 n, u32 p);

// Twisted multiplicativity for squarefree q:
//   S(m, n; q) = prod_i S(m c_i, n c_i; p_i),  c_i = (q / p_i)^{-1} mod p_i.
// Prime q goes straight to the prime kernel (method = direct); non-squarefree
// q falls back to s_direct.
KloostermanEval s_fast(i64 m, i64 n, const arith::FactoredInteger& q);

// Kl(a; q) = S(a, 1; q) / sqrt(q).
double kl_norm(i64 a, u64 q);
double kl_norm(i64 a, const arith::FactoredInteger& q);

// theta_p(a) = arccos(Kl(a; p) / 2). Throws std::domain_error for composite
// p or gcd(a, p) > 1 and std::runtime_error if |Kl| exceeds 2.
Angle angle(i64 a, u64 p);

// q^{1/2} (m,n,q)^{1/2} B(q), with B = 2^omega(q) for squarefree q and
// tau(q) otherwise.
double weil_estermann_bound(i64 m, i64 n, const arith::FactoredInteger& q);

bool bound_check(i64 m, i64 n, u64 q);

} // namespace klsign::kloosterman
