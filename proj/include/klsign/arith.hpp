#pragma once

/**
 * @file arith.hpp
 * @brief Integer and modular arithmetic substrate.
 *
 * Primes, factorization, the arithmetic functions mu/omega/tau, modular
 * inverses and the two modulus universes used by the census:
 *   - targets(X): squarefree q in (X, 2X] with omega(q) in {1, 2}
 *   - P2(X, eta): prime pairs p1 < p2, p1 p2 in (X, 2X], p1 > X^eta,
 *                 p1 > p2^{3/4} X^eta
 *
 * "q ~ X" is read as X < q <= 2X throughout.
 */

#include <cstdint>
#include <span>
#include <vector>

namespace klsign::arith {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
    u64 prime = 0;
    int exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A positive integer together with its canonical factorization.
class FactoredInteger {
public:
    FactoredInteger() = default; // the integer 1

    // Validates the factor list (increasing primes, positive exponents)
    // and that the product fits in 64 bits. Primality of the listed primes
    // is the caller's responsibility.
    static FactoredInteger from_factors(std::vector<PrimePower> factors);

    u64 value() const { return n_; }
    std::span<const PrimePower> factors() const& { return factors_; }
    std::span<const PrimePower> factors() const&& = delete; // would dangle

    bool squarefree() const;
    int omega() const { return static_cast<int>(factors_.size()); }
    int mobius() const;
    u64 tau() const;
    u64 radical() const;

private:
    u64 n_ = 1;
    std::vector<PrimePower> factors_;
};

u64 gcd(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

// Least primitive root of an odd prime p (1 for p = 2).
u64 primitive_root(u64 p);

// Reduces a signed integer into [0, q).
u64 reduce(i64 a, u64 q);

// Inverse of a modulo q in [1, q). Throws std::domain_error when
// gcd(a, q) != 1 and std::invalid_argument when q < 2.
u64 inv_mod(i64 a, u64 q);

// Barrett reduction for a fixed modulus below 2^32.
class Barrett {
public:
    explicit Barrett(u32 m);
    u32 modulus() const { return m_; }
    u32 reduce(u64 x) const
    {
        u64 q = static_cast<u64>((static_cast<unsigned __int128>(x) * r_) >> 64);
        u64 t = x - q * m_;
        return static_cast<u32>(t >= m_ ? t - m_ : t);
    }
    u32 mul(u32 a, u32 b) const { return reduce(static_cast<u64>(a) * b); }

private:
    u32 m_;
    u64 r_;
};

// Table of multiplicative inverses modulo q. Entry a holds the inverse of a
// when gcd(a, q) = 1 and kNoInverse otherwise. Entry 0 is always kNoInverse
// (for q = 1 the table is empty).
class ModulusTable {
public:
    static constexpr u32 kNoInverse = 0;

    explicit ModulusTable(u64 q);

    u64 modulus() const { return q_; }
    std::span<const u32> inverses() const { return inv_; }
    u32 inverse(u64 a) const { return inv_[a % q_]; }

    // Fills `out` with inverses modulo the prime p (size p). Uses Wilson's
    // theorem for the single field inversion and Barrett products for the
    // rest; out[0] = kNoInverse.
    static void fill_prime(u32 p, std::vector<u32>& out, std::vector<u32>& scratch);

private:
    u64 q_;
    std::vector<u32> inv_;
};

std::vector<u64> primes_up_to(u64 N);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

FactoredInteger factorize(u64 n);

// Factorizations of every integer in [lo, hi] (lo >= 1) by a segmented sieve
// over the window; entry i belongs to lo + i.
std::vector<FactoredInteger> factor_range(u64 lo, u64 hi);

std::vector<FactoredInteger> enumerate_targets(u64 X);

struct PrimePair {
    u64 p1 = 0;
    u64 p2 = 0;

    friend bool operator==(const PrimePair&, const PrimePair&) = default;
};

std::vector<PrimePair> enumerate_P2(u64 X, double eta = 0.0);

// Product of the first l primes (l <= 15).
u64 primorial(int l);

// The first l primes.
std::vector<u64> first_primes(int l);

} // namespace klsign::arith
