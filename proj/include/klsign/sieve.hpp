#pragma once

/**
 * @file sieve.hpp
 * @brief Selberg sieve weights with the primorial modification.
 *
 *   lambda_d = mu(d) F(log(sqrt(D)/d) / log sqrt(D)),  lambda_d = 0 for d > sqrt(D)
 *   F(x)     = x^{kappa + l} on [0, 1], 0 elsewhere
 *   W(n)     = (sum_{d | n Pi_l} lambda_d)^2
 *   xi_d     = sum_{[h1, h2] = d} lambda_{h1} lambda_{h2}
 *
 * with D = X^{1/2 - epsilon}, kappa = 4, l = 10 and Pi_l the product of the
 * first l primes.
 */

#include "klsign/arith.hpp"

#include <span>
#include <vector>

namespace klsign::sieve {

using arith::u64;

struct SieveConfig {
    double X = 0;
    double epsilon = 0.02;
    double D = 0;
    double sqrt_D = 0;
    int kappa = 4;
    int l = 10;
    int F_exponent = 14;
    u64 Pi_l = 0;
    std::vector<u64> pi_primes;

    // D = X^{1/2 - epsilon}. Requires X >= 10 and 0 < epsilon < 1/2.
    static SieveConfig from_scale(double X, double epsilon = 0.02);

    // Fixes sqrt(D) directly (sqrt_D > 1); X is back-computed from epsilon
    // and is not range checked. Used for experiments at a prescribed level.
    static SieveConfig with_sqrt_level(double sqrt_D, double epsilon = 0.02);

    double log_sqrt_D() const;

    // x^{F_exponent} on [0, 1], 0 outside.
    double F(double x) const;
};

u64 binomial(int n, int k);

double lambda_d(u64 d, const SieveConfig& cfg);
double lambda_d(const arith::FactoredInteger& d, const SieveConfig& cfg);

// Zero for non-squarefree d and for d > D.
double xi_d(u64 d, const SieveConfig& cfg);

// sum of lambda_d over squarefree divisors d <= sqrt(D) of the product of
// `primes` (sorted, distinct). Throws std::length_error above 20 primes.
double lambda_divisor_sum(std::span<const u64> primes, const SieveConfig& cfg);

struct WeightedModulus {
    arith::FactoredInteger n;
    double W = 0;
};

// (sum_{d | n Pi_l, d <= sqrt D} lambda_d)^2, enumerated over rad(n Pi_l).
double weight_W(const arith::FactoredInteger& n, const SieveConfig& cfg);
WeightedModulus weigh(arith::FactoredInteger n, const SieveConfig& cfg);

// T_j = sum_{d | Pi_l} mu(d) (log d)^j, l <= 15, extended precision.
long double divisor_moment(int j, int l);

// Same sum restricted to d <= y.
long double truncated_divisor_moment(int j, int l, long double y);

struct LambdaPiSum {
    long double value = 0;          // divisor enumeration of sum_{d | Pi_l} lambda_d
    long double binomial_value = 0; // sum_j C(F_exp, j) (-1)^j T_j(sqrt D) / (log sqrt D)^j
    long double leading_term = 0;   // l! C(F_exp, l) prod log p / (log sqrt D)^l
    long double ratio() const { return value / leading_term; }
};

LambdaPiSum lambda_pi_sum(const SieveConfig& cfg);

} // namespace klsign::sieve
