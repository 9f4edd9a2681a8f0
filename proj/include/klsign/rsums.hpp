#pragma once

/**
 * @file rsums.hpp
 * @brief Weighted sums over squarefree n ~ X and the sign-change census.
 *
 * With W(n) = (sum_{d | n Pi_l} lambda_d)^2 and Kl(1;n) = S(1,1;n)/sqrt(n):
 *
 *   R1  = sum g(n/X) mu^2(n) |Kl(1;n)| W(n)
 *   R2  = sum g(n/X) mu^2(n)  Kl(1;n)  W(n)
 *   R3  = sum g(n/X) mu^2(n) |Kl(1;n)| 2^omega(n) W(n)
 *   R+- = sum g(n/X) mu^2(n) (|Kl| +- Kl) (rho - 2^omega(n)) W(n)
 *
 * Termwise (|t| +- t)(rho - c) - (rho|t| +- rho t - 2c|t|) = c(|t| -+ t) >= 0,
 * so R+- >= rho R1 +- rho R2 - 2 R3 must hold for every X.
 *
 * All sums are reduced over fixed-size blocks of n in block order, so the
 * result does not depend on the worker count.
 */

#include "klsign/arith.hpp"
#include "klsign/sieve.hpp"

#include <cstdint>
#include <vector>

namespace klsign::rsums {

using arith::u64;

// exp(-1/((x-1)(2-x))) on (1, 2), zero elsewhere.
double g_eval(double x);

struct SmoothWeight {
    double support_lo = 1.0;
    double support_hi = 2.0;
    double gtilde1 = 0.0; // integral of g over [1, 2]
};

// gtilde1 by adaptive Gauss-Kronrod to 1e-13 absolute; computed once.
const SmoothWeight& smooth_weight();

struct RSumsResult {
    double X = 0;
    double rho = 0;
    double R1 = 0;
    double R2 = 0;
    double R3 = 0;
    double Rplus = 0;
    double Rminus = 0;
    u64 n_terms = 0; // squarefree n with g(n/X) > 0
};

// 10 <= X <= 1e7 and rho > 0, otherwise std::invalid_argument.
RSumsResult compute_rsums(double X, double rho, const sieve::SieveConfig& cfg, unsigned threads = 1);

// sum g(n/X) mu^2(n) |S(1,1;n)|/sqrt(n) (sum_{d | n} lambda_d)^2; note d | n,
// without the primorial.
double h_sum(double X, const sieve::SieveConfig& cfg, unsigned threads = 1);

// sum_{q <= Q} 3^omega(q) | sum_{n = 0 mod q} mu^2(n) g(n/X) Kl(1;n) |.
// Requires Q <= sqrt(X) and X <= 1e6.
double bv_probe(double X, double Q, const sieve::SieveConfig& cfg, unsigned threads = 1);

enum class Sign { positive, negative };

const char* to_string(Sign s);

struct CensusRecord {
    u64 q = 0;
    int omega = 0;
    u64 p1 = 0;
    u64 p2 = 0; // 0 when q is prime
    double kl = 0;
    Sign sign = Sign::positive;
    bool flagged = false; // |kl| < 1e-10 even after extended-precision recomputation
};

struct CensusResult {
    u64 X = 0;
    u64 pos_count = 0;
    u64 neg_count = 0;
    u64 flagged_count = 0;
    std::vector<CensusRecord> records; // increasing q
};

// Requires 2 <= X <= 1e7.
// Classifies every squarefree q in (X, 2X] with omega(q) <= 2 by the sign of
// Kl(1;q). Work is split into `shards` residue classes of q modulo `shards`
// and merged by q, so every shard count gives the same records.
CensusResult census(u64 X, unsigned shards = 1);

} // namespace klsign::rsums
