#pragma once

// Empirical Sato-Tate statistics for Kloosterman angles
// theta_p(a) = arccos(Kl(a; p) / 2).

#include "klsign/arith.hpp"

#include <cstdint>
#include <vector>

namespace klsign::equidist {

using arith::i64;
using arith::u64;

struct AngleSample {
    enum class Kind { vertical, horizontal };
    Kind kind = Kind::vertical;
    u64 p = 0;         // vertical: the prime
    double x_max = 0;  // horizontal: prime bound
    i64 a = 0;         // horizontal: fixed a
    std::vector<double> angles;
};

// theta/pi - sin(2 theta)/(2 pi); std::domain_error outside [0, pi].
double st_cdf(double theta);

// theta_p(a) for 1 <= a < p. p prime and p <= 1e6.
AngleSample vertical_sample(u64 p, unsigned threads = 1);

// theta_p(a) for primes p <= x_max with p not dividing a. x_max <= 1e5.
AngleSample horizontal_sample(double x_max, i64 a, unsigned threads = 1);

// Two-sided Kolmogorov-Smirnov distance to st_cdf.
double discrepancy(const AngleSample& s);

struct Summary {
    std::size_t count = 0;
    double discrepancy = 0;
    double mean_cos = 0;
    double mean_cos2 = 0;
    std::vector<std::uint64_t> bins; // equal-width bins over [0, pi]
};

Summary summarize(const AngleSample& s, int n_bins = 10);

} // namespace klsign::equidist
