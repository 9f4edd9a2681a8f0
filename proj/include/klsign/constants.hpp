#pragma once

/**
 * @file constants.hpp
 * @brief Numerical constants of the lower-bound argument.
 *
 * Region integrals A_i(F) over R_2..R_5, the literature inputs C_i, the
 * assembled constants C1 and C2, exact polynomial integrals, and the Euler
 * products beta, G and I.
 */

#include "klsign/polynomial.hpp"
#include "klsign/quadrature.hpp"
#include "klsign/sieve.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace klsign::constants {

// Literature inputs, used verbatim.
inline constexpr double kC2 = 0.11109;
inline constexpr double kC3 = 0.03557;
inline constexpr double kC4 = 0.01184;
inline constexpr double kC5 = 0.00396;
inline constexpr double kA2Literature = 0.0319586;
inline constexpr double kC1Factor = 0.0142;
inline constexpr double kC2Factor = 8817.853;

double literature_C(int i);

// x^exponent on [0, 1], 0 elsewhere.
double F_power(double x, int exponent = 14);

// L_i(F; alpha_1..alpha_i) = sum over subsets A with sum(A) < 1/4 of
// (-1)^|A| F(1 - 4 sum(A)). Requires every alpha in (0, 1) and
// alpha_1 = 1 - alpha_2 - ... - alpha_i (to 1e-12).
double L_value(std::span<const double> alpha, int F_exponent = 14);

// The region R_i as a predicate over (alpha_2, ..., alpha_i). The default
// predicates can be replaced for experiments.
struct RegionSpec {
    int i = 2;
    double eta = 0;
    double C = 0;
    std::function<bool(std::span<const double>)> contains;
};

RegionSpec region(int i, double eta = 0.0);

// L_i^2 / (alpha_2 ... alpha_i (1 - alpha_2 - ... - alpha_i)) at a point of
// the region, 0 outside it.
double A_integrand(const RegionSpec& r, std::span<const double> tail, int F_exponent = 14);

struct MonteCarloOptions {
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int strata = 64;
};

// i = 2 only. Empty region gives 0 with a note.
quadrature::QuadratureResult A_closed_form(double eta = 0.0);

// i = 2 by one adaptive pass, i = 3 by nested adaptive passes.
quadrature::QuadratureResult A_adaptive(int i, double eta = 0.0);

// Stratified sampling of the box [0, 1/2]^{i-1} (which contains every R_i)
// with rejection by the region predicate. Strata split the alpha_2 axis;
// draw k belongs to stratum k mod strata. Results depend only on
// (seed, samples, strata).
quadrature::QuadratureResult A_monte_carlo(const RegionSpec& r, const MonteCarloOptions& opt, int F_exponent = 14);

struct C1Value {
    long double literature_factor = 0; // uses the factor 0.0142
    long double assembled = 0;         // uses 4 A2 C2_input in its place
};

// (4^l l! C(F_exp, l) prod_{p | Pi_l} log p)^2 * factor * gtilde1.
C1Value C1(const sieve::SieveConfig& cfg, double A2, double C2_input, double gtilde1);

// 4^21 2^10 (prod_{p | Pi_10} log p)^2 * 8817.853 * gtilde1.
long double C2_final(double gtilde1);

// prod_{p | Pi_l} log p in extended precision.
long double log_primorial_product(int l = 10);

// rho - 2^omega > 0 for omega <= 2 and <= 0 for omega >= 3.
bool rho_window(double rho);

// int_0^1 F^{(j+10)}(x)^2 (1-x)^{j-1} (x+3)^{j-1} dx for F = x^14, 1 <= j <= 4.
Rational j_integral(int j);

// sum_{j=1}^{4} C(4, j) / ((j-1)!)^2 * j_integral(j).
Rational c2_sum();

struct EulerValue {
    double value = 0;
    double tail_bound = 0; // |G - G_P| <= tail_bound
};

// G = prod_p (1 + 4/p)(1 - 1/p)^4 truncated at p <= P (P >= 100).
EulerValue euler_G(std::uint64_t truncation_prime);

// beta(p, s) = (p^{s+1} + kappa) / kappa.
double beta(std::uint64_t p, double s, int kappa = 4);

// prod_{p | Pi_10} (1 - p^-t1)(1 - p^-t2)
//   / (1 - 1/(beta p^t1) - 1/(beta p^t2) + 1/(beta p^{t1+t2})), beta = beta(p, 0).
// Throws std::domain_error naming the prime if a denominator factor vanishes.
double I_product(double t1, double t2);

// Least-squares slope of log I(s, s) against log s.
double diagonal_order(std::span<const double> s_values);

struct ConstantsReport {
    quadrature::QuadratureResult A2_closed;
    quadrature::QuadratureResult A2_quad;
    quadrature::QuadratureResult A3, A4, A5;
    double gtilde1 = 0;
    C1Value C1;
    long double C2_final = 0;
    long double ratio_C1_over_2C2 = 0;
    Rational c2_sum;
    std::vector<Rational> j_integrals;
    EulerValue euler_G;
    double I_diagonal_order = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
};

ConstantsReport build_report(double eta, const MonteCarloOptions& opt);

} // namespace klsign::constants
