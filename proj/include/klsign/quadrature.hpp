#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace klsign::quadrature {

enum class Method { closed_form, adaptive, monte_carlo };

std::string_view to_string(Method m);

struct QuadratureResult {
    double value = 0;
    double abs_error_estimate = 0;
    Method method = Method::adaptive;
    std::uint64_t samples = 0; // function evaluations or Monte-Carlo draws
    std::uint64_t seed = 0;
    std::string note;
};

// Globally adaptive 15-point Gauss-Kronrod: the interval with the largest
// |K15 - G7| is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
    double rel_tol = 1e-12, int max_intervals = 4000);

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1) that depends only on (seed, index, dim).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint32_t dim)
{
    std::uint64_t h = mix64(seed ^ mix64(index * 0x100000001B3ull + dim));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace klsign::quadrature
