#include "klsign/equidist.hpp"

#include "klsign/kloosterman.hpp"
#include "klsign/numeric.hpp"
#include "klsign/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace klsign::equidist {

namespace {

constexpr std::size_t kChunk = 4096;

double gated_angle(double kl, u64 p, u64 a)
{
    if (std::abs(kl) > 2.0 + 1e-9)
        throw std::runtime_error("Kl(" + std::to_string(a) + ";" + std::to_string(p) + ") exceeds 2 in absolute value");
    return std::acos(std::clamp(kl / 2.0, -1.0, 1.0));
}

} // namespace

double st_cdf(double theta)
{
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw std::domain_error("st_cdf: theta outside [0, pi]");
    if (theta == std::numbers::pi)
        return 1.0;
    return theta / std::numbers::pi - std::sin(2.0 * theta) / (2.0 * std::numbers::pi);
}

AngleSample vertical_sample(u64 p, unsigned threads)
{
    if (p > 1'000'000)
        throw std::invalid_argument("vertical_sample: p must not exceed 1e6");
    if (!arith::is_prime(p))
        throw std::domain_error("vertical_sample: " + std::to_string(p) + " is not prime");

    AngleSample s;
    s.kind = AngleSample::Kind::vertical;
    s.p = p;
    s.angles.resize(p - 1);
    const kloosterman::PrimeKernel kernel(static_cast<arith::u32>(p));
    const double root = std::sqrt(static_cast<double>(p));
    const std::size_t chunks = (s.angles.size() + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(s.angles.size(), lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) {
            const u64 a = i + 1;
            // S(a, 1; p) = S(1, a; p)
            s.angles[i] = gated_angle(kernel.sum_unit(static_cast<arith::u32>(a)) / root, p, a);
        }
    });
    return s;
}

AngleSample horizontal_sample(double x_max, i64 a, unsigned threads)
{
    if (!(x_max <= 1e5))
        throw std::invalid_argument("horizontal_sample: x_max must not exceed 1e5");
    AngleSample s;
    s.kind = AngleSample::Kind::horizontal;
    s.x_max = x_max;
    s.a = a;
    if (x_max < 2)
        return s;
    std::vector<u64> primes;
    for (u64 p : arith::primes_up_to(static_cast<u64>(std::floor(x_max))))
        if (arith::reduce(a, p) != 0)
            primes.push_back(p);
    s.angles.resize(primes.size());
    parallel_for(primes.size(), threads, [&](std::size_t i) { s.angles[i] = kloosterman::angle(a, primes[i]).theta; });
    return s;
}

double discrepancy(const AngleSample& s)
{
    if (s.angles.empty())
        throw std::invalid_argument("discrepancy: empty sample");
    std::vector<double> x = s.angles;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = st_cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

Summary summarize(const AngleSample& s, int n_bins)
{
    if (n_bins < 1)
        throw std::invalid_argument("summarize: need at least one bin");
    Summary out;
    out.count = s.angles.size();
    out.bins.assign(static_cast<std::size_t>(n_bins), 0);
    if (s.angles.empty())
        return out;
    out.discrepancy = discrepancy(s);
    CompensatedSum<double> c1, c2;
    for (double t : s.angles) {
        const double c = std::cos(t);
        c1 += c;
        c2 += c * c;
        auto b = static_cast<std::size_t>(t / std::numbers::pi * n_bins);
        ++out.bins[std::min(b, out.bins.size() - 1)];
    }
    out.mean_cos = c1.value() / static_cast<double>(out.count);
    out.mean_cos2 = c2.value() / static_cast<double>(out.count);
    return out;
}

} // namespace klsign::equidist
