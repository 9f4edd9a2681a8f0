#include "klsign/rsums.hpp"

#include "klsign/kloosterman.hpp"
#include "klsign/numeric.hpp"
#include "klsign/parallel.hpp"
#include "klsign/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace klsign::rsums {

namespace {

constexpr u64 kBlock = 4096;
constexpr double kNearZero = 1e-10;

void check_window(double X, double lo, double hi, const char* who)
{
    if (!(X >= lo && X <= hi))
        throw std::invalid_argument(std::string(who) + ": X=" + std::to_string(X) + " outside [" + std::to_string(lo) + ", "
            + std::to_string(hi) + "]");
}

// Integers n with g(n/X) > 0, i.e. X < n < 2X.
struct Window {
    u64 lo = 1;
    u64 hi = 0; // inclusive; hi < lo means empty
};

Window open_window(double X)
{
    Window w;
    w.lo = static_cast<u64>(std::floor(X)) + 1;
    double top = std::ceil(2.0 * X) - 1.0;
    w.hi = top < static_cast<double>(w.lo) ? 0 : static_cast<u64>(top);
    if (w.hi < w.lo)
        w.hi = w.lo - 1;
    return w;
}

std::vector<u64> prime_list(const arith::FactoredInteger& n)
{
    std::vector<u64> out;
    out.reserve(n.factors().size());
    for (const auto& f : n.factors())
        out.push_back(f.prime);
    return out;
}

// Runs body(n, factored_n) for every squarefree n of the window whose g > 0,
// block by block; body receives its block index for per-block accumulators.
template <class Body>
void for_each_squarefree(const Window& w, unsigned threads, std::size_t n_blocks, Body&& body)
{
    parallel_for(n_blocks, threads, [&](std::size_t b) {
        const u64 lo = w.lo + b * kBlock;
        const u64 hi = std::min(w.hi, lo + kBlock - 1);
        auto facs = arith::factor_range(lo, hi);
        for (u64 n = lo; n <= hi; ++n) {
            const auto& fn = facs[n - lo];
            if (n < 2 || !fn.squarefree())
                continue;
            body(b, n, fn);
        }
    });
}

std::size_t block_count(const Window& w)
{
    if (w.hi < w.lo)
        return 0;
    return static_cast<std::size_t>((w.hi - w.lo) / kBlock + 1);
}

} // namespace

double g_eval(double x)
{
    if (!(x > 1.0 && x < 2.0))
        return 0.0;
    return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)));
}

const SmoothWeight& smooth_weight()
{
    static const SmoothWeight w = [] {
        SmoothWeight s;
        s.gtilde1 = quadrature::integrate_adaptive(g_eval, 1.0, 2.0, 1e-13, 1e-13).value;
        return s;
    }();
    return w;
}

RSumsResult compute_rsums(double X, double rho, const sieve::SieveConfig& cfg, unsigned threads)
{
    check_window(X, 10, 1e7, "compute_rsums");
    if (!(rho > 0))
        throw std::invalid_argument("compute_rsums: rho must be positive");

    struct Partial {
        CompensatedSum<double> r1, r2, r3, rp, rm;
        u64 terms = 0;
    };
    const Window w = open_window(X);
    const std::size_t nb = block_count(w);
    std::vector<Partial> parts(nb);

    for_each_squarefree(w, threads, nb, [&](std::size_t b, u64 n, const arith::FactoredInteger& fn) {
        const double gw = g_eval(static_cast<double>(n) / X);
        if (gw <= 0)
            return;
        const double kl = kloosterman::kl_norm(1, fn);
        const double weight = gw * sieve::weight_W(fn, cfg);
        const double c = std::ldexp(1.0, fn.omega());
        const double a = std::abs(kl);
        auto& p = parts[b];
        p.r1 += weight * a;
        p.r2 += weight * kl;
        p.r3 += weight * a * c;
        p.rp += weight * (a + kl) * (rho - c);
        p.rm += weight * (a - kl) * (rho - c);
        ++p.terms;
    });

    CompensatedSum<double> r1, r2, r3, rp, rm;
    RSumsResult out;
    out.X = X;
    out.rho = rho;
    for (const auto& p : parts) {
        r1 += p.r1.value();
        r2 += p.r2.value();
        r3 += p.r3.value();
        rp += p.rp.value();
        rm += p.rm.value();
        out.n_terms += p.terms;
    }
    out.R1 = r1.value();
    out.R2 = r2.value();
    out.R3 = r3.value();
    out.Rplus = rp.value();
    out.Rminus = rm.value();
    return out;
}

double h_sum(double X, const sieve::SieveConfig& cfg, unsigned threads)
{
    check_window(X, 10, 1e7, "h_sum");
    const Window w = open_window(X);
    const std::size_t nb = block_count(w);
    std::vector<CompensatedSum<double>> parts(nb);

    for_each_squarefree(w, threads, nb, [&](std::size_t b, u64 n, const arith::FactoredInteger& fn) {
        const double gw = g_eval(static_cast<double>(n) / X);
        if (gw <= 0)
            return;
        const double s = sieve::lambda_divisor_sum(prime_list(fn), cfg);
        parts[b] += gw * std::abs(kloosterman::kl_norm(1, fn)) * s * s;
    });

    CompensatedSum<double> total;
    for (const auto& p : parts)
        total += p.value();
    return total.value();
}

double bv_probe(double X, double Q, const sieve::SieveConfig& cfg, unsigned threads)
{
    (void)cfg; // the probe is weight-free; cfg is kept for a uniform call shape
    check_window(X, 10, 1e6, "bv_probe");
    if (Q > std::sqrt(X))
        throw std::invalid_argument("bv_probe: Q must not exceed sqrt(X)");

    const Window w = open_window(X);
    const std::size_t nb = block_count(w);
    if (nb == 0 || Q < 1)
        return 0.0;
    std::vector<double> terms(w.hi - w.lo + 1, 0.0);
    for_each_squarefree(w, threads, nb, [&](std::size_t, u64 n, const arith::FactoredInteger& fn) {
        terms[n - w.lo] = g_eval(static_cast<double>(n) / X) * kloosterman::kl_norm(1, fn);
    });

    const u64 qmax = static_cast<u64>(std::floor(Q));
    CompensatedSum<double> total;
    for (u64 q = 1; q <= qmax; ++q) {
        const auto fq = arith::factorize(q);
        CompensatedSum<double> inner;
        for (u64 n = (w.lo + q - 1) / q * q; n <= w.hi; n += q)
            inner += terms[n - w.lo];
        total += std::pow(3.0, fq.omega()) * std::abs(inner.value());
    }
    return total.value();
}

const char* to_string(Sign s)
{
    return s == Sign::positive ? "positive" : "negative";
}

CensusResult census(u64 X, unsigned shards)
{
    check_window(static_cast<double>(X), 2, 1e7, "census");
    if (shards == 0)
        shards = 1;
    const auto targets = arith::enumerate_targets(X);

    CensusResult out;
    out.X = X;
    out.records.resize(targets.size());

    parallel_for(shards, shards, [&](std::size_t shard) {
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const auto& fq = targets[i];
            if (fq.value() % shards != shard)
                continue;
            CensusRecord rec;
            rec.q = fq.value();
            rec.omega = fq.omega();
            rec.p1 = fq.factors()[0].prime;
            rec.p2 = fq.omega() == 2 ? fq.factors()[1].prime : 0;
            rec.kl = kloosterman::kl_norm(1, fq);
            if (std::abs(rec.kl) < kNearZero) {
                const long double s = kloosterman::s_direct_extended(1, 1, rec.q);
                rec.kl = static_cast<double>(s / std::sqrt(static_cast<long double>(rec.q)));
                rec.flagged = std::abs(rec.kl) < kNearZero;
            }
            rec.sign = rec.kl > 0 ? Sign::positive : Sign::negative;
            out.records[i] = rec;
        }
    });

    for (const auto& r : out.records) {
        if (r.flagged)
            ++out.flagged_count;
        else if (r.sign == Sign::positive)
            ++out.pos_count;
        else
            ++out.neg_count;
    }
    return out;
}

} // namespace klsign::rsums
