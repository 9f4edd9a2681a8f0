#include "klsign/kloosterman.hpp"

#include "klsign/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace klsign::kloosterman {

namespace {

constexpr u64 kCompensateAbove = 100'000;
constexpr double kWeilSlack = 1e-9;

// cos(2 pi k / p) for k in [0, count). Rotation recurrence, reseeded from
// std::cos/std::sin every 64 steps so the error stays at a few ulps.
void fill_unit_circle(u32 p, std::vector<double>& out, u32 count)
{
    out.resize(count);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
    const double c1 = std::cos(step), s1 = std::sin(step);
    constexpr u32 kReseed = 64;
    for (u32 base = 0; base < count; base += kReseed) {
        double c = std::cos(step * base), s = std::sin(step * base);
        u32 end = std::min(count, base + kReseed);
        for (u32 k = base; k < end; ++k) {
            out[k] = c;
            double nc = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = nc;
        }
    }
}

// S(1, c; p) for odd p along a = g^k, abar = g^-k. a and -a give the same
// term, so half the walk suffices.
template <class Acc>
double generator_walk(u32 p, u32 c, const std::vector<double>& half)
{
    const arith::Barrett br(p);
    const u32 g = static_cast<u32>(arith::primitive_root(p));
    const u32 gi = static_cast<u32>(arith::inv_mod(g, p));
    const u32 h = (p - 1) / 2;
    const u32 mid = p / 2;
    Acc acc{};
    u32 a = 1, b = c;
    for (u32 k = 0; k < h; ++k) {
        u32 t = a + b;
        t = t >= p ? t - p : t;
        acc += half[t > mid ? p - t : t];
        a = br.mul(a, g);
        b = br.mul(b, gi);
    }
    if constexpr (std::is_same_v<Acc, double>)
        return 2.0 * acc;
    else
        return 2.0 * acc.value();
}

u64 gcd3(i64 m, i64 n, u64 q)
{
    auto mag = [](i64 v) { return v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v); };
    return arith::gcd(arith::gcd(mag(m), mag(n)), q);
}

} // namespace

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::direct:
        return "direct";
    case Method::multiplicative:
        return "multiplicative";
    }
    return "unknown";
}

std::complex<double> s_direct_complex(i64 m, i64 n, u64 q)
{
    if (q < 2)
        throw std::invalid_argument("s_direct: modulus must be >= 2");
    const u64 mr = arith::reduce(m, q);
    const u64 nr = arith::reduce(n, q);
    const double two_pi_over_q = 2.0 * std::numbers::pi / static_cast<double>(q);
    CompensatedSum<double> re, im;
    double re_plain = 0, im_plain = 0;
    const bool compensate = q > kCompensateAbove;
    for (u64 a = 1; a < q; ++a) {
        if (arith::gcd(a, q) != 1)
            continue;
        u64 abar = arith::inv_mod(static_cast<i64>(a), q);
        u64 k = (arith::mulmod(mr, a, q) + arith::mulmod(nr, abar, q)) % q;
        double angle = two_pi_over_q * static_cast<double>(k);
        if (compensate) {
            re += std::cos(angle);
            im += std::sin(angle);
        } else {
            re_plain += std::cos(angle);
            im_plain += std::sin(angle);
        }
    }
    if (compensate)
        return {re.value(), im.value()};
    return {re_plain, im_plain};
}

double s_direct(i64 m, i64 n, u64 q)
{
    auto z = s_direct_complex(m, n, q);
    if (std::abs(z.imag()) >= 1e-9 * std::sqrt(static_cast<double>(q)))
        throw std::logic_error("s_direct: imaginary part " + std::to_string(z.imag()) + " does not vanish for q=" + std::to_string(q));
    return z.real();
}

long double s_direct_extended(i64 m, i64 n, u64 q)
{
    if (q < 2)
        throw std::invalid_argument("s_direct_extended: modulus must be >= 2");
    const u64 mr = arith::reduce(m, q);
    const u64 nr = arith::reduce(n, q);
    const long double two_pi_over_q = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(q);
    CompensatedSum<long double> re;
    for (u64 a = 1; a < q; ++a) {
        if (arith::gcd(a, q) != 1)
            continue;
        u64 abar = arith::inv_mod(static_cast<i64>(a), q);
        u64 k = (arith::mulmod(mr, a, q) + arith::mulmod(nr, abar, q)) % q;
        re += std::cos(two_pi_over_q * static_cast<long double>(k));
    }
    return re.value();
}

void PrimeKernel::rebuild(u32 p)
{
    if (p == p_)
        return;
    if (!arith::is_prime(p))
        throw std::domain_error("PrimeKernel: " + std::to_string(p) + " is not prime");
    arith::ModulusTable::fill_prime(p, inv_, scratch_);
    fill_unit_circle(p, cos_, p);
    p_ = p;
}

double PrimeKernel::sum_unit(u32 c) const
{
    const u32 p = p_;
    const arith::Barrett br(p);
    const u32* inv = inv_.data();
    const double* cs = cos_.data();
    if (p > kCompensateAbove) {
        CompensatedSum<double> acc;
        for (u32 x = 1; x < p; ++x) {
            u32 t = x + br.mul(c, inv[x]);
            acc += cs[t >= p ? t - p : t];
        }
        return acc.value();
    }
    double acc = 0;
    for (u32 x = 1; x < p; ++x) {
        u32 t = x + br.mul(c, inv[x]);
        acc += cs[t >= p ? t - p : t];
    }
    return acc;
}

double PrimeKernel::sum(i64 m, i64 n) const
{
    const u64 mr = arith::reduce(m, p_);
    const u64 nr = arith::reduce(n, p_);
    // Ramanujan sums when one argument vanishes; otherwise S(m,n;p) = S(1,mn;p).
    if (mr == 0 && nr == 0)
        return static_cast<double>(p_ - 1);
    if (mr == 0 || nr == 0)
        return -1.0;
    return sum_unit(static_cast<u32>(arith::mulmod(mr, nr, p_)));
}

double s_prime(i64 m, i64 n, u32 p)
{
    if (!arith::is_prime(p))
        throw std::domain_error("s_prime: " + std::to_string(p) + " is not prime");
    const u64 mr = arith::reduce(m, p);
    const u64 nr = arith::reduce(n, p);
    if (mr == 0 && nr == 0)
        return static_cast<double>(p - 1);
    if (mr == 0 || nr == 0)
        return -1.0;
    if (p == 2)
        return 1.0;
    const u32 c = static_cast<u32>(arith::mulmod(mr, nr, p));
    thread_local std::vector<double> half;
    fill_unit_circle(p, half, p / 2 + 1);
    if (p > kCompensateAbove)
        return generator_walk<CompensatedSum<double>>(p, c, half);
    return generator_walk<double>(p, c, half);
}

double weil_estermann_bound(i64 m, i64 n, const arith::FactoredInteger& q)
{
    const u64 g = gcd3(m, n, q.value());
    const double factor = q.squarefree() ? std::ldexp(1.0, q.omega()) : static_cast<double>(q.tau());
    return std::sqrt(static_cast<double>(q.value())) * std::sqrt(static_cast<double>(g)) * factor;
}

namespace {

bool within_bound(double value, double bound)
{
    return std::abs(value) <= bound * (1.0 + kWeilSlack) + kWeilSlack;
}

} // namespace

KloostermanEval s_fast(i64 m, i64 n, const arith::FactoredInteger& q)
{
    const u64 qv = q.value();
    if (qv < 2)
        throw std::invalid_argument("s_fast: modulus must be >= 2");

    KloostermanEval ev{m, n, qv, 0.0, Method::direct, false};
    if (!q.squarefree() || qv > 0xFFFFFFFFull) {
        ev.value = s_direct(m, n, qv);
    } else if (q.omega() == 1) {
        ev.value = s_prime(m, n, static_cast<u32>(qv));
    } else {
        ev.method = Method::multiplicative;
        double prod = 1.0;
        for (const auto& f : q.factors()) {
            const u64 p = f.prime;
            const u64 c = arith::inv_mod(static_cast<i64>((qv / p) % p), p);
            const u64 mp = arith::mulmod(arith::reduce(m, p), c, p);
            const u64 np = arith::mulmod(arith::reduce(n, p), c, p);
            prod *= s_prime(static_cast<i64>(mp), static_cast<i64>(np), static_cast<u32>(p));
        }
        ev.value = prod;
    }
    ev.bound_ok = within_bound(ev.value, weil_estermann_bound(m, n, q));
    return ev;
}

double kl_norm(i64 a, const arith::FactoredInteger& q)
{
    return s_fast(a, 1, q).value / std::sqrt(static_cast<double>(q.value()));
}

double kl_norm(i64 a, u64 q)
{
    if (q < 2)
        throw std::invalid_argument("kl_norm: modulus must be >= 2");
    return kl_norm(a, arith::factorize(q));
}

Angle angle(i64 a, u64 p)
{
    if (!arith::is_prime(p))
        throw std::domain_error("angle: " + std::to_string(p) + " is not prime");
    if (arith::reduce(a, p) == 0)
        throw std::domain_error("angle: a must be coprime to p");
    const double kl = kl_norm(a, arith::FactoredInteger::from_factors({{p, 1}}));
    if (std::abs(kl) > 2.0 + kWeilSlack)
        throw std::runtime_error("angle: |Kl(" + std::to_string(a) + ";" + std::to_string(p) + ")| exceeds 2");
    const double half = std::clamp(kl / 2.0, -1.0, 1.0);
    return {p, a, std::acos(half)};
}

bool bound_check(i64 m, i64 n, u64 q)
{
    const auto fq = arith::factorize(q);
    return s_fast(m, n, fq).bound_ok;
}

} // namespace klsign::kloosterman
