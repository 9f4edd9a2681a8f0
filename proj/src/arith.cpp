#include "klsign/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace klsign::arith {

namespace {

constexpr u64 kTrialLimit = 1'000'000;

bool mul_overflows(u64 a, u64 b)
{
    return b != 0 && a > std::numeric_limits<u64>::max() / b;
}

u64 pollard_brent(u64 n)
{
    if (n % 2 == 0)
        return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 m = 128;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void collect_factors(u64 n, std::vector<u64>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    collect_factors(d, out);
    collect_factors(n / d, out);
}

} // namespace

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors)
{
    FactoredInteger out;
    u64 n = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        if (f.prime < 2 || f.exponent < 1)
            throw std::invalid_argument("FactoredInteger: primes must be >= 2 with exponent >= 1");
        if (i > 0 && factors[i - 1].prime >= f.prime)
            throw std::invalid_argument("FactoredInteger: primes must be strictly increasing");
        for (int e = 0; e < f.exponent; ++e) {
            if (mul_overflows(n, f.prime))
                throw std::overflow_error("FactoredInteger: value exceeds 64 bits");
            n *= f.prime;
        }
    }
    out.n_ = n;
    out.factors_ = std::move(factors);
    return out;
}

bool FactoredInteger::squarefree() const
{
    return std::all_of(factors_.begin(), factors_.end(), [](const PrimePower& f) { return f.exponent == 1; });
}

int FactoredInteger::mobius() const
{
    if (!squarefree())
        return 0;
    return factors_.size() % 2 == 0 ? 1 : -1;
}

u64 FactoredInteger::tau() const
{
    u64 t = 1;
    for (const auto& f : factors_)
        t *= static_cast<u64>(f.exponent + 1);
    return t;
}

u64 FactoredInteger::radical() const
{
    u64 r = 1;
    for (const auto& f : factors_)
        r *= f.prime;
    return r;
}

u64 gcd(u64 a, u64 b)
{
    return std::gcd(a, b);
}

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 primitive_root(u64 p)
{
    if (!is_prime(p))
        throw std::domain_error("primitive_root: " + std::to_string(p) + " is not prime");
    if (p == 2)
        return 1;
    const auto f = factorize(p - 1);
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (const auto& pp : f.factors())
            if (powmod(g, (p - 1) / pp.prime, p) == 1) {
                ok = false;
                break;
            }
        if (ok)
            return g;
    }
}

u64 reduce(i64 a, u64 q)
{
    if (a >= 0)
        return static_cast<u64>(a) % q;
    u64 r = static_cast<u64>(-(a + 1)) % q; // avoids overflow at INT64_MIN
    return (q - 1 - r) % q;
}

u64 inv_mod(i64 a, u64 q)
{
    if (q < 2)
        throw std::invalid_argument("inv_mod: modulus must be >= 2");
    u64 r = reduce(a, q);
    // Extended Euclid on (r, q) with signed 128-bit Bezout coefficients.
    __int128 old_r = r, cur_r = q;
    __int128 old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        __int128 quot = old_r / cur_r;
        __int128 tmp = old_r - quot * cur_r;
        old_r = cur_r;
        cur_r = tmp;
        tmp = old_s - quot * cur_s;
        old_s = cur_s;
        cur_s = tmp;
    }
    if (old_r != 1)
        throw std::domain_error("inv_mod: " + std::to_string(a) + " is not invertible modulo " + std::to_string(q));
    __int128 inv = old_s % static_cast<__int128>(q);
    if (inv < 0)
        inv += q;
    return static_cast<u64>(inv);
}

Barrett::Barrett(u32 m)
    : m_(m)
{
    if (m < 2)
        throw std::invalid_argument("Barrett: modulus must be >= 2");
    r_ = static_cast<u64>((static_cast<unsigned __int128>(1) << 64) / m);
}

ModulusTable::ModulusTable(u64 q)
    : q_(q)
{
    if (q == 0)
        throw std::invalid_argument("ModulusTable: modulus must be positive");
    if (q > std::numeric_limits<u32>::max())
        throw std::invalid_argument("ModulusTable: modulus must fit in 32 bits");
    if (q == 1) {
        inv_.assign(1, kNoInverse);
        return;
    }
    if (is_prime(q)) {
        std::vector<u32> scratch;
        fill_prime(static_cast<u32>(q), inv_, scratch);
        return;
    }
    inv_.assign(q, kNoInverse);
    for (u64 a = 1; a < q; ++a) {
        if (gcd(a, q) == 1)
            inv_[a] = static_cast<u32>(inv_mod(static_cast<i64>(a), q));
    }
}

void ModulusTable::fill_prime(u32 p, std::vector<u32>& out, std::vector<u32>& scratch)
{
    out.resize(p);
    out[0] = kNoInverse;
    if (p == 2) {
        out[1] = 1;
        return;
    }
    Barrett br(p);
    // scratch[i] = i! mod p
    scratch.resize(p);
    scratch[0] = 1;
    for (u32 i = 1; i < p; ++i)
        scratch[i] = br.mul(scratch[i - 1], i);
    // (p-1)! = -1 mod p, so its inverse is p - 1.
    u32 inv_fact = p - 1;
    for (u32 i = p - 1; i >= 1; --i) {
        out[i] = br.mul(inv_fact, scratch[i - 1]);
        inv_fact = br.mul(inv_fact, i);
    }
}

std::vector<u64> primes_up_to(u64 N)
{
    std::vector<u64> primes;
    if (N < 2)
        return primes;
    std::vector<std::uint8_t> composite(N + 1, 0);
    for (u64 i = 2; i * i <= N; ++i) {
        if (composite[i])
            continue;
        for (u64 j = i * i; j <= N; j += i)
            composite[j] = 1;
    }
    for (u64 i = 2; i <= N; ++i) {
        if (!composite[i])
            primes.push_back(i);
    }
    return primes;
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This witness set is exact for n < 3.3e24.
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

FactoredInteger factorize(u64 n)
{
    if (n == 0)
        throw std::invalid_argument("factorize: n must be positive");
    std::vector<PrimePower> factors;
    u64 m = n;
    auto take = [&](u64 p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e > 0)
            factors.push_back({p, e});
    };
    take(2);
    for (u64 p = 3; p <= kTrialLimit && p * p <= m; p += 2)
        take(p);
    if (m > 1) {
        // Prime unless trial division stopped at the limit; rho handles the rest.
        std::vector<u64> rest;
        collect_factors(m, rest);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i])
                ++j;
            factors.push_back({rest[i], static_cast<int>(j - i)});
            i = j;
        }
    }
    return FactoredInteger::from_factors(std::move(factors));
}

std::vector<FactoredInteger> factor_range(u64 lo, u64 hi)
{
    if (lo == 0 || hi < lo)
        throw std::invalid_argument("factor_range: require 1 <= lo <= hi");
    const std::size_t len = hi - lo + 1;
    std::vector<u64> rest(len);
    std::vector<std::vector<PrimePower>> facs(len);
    for (std::size_t i = 0; i < len; ++i)
        rest[i] = lo + i;
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi)));
    while (root * root > hi)
        --root;
    while ((root + 1) * (root + 1) <= hi)
        ++root;
    for (u64 p : primes_up_to(root)) {
        u64 first = (lo + p - 1) / p * p;
        for (u64 m = first; m <= hi; m += p) {
            std::size_t i = m - lo;
            int e = 0;
            while (rest[i] % p == 0) {
                rest[i] /= p;
                ++e;
            }
            facs[i].push_back({p, e});
        }
    }
    std::vector<FactoredInteger> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (rest[i] > 1)
            facs[i].push_back({rest[i], 1});
        out.push_back(FactoredInteger::from_factors(std::move(facs[i])));
    }
    return out;
}

std::vector<FactoredInteger> enumerate_targets(u64 X)
{
    if (X < 2)
        throw std::invalid_argument("enumerate_targets: X must be >= 2");
    const u64 hi = 2 * X;
    const auto primes = primes_up_to(hi);

    std::vector<FactoredInteger> out;
    for (auto it = std::upper_bound(primes.begin(), primes.end(), X); it != primes.end(); ++it)
        out.push_back(FactoredInteger::from_factors({{*it, 1}}));

    for (std::size_t i = 0; i < primes.size(); ++i) {
        u64 p1 = primes[i];
        if (p1 * p1 >= hi)
            break;
        // p2 > p1 with X < p1 p2 <= 2X
        u64 lo2 = std::max(p1 + 1, X / p1 + 1);
        u64 hi2 = hi / p1;
        auto first = std::lower_bound(primes.begin() + static_cast<std::ptrdiff_t>(i) + 1, primes.end(), lo2);
        for (auto it = first; it != primes.end() && *it <= hi2; ++it)
            out.push_back(FactoredInteger::from_factors({{p1, 1}, {*it, 1}}));
    }
    std::sort(out.begin(), out.end(), [](const FactoredInteger& a, const FactoredInteger& b) { return a.value() < b.value(); });
    return out;
}

std::vector<PrimePair> enumerate_P2(u64 X, double eta)
{
    if (X < 4)
        throw std::invalid_argument("enumerate_P2: X must be >= 4");
    if (eta < 0)
        throw std::invalid_argument("enumerate_P2: eta must be >= 0");
    const u64 hi = 2 * X;
    const double x_eta = std::pow(static_cast<double>(X), eta);
    const auto primes = primes_up_to(hi / 2);

    std::vector<PrimePair> out;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        u64 p1 = primes[i];
        if (p1 * p1 >= hi)
            break;
        if (!(static_cast<double>(p1) > x_eta))
            continue;
        u64 lo2 = std::max(p1 + 1, X / p1 + 1);
        u64 hi2 = hi / p1;
        auto first = std::lower_bound(primes.begin() + static_cast<std::ptrdiff_t>(i) + 1, primes.end(), lo2);
        for (auto it = first; it != primes.end() && *it <= hi2; ++it) {
            if (static_cast<double>(p1) > std::pow(static_cast<double>(*it), 0.75) * x_eta)
                out.push_back({p1, *it});
        }
    }
    return out;
}

std::vector<u64> first_primes(int l)
{
    if (l < 0 || l > 15)
        throw std::invalid_argument("first_primes: l must lie in [0, 15]");
    std::vector<u64> out;
    for (u64 n = 2; static_cast<int>(out.size()) < l; ++n) {
        if (is_prime(n))
            out.push_back(n);
    }
    return out;
}

u64 primorial(int l)
{
    u64 r = 1;
    for (u64 p : first_primes(l))
        r *= p;
    return r;
}

} // namespace klsign::arith
