// One PASS/FAIL line per acceptance criterion. argv[1] is the klsign binary.

#include "klsign/arith.hpp"
#include "klsign/constants.hpp"
#include "klsign/equidist.hpp"
#include "klsign/kloosterman.hpp"
#include "klsign/residue.hpp"
#include "klsign/rsums.hpp"
#include "klsign/sieve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace klsign;
using arith::i64;
using arith::u64;

namespace {

// Regression counts from the first census run at X = 1e4.
constexpr u64 kCensusPos = 1741;
constexpr u64 kCensusNeg = 1739;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("%s %2d %s [%.3f s] %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::string capture(const std::string& cmd, int* status)
{
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        *status = -1;
        return out;
    }
    char buf[1 << 14];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, k);
    *status = pclose(p);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion(1, "Kloosterman base cases", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const double a = kloosterman::s_direct(1, 1, 2);
        const double b = kloosterman::s_direct(1, 1, 3);
        const double c = kloosterman::s_direct(1, 1, 5);
        const double t = seconds_since(t0);
        const double e = std::max({std::abs(a - 1), std::abs(b + 1), std::abs(c - (2 + 2 * std::cos(4 * std::numbers::pi / 5)))});
        return Outcome{e < 1e-9 && t < 1e-3, fmt("max err %.2e, %.3f ms", e, t * 1e3)};
    });

    criterion(2, "Weil/Estermann sweep", [] {
        const auto t0 = std::chrono::steady_clock::now();
        int bad = 0, checked = 0;
        for (u64 p : arith::primes_up_to(10000)) {
            bad += !kloosterman::bound_check(1, 1, p);
            ++checked;
        }
        for (u64 q = 2; q <= 2000; ++q) {
            const auto f = arith::factorize(q);
            if (!f.squarefree())
                continue;
            const double bound = std::sqrt(static_cast<double>(q)) * std::ldexp(1.0, f.omega());
            bad += !kloosterman::bound_check(1, 1, q) || std::abs(kloosterman::s_direct(1, 1, q)) > bound * (1 + 1e-12);
            ++checked;
        }
        const double t = seconds_since(t0);
        return Outcome{bad == 0 && t < 30, fmt("%g cases, %g violations", checked, bad)};
    });

    criterion(3, "multiplicativity oracle", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0;
        int n = 0;
        const std::pair<i64, i64> args[] = {{1, 1}, {2, 3}, {-5, 7}};
        for (u64 q = 2; q < 2000; ++q) {
            const auto f = arith::factorize(q);
            if (!f.squarefree())
                continue;
            for (auto [m, k] : args) {
                const double d = kloosterman::s_direct(m, k, q);
                const double s = kloosterman::s_fast(m, k, f).value;
                worst = std::max(worst, std::abs(d - s) / std::max(1.0, std::abs(d)));
                ++n;
            }
        }
        const double t = seconds_since(t0);
        return Outcome{worst < 1e-6 && t < 60, fmt("%g evaluations, worst relative gap %.2e", n, worst)};
    });

    criterion(4, "average identity", [] {
        double worst = 0;
        for (u64 p : arith::primes_up_to(200)) {
            double s = 0;
            for (i64 m = 1; m < static_cast<i64>(p); ++m)
                s += kloosterman::s_direct(m, 1, p);
            worst = std::max(worst, std::abs(s - 1));
        }
        return Outcome{worst < 1e-6, fmt("max |sum - 1| = %.2e", worst)};
    });

    criterion(5, "divisor-moment cancellation", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const long double log_pi = std::log(static_cast<long double>(arith::primorial(10)));
        double worst = 0;
        for (int j = 0; j <= 9; ++j)
            worst = std::max(worst, static_cast<double>(std::abs(sieve::divisor_moment(j, 10)) / std::pow(log_pi, j)));
        long double fact = 1;
        for (int k = 2; k <= 10; ++k)
            fact *= k;
        const double r = static_cast<double>(sieve::divisor_moment(10, 10) / (fact * constants::log_primorial_product(10)));
        const double t = seconds_since(t0);
        return Outcome{worst < 1e-6 && std::abs(r - 1) < 1e-9 && t < 1, fmt("max |T_j|/log(Pi)^j = %.2e, T10 ratio - 1 = %.2e", worst, r - 1)};
    });

    criterion(6, "lambda-sum equivalence", [] {
        double worst = 0;
        for (double r : {1e3, 1e6}) {
            const auto v = sieve::lambda_pi_sum(sieve::SieveConfig::with_sqrt_level(r));
            worst = std::max(worst, static_cast<double>(std::abs((v.value - v.binomial_value) / v.value)));
        }
        return Outcome{worst < 1e-9, fmt("worst relative gap %.2e", worst)};
    });

    criterion(7, "A2 closed form and Monte-Carlo A3..A5", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const double a2 = constants::A_adaptive(2).value;
        bool ok = std::abs(a2 - std::log(4.0 / 3.0)) < 1e-6;
        std::ostringstream d;
        d << "A2 = " << fmt("%.9f", a2);
        constants::MonteCarloOptions opt;
        opt.samples = 10'000'000;
        opt.seed = 1;
        opt.threads = std::max(1u, std::thread::hardware_concurrency());
        for (int i = 3; i <= 5; ++i) {
            const auto r = constants::A_monte_carlo(constants::region(i), opt);
            const double rel = r.abs_error_estimate / r.value;
            ok = ok && rel < 0.01;
            d << fmt(", A%g = %.5f (rel stderr %.2e)", i, r.value, rel);
        }
        // reproducible from the seed, independent of the worker count
        constants::MonteCarloOptions again = opt;
        again.samples = 1'000'000;
        again.threads = 1;
        const auto x = constants::A_monte_carlo(constants::region(3), again);
        again.threads = 3;
        const auto y = constants::A_monte_carlo(constants::region(3), again);
        ok = ok && x.value == y.value && x.abs_error_estimate == y.abs_error_estimate;
        const double t = seconds_since(t0);
        d << (x.value == y.value ? ", reseeded rerun identical" : ", reseeded rerun differs");
        return Outcome{ok && t < 300, d.str()};
    });

    criterion(8, "literature constant cross-consistency", [] {
        const double gap = std::abs(4 * constants::kA2Literature * constants::kC2 - constants::kC1Factor);
        return Outcome{gap < 5e-5, fmt("|4 A2 C2 - 0.0142| = %.2e", gap)};
    });

    criterion(9, "C1 > 2 C2_final", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const double g = rsums::smooth_weight().gtilde1;
        const auto c1 = constants::C1(sieve::SieveConfig::from_scale(1e4), constants::kA2Literature, constants::kC2, g);
        const long double c2 = constants::C2_final(g);
        const double ratio = static_cast<double>(c1.literature_factor / (2 * c2));
        const double t = seconds_since(t0);
        return Outcome{ratio >= 1e8 && ratio <= 1e11 && t < 1, fmt("C1/(2 C2) = %.4e", ratio)};
    });

    criterion(10, "Mellin identity", [] {
        std::mt19937_64 rng(20240101);
        std::uniform_real_distribution<double> u(-1, 1);
        std::uniform_int_distribution<int> len(1, 250);
        const auto F = Polynomial<double>::monomial(14);
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            std::vector<double> y(static_cast<std::size_t>(len(rng)));
            for (auto& v : y)
                v = u(rng);
            worst = std::max(worst, residue::mellin_verify(y, 100.5, F));
        }
        return Outcome{worst < 1e-9, fmt("max error %.2e", worst)};
    });

    criterion(11, "residue bench", [] {
        const double r20 = residue::residue_numeric(residue::committed_problem(20)) / residue::residue_main_term(residue::committed_problem(20));
        const double r80 = residue::residue_numeric(residue::committed_problem(80)) / residue::residue_main_term(residue::committed_problem(80));
        const std::vector<Rational> Ls{20, 40, 80};
        const auto p = residue::committed_problem(20);
        const double slope = residue::scaling_probe(p, Ls);
        const double expected = p.v - p.v1 - p.v2 - p.m;
        const bool ok = r20 >= 0.9 && r20 <= 1.1 && r80 >= 0.97 && r80 <= 1.03 && std::abs(slope - expected) <= 0.1;
        return Outcome{ok, fmt("ratio %.6f at L=20, %.6f at L=80, slope %.6f vs %g", r20, r80, slope, expected)};
    });

    criterion(12, "I-product diagonal order", [] {
        const std::vector<double> s{1e-2, 1e-3, 1e-4};
        const double k = constants::diagonal_order(s);
        return Outcome{std::abs(k - 20) <= 0.1, fmt("fitted order %.4f", k)};
    });

    criterion(13, "sign-change census", [] {
        const auto c = rsums::census(10000, 4);
        bool ok = c.pos_count > 0 && c.neg_count > 0 && c.pos_count == kCensusPos && c.neg_count == kCensusNeg;
        const auto t0 = std::chrono::steady_clock::now();
        const auto big = rsums::census(100000, 4);
        const double t = seconds_since(t0);
        ok = ok && t < 60 && big.pos_count > 0 && big.neg_count > 0;
        return Outcome{ok, fmt("X=1e4: %g positive, %g negative; X=1e5 in %.1f s on %g hardware threads", static_cast<double>(c.pos_count),
                               static_cast<double>(c.neg_count), t, std::thread::hardware_concurrency())};
    });

    criterion(14, "R-sum decomposition", [] {
        double worst = -1e300;
        bool tri = true;
        for (double X : {1e2, 1e3, 1e4}) {
            const auto cfg = sieve::SieveConfig::from_scale(X);
            for (double rho : {4.5, 5.0, 6.0}) {
                const auto r = rsums::compute_rsums(X, rho, cfg, 4);
                const double slack_p = rho * r.R1 + rho * r.R2 - 2 * r.R3 - 1e-6 * r.R1 - r.Rplus;
                const double slack_m = rho * r.R1 - rho * r.R2 - 2 * r.R3 - 1e-6 * r.R1 - r.Rminus;
                worst = std::max({worst, slack_p / r.R1, slack_m / r.R1});
                tri = tri && std::abs(r.R2) <= r.R1;
            }
        }
        return Outcome{worst <= 0 && tri, fmt("max (bound - R)/R1 = %.3e, |R2| <= R1: ", worst) + (tri ? "yes" : "no")};
    });

    criterion(15, "vertical Sato-Tate", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const double d = equidist::discrepancy(equidist::vertical_sample(10007));
        const double t = seconds_since(t0);
        return Outcome{d < 0.05 && t < 10, fmt("discrepancy %.5f", d)};
    });

    criterion(16, "CLI determinism", [&cli] {
        if (cli.empty())
            return Outcome{false, "no CLI path given"};
        const std::vector<std::string> runs = {
            "eval --q 3001 --m 2 --n 5",
            "census --x 3000",
            "census --x 3000 --format json",
            "rsums --x 10000 --rho 6",
            "constants --samples 200000 --seed 7",
            "residue-demo",
            "satotate --p 10007",
            "satotate --x 5000 --a 3",
            "bvprobe --x 20000",
        };
        int mismatches = 0;
        for (const auto& r : runs) {
            std::string first;
            for (int threads : {1, 4, 1, 3}) {
                int st = 0;
                const auto out = capture(cli + " " + r + " --no-cache --threads " + std::to_string(threads), &st);
                if (first.empty())
                    first = out;
                if (out.empty() || out != first) {
                    ++mismatches;
                    std::cout << "  mismatch: " << r << " --threads " << threads << "\n";
                }
            }
        }
        return Outcome{mismatches == 0, fmt("%g commands x 4 runs, %g mismatches", static_cast<double>(runs.size()), mismatches)};
    });

    std::printf("%d of 16 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
