#include "klsign/cli.hpp"

#include "klsign/cache.hpp"
#include "klsign/constants.hpp"
#include "klsign/equidist.hpp"
#include "klsign/kloosterman.hpp"
#include "klsign/parallel.hpp"
#include "klsign/residue.hpp"
#include "klsign/rsums.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace klsign::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersionTag = "klsign-1";

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g12(double v) { return fmt("%.12g", v); }
std::string g17(double v) { return fmt("%.17g", v); }

struct CommandInfo {
    Command command;
    const char* name;
    const char* help;
    std::set<std::string> flags; // command-specific flags accepted
};

const std::array<CommandInfo, 7>& commands()
{
    static const std::array<CommandInfo, 7> table{{
        {Command::eval, "eval", "Evaluate one Kloosterman sum S(m,n;q)", {"q", "m", "n"}},
        {Command::census, "census", "Sign census of Kl(1;q) over squarefree q in (X,2X] with omega(q) <= 2", {"x"}},
        {Command::rsums, "rsums", "Weighted sums R1, R2, R3, R+ and R-", {"x", "rho", "epsilon"}},
        {Command::constants, "constants", "Numerical constants report", {"eta", "seed", "samples"}},
        {Command::residue_demo, "residue-demo", "Double-residue main-term ladder", {}},
        {Command::satotate, "satotate", "Kloosterman angle sample and Sato-Tate discrepancy", {"p", "x", "a"}},
        {Command::bvprobe, "bvprobe", "Divisor-restricted Kloosterman average probe", {"x", "qmax", "epsilon"}},
    }};
    return table;
}

const CommandInfo& info(Command c)
{
    for (const auto& ci : commands())
        if (ci.command == c)
            return ci;
    throw std::logic_error("unknown command");
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- payload builders -------------------------------------------------

struct Payload {
    std::string text;
    int exit_code = kOk;
};

Payload do_eval(const RunConfig& c)
{
    const arith::i64 q = *c.q;
    if (q < 2)
        throw UsageError("--q must be at least 2");
    const arith::i64 m = c.m.value_or(1);
    const arith::i64 n = c.n.value_or(1);
    const auto ev = kloosterman::s_fast(m, n, arith::factorize(static_cast<arith::u64>(q)));
    const double kl = ev.value / std::sqrt(static_cast<double>(q));
    Payload out;
    if (c.format == Format::csv) {
        out.text = "m,n,q,value,kl,method,bound_ok\n" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(q)
            + "," + g17(ev.value) + "," + g17(kl) + "," + std::string(kloosterman::to_string(ev.method)) + ","
            + (ev.bound_ok ? "true" : "false") + "\n";
    } else {
        json j;
        j["m"] = m;
        j["n"] = n;
        j["q"] = q;
        j["value"] = ev.value;
        j["kl"] = kl;
        j["method"] = std::string(kloosterman::to_string(ev.method));
        j["bound_ok"] = ev.bound_ok;
        out.text = j.dump() + "\n";
    }
    out.exit_code = ev.bound_ok ? kOk : kFlagged;
    return out;
}

Payload do_census(const RunConfig& c)
{
    const double X = *c.X;
    if (X != std::floor(X) || X < 2 || X > 1e7)
        throw UsageError("census needs an integer --x in [2, 1e7]");
    const auto res = rsums::census(static_cast<arith::u64>(X), c.threads);

    json counts;
    counts["X"] = res.X;
    counts["pos_count"] = res.pos_count;
    counts["neg_count"] = res.neg_count;
    counts["flagged_count"] = res.flagged_count;

    auto sign_name = [](const rsums::CensusRecord& r) { return r.flagged ? std::string("flagged") : std::string(rsums::to_string(r.sign)); };

    Payload out;
    if (c.format_given && c.format == Format::json) {
        json j = counts;
        json recs = json::array();
        for (const auto& r : res.records) {
            json e;
            e["q"] = r.q;
            e["omega"] = r.omega;
            e["p1"] = r.p1;
            e["p2"] = r.p2 ? json(r.p2) : json(nullptr);
            e["kl"] = r.kl;
            e["sign"] = sign_name(r);
            recs.push_back(std::move(e));
        }
        j["records"] = std::move(recs);
        out.text = j.dump() + "\n";
    } else {
        std::string s = "q,omega,p1,p2,kl,sign\n";
        s.reserve(res.records.size() * 48);
        for (const auto& r : res.records) {
            s += std::to_string(r.q) + "," + std::to_string(r.omega) + "," + std::to_string(r.p1) + ","
                + (r.p2 ? std::to_string(r.p2) : std::string()) + "," + g12(r.kl) + "," + sign_name(r) + "\n";
        }
        s += counts.dump() + "\n";
        out.text = std::move(s);
    }
    out.exit_code = res.flagged_count > 0 ? kFlagged : kOk;
    return out;
}

Payload do_rsums(const RunConfig& c)
{
    const auto cfg = sieve::SieveConfig::from_scale(*c.X, c.epsilon);
    const auto r = rsums::compute_rsums(*c.X, c.rho, cfg, c.threads);
    Payload out;
    if (c.format == Format::csv) {
        out.text = "X,rho,R1,R2,R3,Rplus,Rminus,n_terms\n" + g17(r.X) + "," + g17(r.rho) + "," + g17(r.R1) + "," + g17(r.R2)
            + "," + g17(r.R3) + "," + g17(r.Rplus) + "," + g17(r.Rminus) + "," + std::to_string(r.n_terms) + "\n";
    } else {
        json j;
        j["X"] = r.X;
        j["rho"] = r.rho;
        j["R1"] = r.R1;
        j["R2"] = r.R2;
        j["R3"] = r.R3;
        j["Rplus"] = r.Rplus;
        j["Rminus"] = r.Rminus;
        j["n_terms"] = r.n_terms;
        out.text = j.dump() + "\n";
    }
    const double tol = 1e-6 * r.R1;
    const bool ok = r.Rplus >= c.rho * r.R1 + c.rho * r.R2 - 2 * r.R3 - tol
        && r.Rminus >= c.rho * r.R1 - c.rho * r.R2 - 2 * r.R3 - tol && std::abs(r.R2) <= r.R1 * (1 + 1e-12);
    out.exit_code = ok ? kOk : kFlagged;
    return out;
}

void flatten(const json& j, const std::string& prefix, std::string& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out += prefix + "," + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

Payload do_constants(const RunConfig& c)
{
    constants::MonteCarloOptions opt;
    opt.samples = c.samples;
    opt.seed = c.seed;
    opt.threads = c.threads;
    const auto r = constants::build_report(c.eta, opt);

    json j;
    j["A2_closed"] = r.A2_closed.value;
    j["A2_quad"] = r.A2_quad.value;
    j["A2_quad_error"] = r.A2_quad.abs_error_estimate;
    j["A2_literature"] = constants::kA2Literature;
    j["A3"] = r.A3.value;
    j["A4"] = r.A4.value;
    j["A5"] = r.A5.value;
    j["A_stderr"] = {{"A3", r.A3.abs_error_estimate}, {"A4", r.A4.abs_error_estimate}, {"A5", r.A5.abs_error_estimate}};
    j["gtilde1"] = r.gtilde1;
    j["C1"] = static_cast<double>(r.C1.literature_factor);
    j["C1_assembled"] = static_cast<double>(r.C1.assembled);
    j["C2_final"] = static_cast<double>(r.C2_final);
    j["ratio_C1_over_2C2"] = static_cast<double>(r.ratio_C1_over_2C2);
    j["c2_sum"] = static_cast<double>(r.c2_sum);
    j["c2_sum_exact"] = r.c2_sum.str();
    json ji = json::array();
    for (const auto& v : r.j_integrals)
        ji.push_back(v.str());
    j["j_integrals"] = std::move(ji);
    j["c2_factor_literature"] = constants::kC2Factor;
    j["c2_factor_reproduced"] = false;
    j["euler_G"] = {{"value", r.euler_G.value}, {"tail_bound", r.euler_G.tail_bound}, {"truncation_prime", 100000}};
    j["I_diagonal_order"] = r.I_diagonal_order;
    j["samples"] = r.samples;
    j["seeds"] = {{"A3", r.seed}, {"A4", r.seed}, {"A5", r.seed}};
    for (const auto* a : {&r.A2_closed, &r.A3, &r.A4, &r.A5})
        if (!a->note.empty())
            j["notes"].push_back(a->note);

    Payload out;
    if (c.format == Format::csv) {
        out.text = "key,value\n";
        flatten(j, "", out.text);
    } else {
        out.text = j.dump(2) + "\n";
    }
    return out;
}

Payload do_residue_demo(const RunConfig& c)
{
    const std::array<int, 3> ladder{20, 40, 80};
    std::vector<Rational> logs;
    json rows = json::array();
    std::string table = "log_M,numeric,main_term,ratio\n";
    for (int L : ladder) {
        logs.emplace_back(L);
        const auto prob = residue::committed_problem(Rational(L));
        const double num = residue::residue_numeric(prob);
        const double main = residue::residue_main_term(prob);
        rows.push_back({{"log_M", L}, {"numeric", num}, {"main_term", main}, {"ratio", num / main}});
        table += std::to_string(L) + "," + g12(num) + "," + g12(main) + "," + g12(num / main) + "\n";
    }
    const double slope = residue::scaling_probe(residue::committed_problem(Rational(20)), logs);
    json summary;
    summary["problem"] = "v=1 v1=1 v2=1 m=2 P=x^2 Q=x^2 Z=s1*s2";
    summary["expected_exponent"] = -3;
    summary["fitted_exponent"] = slope;

    Payload out;
    if (c.format == Format::csv) {
        out.text = table + summary.dump() + "\n";
    } else {
        summary["rows"] = std::move(rows);
        out.text = summary.dump(2) + "\n";
    }
    return out;
}

Payload do_satotate(const RunConfig& c)
{
    equidist::AngleSample s;
    if (c.p) {
        if (*c.p < 2)
            throw UsageError("--p must be a prime");
        s = equidist::vertical_sample(static_cast<arith::u64>(*c.p), c.threads);
    } else {
        s = equidist::horizontal_sample(*c.X, c.a.value_or(1), c.threads);
    }
    const auto sum = equidist::summarize(s);
    json j;
    j["law"] = s.kind == equidist::AngleSample::Kind::vertical ? "vertical" : "horizontal";
    if (c.p)
        j["p"] = s.p;
    else {
        j["x"] = s.x_max;
        j["a"] = s.a;
    }
    j["count"] = sum.count;
    j["discrepancy"] = sum.discrepancy;
    j["mean_cos"] = sum.mean_cos;
    j["mean_cos2"] = sum.mean_cos2;
    j["bins"] = sum.bins;

    Payload out;
    if (c.format_given && c.format == Format::json) {
        j["angles"] = s.angles;
        out.text = j.dump() + "\n";
    } else {
        std::string t = "angle\n";
        for (double a : s.angles)
            t += g12(a) + "\n";
        out.text = t + j.dump() + "\n";
    }
    return out;
}

Payload do_bvprobe(const RunConfig& c)
{
    const double X = *c.X;
    const double Q = c.qmax.value_or(std::floor(std::sqrt(X)));
    const auto cfg = sieve::SieveConfig::from_scale(X, c.epsilon);
    const double v = rsums::bv_probe(X, Q, cfg, c.threads);
    Payload out;
    if (c.format == Format::csv) {
        out.text = "X,Q,value,value_over_X\n" + g17(X) + "," + g17(Q) + "," + g17(v) + "," + g17(v / X) + "\n";
    } else {
        json j;
        j["X"] = X;
        j["Q"] = Q;
        j["value"] = v;
        j["value_over_X"] = v / X;
        out.text = j.dump() + "\n";
    }
    return out;
}

Payload compute(const RunConfig& c)
{
    switch (c.command) {
    case Command::eval: return do_eval(c);
    case Command::census: return do_census(c);
    case Command::rsums: return do_rsums(c);
    case Command::constants: return do_constants(c);
    case Command::residue_demo: return do_residue_demo(c);
    case Command::satotate: return do_satotate(c);
    case Command::bvprobe: return do_bvprobe(c);
    }
    throw std::logic_error("unknown command");
}

int emit(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err)
{
    if (cfg.out.empty()) {
        out << text;
        out.flush();
        return kOk;
    }
    std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) {
        err << "error: cannot write " << cfg.out << '\n';
        return kFlagged;
    }
    return kOk;
}

void check_flags(const RunConfig& cfg, const std::set<std::string>& given)
{
    static const std::set<std::string> specific{"q", "m", "n", "x", "rho", "epsilon", "eta", "seed", "samples", "p", "a", "qmax"};
    const auto& ci = info(cfg.command);
    for (const auto& g : given)
        if (specific.count(g) && !ci.flags.count(g))
            throw UsageError("--" + g + " is not used by " + ci.name);

    switch (cfg.command) {
    case Command::eval:
        if (!cfg.q)
            throw UsageError("eval requires --q");
        break;
    case Command::census:
    case Command::rsums:
    case Command::bvprobe:
        if (!cfg.X)
            throw UsageError(std::string(ci.name) + " requires --x");
        break;
    case Command::satotate:
        if (cfg.p && cfg.X)
            throw UsageError("--p and --x conflict: choose the vertical or the horizontal law");
        if (!cfg.p && !cfg.X)
            throw UsageError("satotate requires --p or --x");
        if (cfg.a && !cfg.X)
            throw UsageError("--a applies to the horizontal law (--x)");
        break;
    default:
        break;
    }
    if (cfg.threads < 1)
        throw UsageError("--threads must be positive");
}

} // namespace

const char* to_string(Command c)
{
    return info(c).name;
}

ParseOutcome parse_args(const std::vector<std::string>& argv)
{
    CLI::App app{"Kloosterman sign-change laboratory", argv.empty() ? "klsign" : argv[0]};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);

    RunConfig cfg;
    cfg.threads = default_threads();
    std::string format = "json";

    std::map<std::string, CLI::Option*> opts;
    opts["x"] = app.add_option("--x", cfg.X, "Scale X");
    opts["rho"] = app.add_option("--rho", cfg.rho, "rho (default 5)");
    opts["epsilon"] = app.add_option("--epsilon", cfg.epsilon, "Sieve level exponent (default 0.02)");
    opts["eta"] = app.add_option("--eta", cfg.eta, "Region parameter eta (default 0)");
    opts["q"] = app.add_option("--q", cfg.q, "Modulus");
    opts["m"] = app.add_option("--m", cfg.m, "First argument (default 1)");
    opts["n"] = app.add_option("--n", cfg.n, "Second argument (default 1)");
    opts["p"] = app.add_option("--p", cfg.p, "Prime for the vertical law");
    opts["a"] = app.add_option("--a", cfg.a, "Fixed a for the horizontal law (default 1)");
    opts["threads"] = app.add_option("--threads", cfg.threads, "Worker threads (default: available cores)");
    opts["seed"] = app.add_option("--seed", cfg.seed, "Monte-Carlo seed (default 1)");
    opts["samples"] = app.add_option("--samples", cfg.samples, "Monte-Carlo samples per region (default 1e7)");
    opts["qmax"] = app.add_option("--qmax", cfg.qmax, "Largest modulus for bvprobe (default sqrt(X))");
    opts["out"] = app.add_option("--out", cfg.out, "Output file (default stdout)");
    opts["format"] = app.add_option("--format", format, "csv or json (default json)")->check(CLI::IsMember({"csv", "json"}));
    opts["cache-dir"] = app.add_option("--cache-dir", cfg.cache_dir, "Cache directory (overrides KL_CACHE_DIR)");
    opts["no-cache"] = app.add_flag("--no-cache", cfg.no_cache, "Neither read nor write the cache");

    std::map<std::string, CLI::App*> subs;
    for (const auto& ci : commands()) {
        auto* sub = app.add_subcommand(ci.name, ci.help);
        sub->fallthrough();
        subs[ci.name] = sub;
    }

    std::vector<const char*> cargv;
    for (const auto& s : argv)
        cargv.push_back(s.c_str());
    if (cargv.empty())
        cargv.push_back("klsign");

    ParseOutcome outcome;
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        outcome.exit_code = app.exit(e, o, er) == 0 ? kOk : kUsage;
        outcome.message = o.str() + er.str();
        return outcome;
    }

    for (const auto& ci : commands())
        if (subs[ci.name]->parsed())
            cfg.command = ci.command;
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.format_given = opts["format"]->count() > 0;

    std::set<std::string> given;
    for (const auto& [name, opt] : opts)
        if (opt->count() > 0)
            given.insert(name);
    try {
        check_flags(cfg, given);
    } catch (const UsageError& e) {
        outcome.exit_code = kUsage;
        outcome.message = std::string("error: ") + e.what() + "\n";
        return outcome;
    }
    outcome.config = cfg;
    return outcome;
}

std::string cache_key(const RunConfig& c)
{
    std::map<std::string, std::string> params;
    const auto& flags = info(c.command).flags;
    auto put = [&](const std::string& k, const std::string& v) {
        if (flags.count(k))
            params[k] = v;
    };
    put("x", c.X ? g17(*c.X) : "-");
    put("rho", g17(c.rho));
    put("epsilon", g17(c.epsilon));
    put("eta", g17(c.eta));
    put("q", c.q ? std::to_string(*c.q) : "-");
    put("m", std::to_string(c.m.value_or(1)));
    put("n", std::to_string(c.n.value_or(1)));
    put("p", c.p ? std::to_string(*c.p) : "-");
    put("a", std::to_string(c.a.value_or(1)));
    put("seed", std::to_string(c.seed));
    put("samples", std::to_string(c.samples));
    put("qmax", c.qmax ? g17(*c.qmax) : "-");
    params["format"] = c.format == Format::csv ? "csv" : "json";
    params["format_given"] = c.format_given ? "1" : "0";

    std::string key = std::string("command=") + to_string(c.command);
    for (const auto& [k, v] : params)
        key += ";" + k + "=" + v;
    return key + ";version=" + kVersionTag;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, RunStats* stats)
{
    RunStats local;
    RunStats& st = stats ? *stats : local;
    const std::string key = cache_key(cfg);
    std::optional<cache::Store> store;
    if (!cfg.no_cache)
        store.emplace(cache::resolve_dir(cfg.cache_dir), &err);

    if (store) {
        if (auto hit = store->load(key)) {
            st.cache_hit = true;
            return emit(cfg, *hit, out, err);
        }
    }

    Payload p;
    try {
        ++st.compute_calls;
        p = compute(cfg);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFlagged;
    }

    if (store && p.exit_code == kOk)
        store->store(key, p.text);
    const int w = emit(cfg, p.text, out, err);
    return w != kOk ? w : p.exit_code;
}

int main_entry(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    const auto parsed = parse_args(args);
    if (!parsed.config) {
        (parsed.exit_code == kOk ? std::cout : std::cerr) << parsed.message;
        return parsed.exit_code;
    }
    return run(*parsed.config, std::cout, std::cerr);
}

} // namespace klsign::cli
