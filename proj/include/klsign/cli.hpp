#pragma once

#include "klsign/arith.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace klsign::cli {

enum class Command { eval, census, rsums, constants, residue_demo, satotate, bvprobe };
enum class Format { csv, json };

const char* to_string(Command c);

struct RunConfig {
    Command command = Command::eval;
    std::optional<double> X;
    double rho = 5.0;
    double epsilon = 0.02;
    double eta = 0.0;
    std::optional<arith::i64> q, m, n, p, a;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::string out;
    Format format = Format::json;
    bool format_given = false;
    std::string cache_dir;
    bool no_cache = false;
    std::uint64_t samples = 10'000'000;
    std::optional<double> qmax;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFlagged = 1;
inline constexpr int kUsage = 2;

struct ParseOutcome {
    std::optional<RunConfig> config; // empty when parsing stopped
    int exit_code = kOk;             // meaningful when config is empty
    std::string message;             // help text or usage error
};

// argv[0] is the program name.
ParseOutcome parse_args(const std::vector<std::string>& argv);

struct RunStats {
    bool cache_hit = false;
    int compute_calls = 0;
};

// Canonical cache key: command, the parameters that affect the output
// (sorted by name) and a version tag. Thread count and paths are excluded.
std::string cache_key(const RunConfig& cfg);

// Runs the command and writes the result to cfg.out, or to `out` when no
// path is set. Diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, RunStats* stats = nullptr);

int main_entry(int argc, char** argv);

} // namespace klsign::cli
