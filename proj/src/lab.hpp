#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <variant>

#include "sumprod.hpp"

namespace spl::lab {

enum class Command { bkt, spectrum, count, sweep, census, rudnev, murphy, split, charmoment };

enum class OutputFormat { csv, jsonl };

Command command_from_name(const std::string& name);
const char* command_name(Command c);

struct SizeRule {
    bool absolute = true;
    u64 n = 0;          // absolute size
    double alpha = 0.0; // n = clamp(ceil(constant * p^alpha), 1, p)
    double constant = 1.0;

    u64 realize(u64 p) const;
};

struct Config {
    Command command = Command::sweep;
    std::vector<u64> primes;
    std::string family = "random"; // random | interval:a0 | geometric:r,a0 |
                                   // subgroup:d | explicit:e1,e2,...
    SizeRule size;
    u32 trials = 1;
    u64 base_seed = 0;
    Signs signs;
    std::string method = "transform"; // count: brute | repfn | transform | all
    std::vector<Rational> thresholds; // census K list
    std::optional<Rational> split_threshold;
    std::string dilate_rule = "first:1"; // rudnev/murphy X: first:m | random:m
    bool affine_bcd = false;             // sweep/count: B,C,D random affine images of A
    std::string out_path;
    OutputFormat format = OutputFormat::csv;
    u32 threads = 0; // 0 = hardware default
};

using Value = std::variant<std::monostate, bool, u64, double, BigInt, Rational, std::string>;

struct Record {
    std::unordered_map<std::string, Value> cells;

    void set(const std::string& column, Value v) { cells[column] = std::move(v); }
};

struct RunStats {
    u64 rows = 0;
    u64 trials_total = 0;
    u64 trials_failed = 0;
};

// Fixed column order for a command's rows.
const std::vector<std::string>& schema(Command c);

// Throws Errc::validation on a bad config.
void validate(const Config& config);

// Runs every (prime, trial) task in a worker pool; row order is
// (prime, trial, expansion) regardless of completion order.
std::vector<Record> run(const Config& config, RunStats* stats = nullptr);

void emit(const std::vector<Record>& records, Command command, OutputFormat format,
          std::ostream& out);

// validate + run + write to config.out_path ("-" = stdout).
RunStats run_to_file(const Config& config);

// Set-family construction from a descriptor string (used per trial).
FpSet build_family_set(const FieldPtr& field, const std::string& family, u64 target_size, u64 seed);

// Parsers shared with the C API surface.
Rational parse_rational(const std::string& text);
Signs parse_signs(const std::string& text);

std::string csv_escape(const std::string& cell);
std::string value_to_text(const Value& v);

} // namespace spl::lab
