#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "isoforge/exactnum.hpp"

namespace isoforge::cli {

inline constexpr const char *kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kAnalysisFailure = 1, kUsageError = 2, kIoFailure = 3 };

using Json = nlohmann::ordered_json;

/// A validated invocation: one subcommand with canonical inputs.
struct RunPlan
{
    std::string command; // "analyze-curve", "scholten verify", ...
    Json inputs = Json::object();
    std::optional<std::string> csv;
    std::optional<std::string> output;
    std::optional<std::string> cache_dir;
    unsigned jobs = 0;
};

/// Parsing stopped: usage error (exit 2) or help text (exit 0).
struct ParseStop
{
    int exit_code = kUsageError;
    std::string message;
};

std::variant<RunPlan, ParseStop> plan_from_args(const std::vector<std::string> &args);

/// One output line; timing_ms is always serialized last.
struct ResultRecord
{
    std::string kind;
    Json inputs = Json::object();
    Json outputs = Json::object();
    std::optional<Json> error;
    double timing_ms = 0;

    std::string to_json_line() const;
};

/// Memoized conductors of E_{a,b}, persisted as JSON keyed "a,b".
class ConductorCache
{
    public:
        explicit ConductorCache(std::optional<std::string> dir);
        BigInt conductor(const BigInt &a, const BigInt &b);
        void save() const; // throws IoError
        std::size_t hits() const { return hits_; }
        std::size_t misses() const { return misses_; }

    private:
        std::optional<std::string> path_;
        std::map<std::string, std::string> entries_;
        bool dirty_ = false;
        std::size_t hits_ = 0, misses_ = 0;
};

class IoError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/// Streams records to `out` (or plan.output); diagnostics go to `err`.
int execute_plan(const RunPlan &plan, std::ostream &out, std::ostream &err);

/// argv entry point.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// exposed for tests
std::vector<std::uint64_t> parse_primes(const std::string &spec);
std::vector<BigInt> parse_int_list(const std::string &s, std::size_t expected = 0);

} // namespace isoforge::cli
