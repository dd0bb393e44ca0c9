#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json_writer.hpp"
#include "nestspec/harness.hpp"
#include "nestspec/report.hpp"
#include "verify.hpp"

namespace nestspec::cli {

enum class Format { json, csv };

Format parse_format(const std::string& s);
DataFamily parse_family(const std::string& s);
NestingMode parse_weights(const std::string& s);
std::vector<std::size_t> parse_index_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);
/// "lo..hi" (or a single integer, meaning lo == hi).
std::pair<std::size_t, std::size_t> parse_dim_range(const std::string& s);

inline constexpr int kSchemaVersion = 1;

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;      // malformed input or config
inline constexpr int kExitFit = 3;        // numerical failure during fitting
inline constexpr int kExitIo = 4;         // filesystem failure
inline constexpr int kExitTheorem = 5;    // theorem-backed ordering violated

struct FitConfig {
    std::string input;
    DataFamily family = DataFamily::linear;
    std::string output;
    Format format = Format::json;
    std::optional<std::size_t> ar_order;
};

struct CompareConfig {
    std::string input;
    DataFamily family = DataFamily::linear;
    std::vector<std::size_t> subset;
    std::string output;
    Format format = Format::json;
    NestingMode mode = NestingMode::shared;
    std::optional<std::size_t> ar_order;
    std::optional<std::size_t> ar_nested_order;
};

struct SweepConfig {
    std::optional<std::string> input;  // absent: built-in noisy-cubic benchmark
    DataFamily family = DataFamily::linear;
    std::vector<std::size_t> ladder;  // degrees / leading-subset sizes / AR orders
    int replicates = 100;
    double train_fraction = 0.5;
    std::uint64_t seed = 0;
    std::size_t n = 60;  // benchmark sample size
    std::string output;
    Format format = Format::csv;
};

struct VerifyCommandConfig {
    VerifyConfig fuzz;
    std::string output;
    Format format = Format::json;
};

struct SimulateConfig {
    GeneratorSpec generator;
    std::string output;
};

/// Pure computation halves: build the report document without touching the
/// filesystem output (the unit tests use these directly).
JsonValue run_fit(const FitConfig& config);
JsonValue run_compare(const CompareConfig& config, bool& theorem_violated);
JsonValue sweep_to_json(const SweepConfig& config, const TradeoffCurve& curve);
std::string sweep_to_csv(const TradeoffCurve& curve);
TradeoffCurve run_sweep_command(const SweepConfig& config);
JsonValue verify_to_json(const VerifyCommandConfig& config, const VerifyResult& result);

/// Full commands: compute, write the output file, return the exit code.
int cmd_fit(const FitConfig& config);
int cmd_compare(const CompareConfig& config);
int cmd_sweep(const SweepConfig& config);
int cmd_verify(const VerifyCommandConfig& config);
int cmd_simulate(const SimulateConfig& config);

/// Runs `body` and maps thrown errors onto the exit-code contract, printing
/// the diagnostic to stderr.
int guarded(int (*body)(const void*), const void* config);

template <typename Config>
int run_guarded(int (*command)(const Config&), const Config& config) {
    struct Thunk {
        int (*command)(const Config&);
        const Config* config;
    } thunk{command, &config};
    return guarded(
        [](const void* raw) {
            const auto* t = static_cast<const Thunk*>(raw);
            return t->command(*t->config);
        },
        &thunk);
}

}  // namespace nestspec::cli
