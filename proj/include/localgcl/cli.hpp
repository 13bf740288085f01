#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace localgcl::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDataError = 3, kDiverged = 4 };

/// Maps an exception to the documented exit code.
int exit_code_for(const std::exception& e);

/// Options shared by every subcommand.
struct CommonArgs {
    std::optional<std::filesystem::path> config;
    std::vector<std::string> overrides;  // key=value
    std::optional<std::uint64_t> seed;
};

struct TrainArgs {
    CommonArgs common;
    std::optional<std::filesystem::path> outdir;
    std::optional<std::filesystem::path> from_manifest;
};

struct EvalArgs {
    CommonArgs common;
    std::filesystem::path checkpoint;
    std::optional<std::string> dataset;
    std::optional<int> k;
    std::optional<int> seeds;
    std::optional<std::filesystem::path> out;
};

struct AblateArgs {
    CommonArgs common;
    std::string mode;  // static-sweep | dynamic-compare
    int jobs = 1;
    std::optional<int> seeds;
    std::optional<double> best_static;
    std::optional<std::filesystem::path> outdir;
};

struct ProbeArgs {
    CommonArgs common;
    std::filesystem::path checkpoint_cl;
    std::filesystem::path checkpoint_mm;
    std::optional<std::string> dataset;
    std::optional<std::filesystem::path> out;
};

// Each command writes its human-readable output to `out`, diagnostics to `err`,
// and returns an exit code instead of throwing.
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err);
int cmd_probe(const ProbeArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace localgcl::cli
