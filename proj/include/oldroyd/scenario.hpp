#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oldroyd/config.hpp"
#include "oldroyd/io.hpp"

namespace oldroyd::cli {

struct ScenarioOptions
{
    bool quiet = false;
    /// Overrides output.dir when non-empty.
    std::filesystem::path out_dir;
    /// Verdicts written by the scenario carry this id prefix, e.g. "A7".
    std::string id;
};

struct ScenarioResult
{
    int exit_code = 0;
    integrate::RunResult run;
    std::vector<diag::EnergyRecord> records;
    std::vector<Verdict> verdicts;
    std::filesystem::path csv_path;
    std::filesystem::path verdict_path;
    std::vector<std::filesystem::path> checkpoints;
    /// Fit on the produced series when the config asks for one.
    std::optional<diag::DecayFit> fit;
};

/// Default fit window [t_end / 5, 4 t_end / 5]; Cauchy and primitive runs,
/// which stand in for the whole space, are also capped at the wrap-around
/// time.
std::pair<double, double> fit_window(const RunConfig& c, bool* capped = nullptr);

/// Series named by diagnostics.fit_column, h3_u_tau included.
std::vector<double> series(const std::vector<diag::EnergyRecord>& records, const std::string& column, int dim,
                           std::span<const diag::LambdaSpec> lambdas);

/// Runs one configured simulation and writes <name>.csv, <name>.config,
/// <name>.verdict.json and any checkpoints (<name>.<k>.ckpt) into the output
/// directory. The exit code is 0 iff the run completed and every hard verdict
/// passed.
ScenarioResult run_scenario(const RunConfig& config, const ScenarioOptions& opt = {});

} // namespace oldroyd::cli
