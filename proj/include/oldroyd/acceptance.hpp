#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oldroyd/io.hpp"

namespace oldroyd::cli {

struct SuiteOptions
{
    /// Reduced resolutions and horizons for smoke runs; verdicts say so.
    bool quick = false;
    bool quiet = true;
    /// Where the run-based criteria leave their CSV, config and verdict files.
    std::filesystem::path out_dir = "acceptance_out";
};

struct Criterion
{
    std::string id;
    std::string title;
    bool soft = false;
    std::function<Verdict(const SuiteOptions&)> run;
};

/// A1..A11 in order.
const std::vector<Criterion>& primary_criteria();

/// Criteria by id ("all" or "primary" selects every one). Throws
/// std::invalid_argument for an unknown id.
std::vector<Criterion> select_criteria(const std::vector<std::string>& ids);

/// Runs each criterion; exceptions become failed verdicts with the message
/// as note. Wall time lands in each verdict's metadata.
std::vector<Verdict> run_criteria(const std::vector<Criterion>& criteria, const SuiteOptions& opt,
                                  const std::function<void(const Verdict&)>& on_done = {});

} // namespace oldroyd::cli
