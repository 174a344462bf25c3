#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oldroyd/diagnostics.hpp"

namespace oldroyd::cli {

// ------------------------------------------------------------ time series

/// t,E_inf,E_1,h3_u,h3_tau,h3_n,h3_eta,l2_n,l2_u,l2_tau,mass,momentum_x,
/// momentum_y[,momentum_z],tau_min then one lambda<beta>_<group> column per
/// configured spec.
std::vector<std::string> csv_columns(int dim, std::span<const diag::LambdaSpec> lambdas);

/// Writes the header on construction and one %.17g row per record, flushing
/// each row so an interrupted run leaves a readable prefix.
class CsvWriter
{
public:
    CsvWriter(std::ostream& out, int dim, std::vector<diag::LambdaSpec> lambdas);
    void write(const diag::EnergyRecord& r);

private:
    std::ostream& out_;
    int dim_;
    std::vector<diag::LambdaSpec> lambdas_;
};

struct CsvTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Throws std::out_of_range for a missing column.
    std::vector<double> column(const std::string& name) const;
    bool has(const std::string& name) const;
};

/// Throws std::runtime_error on ragged rows or unparsable numbers.
CsvTable read_csv(std::istream& in);

/// Rebuilds the records from a table in the run schema; the lambda columns
/// are recovered from their names. Throws std::runtime_error when a required
/// column is missing.
std::vector<diag::EnergyRecord> records_from_csv(const CsvTable& table, std::vector<diag::LambdaSpec>* lambdas = nullptr);

// ------------------------------------------------------------ checkpoints

inline constexpr char kCheckpointMagic[8] = {'O', 'L', 'D', 'R', 'Y', 'D', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint
{
    State state;
    PhysParams params;
    double t = 0.0;
    std::uint64_t step = 0;
};

/// Little-endian layout, see docs/checkpoint_format.md.
void write_checkpoint(std::ostream& out, const State& s, const PhysParams& p, double t, std::uint64_t step);
/// Throws std::runtime_error on a bad magic, version, size or truncation.
Checkpoint read_checkpoint(std::istream& in);

// ------------------------------------------------------------ verdicts

/// One measured value against an interval; pass iff it lies inside.
struct Check
{
    std::string name;
    double measured = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;
    bool hi_open = false;

    bool pass() const;
};

struct Verdict
{
    std::string id;
    std::string title;
    bool soft = false;      ///< a failure is reported as a warning
    bool evaluated = true;
    std::string note;
    std::vector<Check> checks;
    nlohmann::json metadata = nlohmann::json::object();

    bool pass() const;
    /// pass | fail | warning | not evaluated
    std::string status() const;
};

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const Verdict& v);

/// Verdict document: {"scenario", "ok", "verdicts": [...], "metadata"}.
nlohmann::json verdict_document(const std::string& scenario, const std::vector<Verdict>& verdicts,
                                const nlohmann::json& metadata);

/// True when every hard verdict was evaluated and passed.
bool all_pass(const std::vector<Verdict>& verdicts);

/// `[PASS] A1  title  (name = value in [lo, hi]; ...)`
std::string summary_line(const Verdict& v);

} // namespace oldroyd::cli
