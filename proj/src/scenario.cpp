#include "oldroyd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "oldroyd/initial_data.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd::cli {

namespace fs = std::filesystem;

std::pair<double, double> fit_window(const RunConfig& c, bool* capped)
{
    const auto& d = c.diagnostics;
    double lo = d.fit_lo >= 0 ? d.fit_lo : c.integrator.t_end / 5;
    double hi = d.fit_hi >= 0 ? d.fit_hi : 4 * c.integrator.t_end / 5;
    bool cap = false;
    if (c.formulation == Formulation::cauchy || c.formulation == Formulation::primitive) {
        const double wrap = diag::wrap_around_time(c.grid(), c.formulation, c.params);
        if (hi > wrap) {
            hi = wrap;
            cap = true;
        }
    }
    if (capped)
        *capped = cap;
    return {lo, hi};
}

std::vector<double> series(const std::vector<diag::EnergyRecord>& records, const std::string& column, int dim,
                           std::span<const diag::LambdaSpec> lambdas)
{
    std::vector<double> out;
    if (column == "h3_u_tau") {
        for (const auto& r : records)
            out.push_back(std::hypot(r.h3_u, r.h3_tau));
        return out;
    }
    const auto cols = csv_columns(dim, lambdas);
    const auto it = std::find(cols.begin(), cols.end(), column);
    if (it == cols.end())
        throw std::invalid_argument("unknown series '" + column + "'");
    const auto k = static_cast<std::size_t>(it - cols.begin());
    for (const auto& r : records) {
        std::vector<double> row{r.t, r.E_inf, r.E_1, r.h3_u, r.h3_tau, r.h3_n, r.h3_eta, r.l2_n, r.l2_u, r.l2_tau, r.mass};
        row.insert(row.end(), r.momentum.begin(), r.momentum.end());
        row.push_back(r.tau_min);
        row.insert(row.end(), r.lambda_beta.begin(), r.lambda_beta.end());
        out.push_back(row[k]);
    }
    return out;
}

namespace {

nlohmann::json run_metadata(const RunConfig& c, const integrate::RunResult& r)
{
    nlohmann::json m;
    m["formulation"] = std::string(to_string(c.formulation));
    m["resolution"] = std::to_string(c.n) + "^" + std::to_string(c.dim);
    m["box_length"] = c.box_length;
    m["dt"] = c.integrator.dt;
    m["adaptive"] = c.integrator.adaptive;
    m["t_end"] = c.integrator.t_end;
    m["t_reached"] = r.t;
    m["steps"] = r.steps;
    m["k0"] = c.effective_k0();
    m["wall_seconds"] = r.wall_seconds;
    m["max_tau_asymmetry"] = r.max_tau_asymmetry;
    m["max_consistency_residual"] = r.max_consistency_residual;
    m["mean_policy"] = default_mean_policy() == MeanPolicy::strict ? "strict" : "annihilate";
    m["config"] = echo_config(c);
    return m;
}

} // namespace

ScenarioResult run_scenario(const RunConfig& config, const ScenarioOptions& opt)
{
    config.validate();
    const fs::path dir = opt.out_dir.empty() ? fs::path(config.output.dir) : opt.out_dir;
    fs::create_directories(dir);
    const std::string& name = config.output.name;
    const std::string prefix = opt.id.empty() ? "" : opt.id + ".";

    ScenarioResult res;
    res.csv_path = dir / (name + ".csv");
    res.verdict_path = dir / (name + ".verdict.json");
    {
        std::ofstream echo(dir / (name + ".config"));
        echo << echo_config(config);
    }

    const Grid grid = config.grid();
    const PhysParams& p = config.params;
    const auto blocks = lp::build_blocks(grid, config.effective_k0());
    const auto& lambdas = config.diagnostics.lambdas;
    const State initial = initial_data(config.init, config.formulation, grid, p);

    std::ofstream csv(res.csv_path);
    CsvWriter writer(csv, config.dim, lambdas);
    integrate::RunSinks sinks;
    sinks.on_record = [&](double t, const State& s, const integrate::StepInfo& info) {
        diag::EnergyRecord r = diag::energy_record(t, s, p, blocks, lambdas);
        r.consistency_residuals["tau_asymmetry"] = info.tau_asymmetry;
        if (config.formulation == Formulation::effective)
            r.consistency_residuals["effective_pressure_drift"] = info.consistency_residual;
        writer.write(r);
        res.records.push_back(std::move(r));
        if (!opt.quiet && config.integrator.t_end > 0) {
            std::fprintf(stderr, "\r%s t = %-10.4g (%.0f%%)", name.c_str(), t, 100 * t / config.integrator.t_end);
            std::fflush(stderr);
        }
    };
    std::uint64_t checkpoint_index = 0;
    sinks.on_checkpoint = [&](double t, const State& s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ".%04llu.ckpt", static_cast<unsigned long long>(checkpoint_index++));
        const fs::path path = dir / (name + buf);
        std::ofstream out(path, std::ios::binary);
        write_checkpoint(out, s, p, t, checkpoint_index - 1);
        res.checkpoints.push_back(path);
    };

    res.run = integrate::run(initial, p, config.integrator, sinks);
    if (!opt.quiet)
        std::fprintf(stderr, "\n");
    const auto& run = res.run;
    const bool done = !run.failed;

    // ---- verdicts
    Verdict completed{prefix + "completed", "integration reached t_end"};
    completed.checks.push_back({"t_reached", run.t, config.integrator.t_end, config.integrator.t_end});
    if (run.failed) {
        completed.note = run.failure;
        completed.metadata["failure_field"] = run.failure_field;
    }
    res.verdicts.push_back(completed);

    const auto& rec = res.records;
    Verdict mass{prefix + "mass", "relative mass drift"};
    Verdict momentum{prefix + "momentum", "momentum drift"};
    if (done && !rec.empty()) {
        double mass_drift = 0.0;
        double mom_drift = 0.0;
        double mom_max = 0.0;
        for (const auto& r : rec) {
            mass_drift = std::max(mass_drift, std::abs(r.mass - rec.front().mass) / std::abs(rec.front().mass));
            for (std::size_t i = 0; i < r.momentum.size(); ++i) {
                mom_drift = std::max(mom_drift, std::abs(r.momentum[i] - rec.front().momentum[i]));
                mom_max = std::max(mom_max, std::abs(r.momentum[i]));
            }
        }
        mass.checks.push_back({"max_relative_drift", mass_drift, 0.0, config.diagnostics.mass_tol, false, true});
        momentum.checks.push_back({"max_drift", mom_drift, 0.0, config.diagnostics.momentum_tol, false, true});
        momentum.metadata["max_abs_momentum"] = mom_max;
    } else {
        mass.evaluated = momentum.evaluated = false;
    }
    res.verdicts.push_back(mass);
    res.verdicts.push_back(momentum);

    if (config.formulation == Formulation::cauchy || config.formulation == Formulation::primitive) {
        Verdict sym{prefix + "tau_symmetry", "stress source stays symmetric"};
        sym.evaluated = done;
        sym.checks.push_back({"max_asymmetry", run.max_tau_asymmetry, 0.0, 1e-12, false, true});
        res.verdicts.push_back(sym);
    }

    if (config.diagnostics.fit_model) {
        Verdict fitv{prefix + "decay_fit", std::string(diag::to_string(*config.diagnostics.fit_model)) +
                                               " fit of " + config.diagnostics.fit_column};
        bool capped = false;
        const auto [lo, hi] = fit_window(config, &capped);
        fitv.metadata["window"] = {lo, hi};
        fitv.metadata["window_capped_at_wrap_around"] = capped;
        if (capped)
            fitv.metadata["wrap_around_time"] = diag::wrap_around_time(grid, config.formulation, p);
        if (!done) {
            fitv.evaluated = false;
            fitv.note = "run failed";
        } else {
            try {
                std::vector<double> t;
                for (const auto& r : rec)
                    t.push_back(r.t);
                const auto y = series(rec, config.diagnostics.fit_column, config.dim, lambdas);
                const auto fit = diag::fit_decay(t, y, *config.diagnostics.fit_model, lo, hi);
                res.fit = fit;
                fitv.checks.push_back({fit.model == diag::DecayModel::algebraic ? "exponent" : "rate",
                                       fit.exponent_or_rate, config.diagnostics.expect_lo,
                                       config.diagnostics.expect_hi});
                fitv.checks.push_back({"r_squared", fit.r_squared, config.diagnostics.r2_min, 1.0});
                fitv.metadata["amplitude"] = fit.amplitude;
                fitv.metadata["samples"] = fit.samples;
                if (config.formulation == Formulation::torus || config.formulation == Formulation::effective) {
                    const auto v = diag::monotonicity_violations(t, y);
                    fitv.metadata["monotonicity_violations"] = v.size();
                    if (!v.empty() && !opt.quiet)
                        std::fprintf(stderr, "note: %s grows after t = 1 at %zu samples (first t = %g)\n",
                                     config.diagnostics.fit_column.c_str(), v.size(), v.front());
                }
            } catch (const std::invalid_argument& e) {
                fitv.evaluated = false;
                fitv.note = e.what();
            }
        }
        res.verdicts.push_back(fitv);
    }

    const nlohmann::json doc = verdict_document(name, res.verdicts, run_metadata(config, run));
    std::ofstream(res.verdict_path) << doc.dump(2) << '\n';
    res.exit_code = !run.failed && all_pass(res.verdicts) ? 0 : 1;
    return res;
}

} // namespace oldroyd::cli
