// oldroyd_lab: run configured simulations, the acceptance suite, decay fits
// on existing CSV output and filter-bank dumps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "oldroyd/acceptance.hpp"
#include "oldroyd/scenario.hpp"
#include "oldroyd/spectral.hpp"

using namespace oldroyd;
using namespace oldroyd::cli;

namespace {

int cmd_run(const std::string& path, const std::string& out_dir, bool quiet)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const RunConfig config = parse_config(ss.str());
    const ScenarioResult r = run_scenario(config, {quiet, out_dir, ""});
    for (const auto& v : r.verdicts)
        std::printf("%s\n", summary_line(v).c_str());
    if (r.run.failed)
        std::printf("run stopped: %s\n", r.run.failure.c_str());
    std::printf("csv: %s\nverdict: %s\n", r.csv_path.c_str(), r.verdict_path.c_str());
    return r.exit_code;
}

int cmd_verify(const std::vector<std::string>& suite, const std::string& out_dir, bool quiet)
{
    SuiteOptions opt;
    opt.quiet = quiet;
    if (!out_dir.empty())
        opt.out_dir = out_dir;
    std::vector<std::string> ids = suite;
    if (!ids.empty() && ids.front() == "quick") {
        opt.quick = true;
        ids.erase(ids.begin());
    }
    const auto verdicts = run_criteria(select_criteria(ids), opt, [](const Verdict& v) {
        std::printf("%s\n", summary_line(v).c_str());
        if (!v.note.empty())
            std::printf("       note: %s\n", v.note.c_str());
        std::fflush(stdout);
    });
    std::filesystem::create_directories(opt.out_dir);
    const auto path = opt.out_dir / "acceptance.verdict.json";
    std::ofstream(path) << verdict_document("acceptance", verdicts, {{"quick", opt.quick}}).dump(2) << '\n';
    std::printf("verdict: %s\n", path.c_str());
    return all_pass(verdicts) ? 0 : 1;
}

int cmd_fit(const std::string& path, const std::string& column, const std::string& model,
            const std::vector<double>& window)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open csv '" + path + "'");
    const CsvTable table = read_csv(in);
    std::vector<diag::LambdaSpec> lambdas;
    const auto records = records_from_csv(table, &lambdas);
    std::vector<double> t;
    for (const auto& r : records)
        t.push_back(r.t);
    const int dim = table.has("momentum_z") ? 3 : 2;
    const auto y = series(records, column, dim, lambdas);
    double lo = window.size() == 2 ? window[0] : t.back() / 5;
    double hi = window.size() == 2 ? window[1] : 4 * t.back() / 5;
    const auto fit = diag::fit_decay(t, y, diag::parse_decay_model(model), lo, hi);
    nlohmann::json j;
    j["csv"] = path;
    j["column"] = column;
    j["model"] = std::string(diag::to_string(fit.model));
    j["window"] = {fit.t_lo, fit.t_hi};
    j[fit.model == diag::DecayModel::algebraic ? "exponent" : "rate"] = fit.exponent_or_rate;
    j["amplitude"] = fit.amplitude;
    j["r_squared"] = fit.r_squared;
    j["samples"] = fit.samples;
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
}

int cmd_filters(int dim, int n, double box_length, int k0, const std::string& out)
{
    const Grid g(dim, n, box_length);
    const auto blocks = lp::build_blocks(g, k0 > 0 ? k0 : lp::default_k0(g));
    if (out.empty() || out == "-") {
        lp::write_filter_csv(std::cout, blocks);
    } else {
        std::ofstream f(out);
        lp::write_filter_csv(f, blocks);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"compressible Oldroyd-B pseudo-spectral lab"};
    app.require_subcommand(1);
    std::string out_dir;
    bool quiet = false;
    bool strict_means = false;
    app.add_option("--out-dir", out_dir, "output directory (overrides output.dir)");
    app.add_flag("-q,--quiet", quiet, "no progress on stderr");
    app.add_flag("--strict-means", strict_means, "throw when an inverse operator meets a nonzero mean");

    std::string config_path;
    auto* run = app.add_subcommand("run", "integrate a configured scenario");
    run->add_option("config", config_path, "config file")->required();

    std::vector<std::string> suite;
    auto* verify = app.add_subcommand("verify", "acceptance suite: primary | quick [ids] | ids");
    verify->add_option("suite", suite, "primary (default), quick, or criterion ids such as A1 A7");

    std::string csv_path, column = "h3_u_tau", model = "exp";
    std::vector<double> window;
    auto* fit = app.add_subcommand("fit", "decay fit on a run CSV");
    fit->add_option("csv", csv_path, "run CSV")->required();
    fit->add_option("--column", column, "series to fit (any column or h3_u_tau)");
    fit->add_option("--model", model, "alg | exp")->check(CLI::IsMember({"alg", "algebraic", "exp", "exponential"}));
    fit->add_option("--window", window, "t_lo,t_hi (default [t_end/5, 4 t_end/5])")->delimiter(',')->expected(2);

    int dim = 2, n = 64, k0 = 0;
    double box_length = 2 * std::numbers::pi;
    std::string filter_out;
    auto* filters = app.add_subcommand("filters", "dump the dyadic filter bank as CSV");
    filters->add_option("--dim", dim)->check(CLI::IsMember({2, 3}));
    filters->add_option("--n", n)->check(CLI::PositiveNumber);
    filters->add_option("--box-length", box_length)->check(CLI::PositiveNumber);
    filters->add_option("--k0", k0, "reference block (0 = default)");
    filters->add_option("-o,--output", filter_out, "file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (strict_means)
        set_default_mean_policy(MeanPolicy::strict);

    try {
        if (*run)
            return cmd_run(config_path, out_dir, quiet);
        if (*verify)
            return cmd_verify(suite, out_dir, quiet);
        if (*fit)
            return cmd_fit(csv_path, column, model, window);
        return cmd_filters(dim, n, box_length, k0, filter_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
