#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oldroyd/acceptance.hpp"
#include "oldroyd/initial_data.hpp"
#include "oldroyd/io.hpp"
#include "oldroyd/models.hpp"
#include "oldroyd/scenario.hpp"
#include "oldroyd/spectral.hpp"

using namespace oldroyd;
using namespace oldroyd::cli;

namespace {

constexpr double kPi = std::numbers::pi;

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double momentum_norm(const State& s, const PhysParams& p)
{
    const auto q = diag::conserved_quantities(s, p);
    double m = 0.0;
    for (double x : q.momentum)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace

// ------------------------------------------------------------ config

TEST_CASE("config: empty text gives the defaults")
{
    const RunConfig c = parse_config("# nothing but a comment\n\n");
    CHECK(c == RunConfig{});
    CHECK(c.formulation == Formulation::torus);
    CHECK(c.n == 64);
    CHECK(c.effective_k0() == lp::default_k0(c.grid()));
}

TEST_CASE("config: values land in the right fields")
{
    const RunConfig c = parse_config(R"(
model.formulation = cauchy
grid.dim = 3
grid.n = 16        # trailing comment
params.gamma = 1.4
integrator.dt = 0.002
integrator.t_end = 1
lp.k0 = 3
init.generator = single_mode
init.seed = 12345678901
diagnostics.lambdas = 0:nu, 0.5:tau
diagnostics.fit_model = alg
diagnostics.fit_window = 0.2, 0.8
output.name = probe
)");
    CHECK(c.formulation == Formulation::cauchy);
    CHECK(c.dim == 3);
    CHECK(c.n == 16);
    CHECK(c.params.gamma == 1.4);
    CHECK(c.integrator.dt == 0.002);
    CHECK(c.effective_k0() == 3);
    CHECK(c.init.generator == "single_mode");
    CHECK(c.init.seed == 12345678901ull);
    REQUIRE(c.diagnostics.lambdas.size() == 2);
    CHECK(c.diagnostics.lambdas[1].beta == 0.5);
    CHECK(c.diagnostics.lambdas[1].group == diag::Group::tau);
    CHECK(c.diagnostics.fit_model == diag::DecayModel::algebraic);
    CHECK(c.diagnostics.fit_lo == 0.2);
    CHECK(c.diagnostics.fit_hi == 0.8);
    CHECK(c.output.name == "probe");
}

TEST_CASE("config: echo round trip")
{
    RunConfig c;
    c.formulation = Formulation::primitive;
    c.params.gamma = 1.0 / 3.0 + 1.0;
    c.params.lambda = 0.1;
    c.integrator.dt = 1e-3 / 3;
    c.init.amplitude = 0.0123456789012345;
    c.diagnostics.lambdas = {{0.25, diag::Group::nu}};
    c.diagnostics.expect_lo = -0.65;
    c.diagnostics.fit_model = diag::DecayModel::exponential;
    const std::string echo = echo_config(c);
    const RunConfig back = parse_config(echo);
    CHECK(back == c);
    CHECK(back.params == c.params);
    CHECK(back.diagnostics == c.diagnostics);
    CHECK(echo_config(back) == echo);
    // Every key appears in the echo.
    for (const auto& key : config_keys())
        CHECK(echo.find(key + " = ") != std::string::npos);
}

TEST_CASE("config: errors cite the line and the violated constraint")
{
    const std::string gamma = error_of("grid.n = 32\n\nparams.gamma = 0.9\n");
    CHECK(gamma.find("line 3") != std::string::npos);
    CHECK(gamma.find("gamma > 1") != std::string::npos);

    const std::string zl = error_of("params.zeta = 0\nparams.L = 0\n");
    CHECK(zl.find("line 2") != std::string::npos);
    CHECK(zl.find("ζ + L ≠ 0") != std::string::npos);

    const std::string unknown = error_of("grid.n = 32\nparams.viscosity = 1\n");
    CHECK(unknown.find("line 2") != std::string::npos);
    CHECK(unknown.find("unknown key") != std::string::npos);

    CHECK(error_of("grid.n = 32\ngrid.n = 64\n").find("key set twice (first on line 1)") != std::string::npos);
    CHECK(error_of("grid.n = many\n").find("expected an integer") != std::string::npos);
    CHECK(error_of("just words\n").find("line 1") != std::string::npos);
    CHECK(error_of("model.formulation = effective\nparams.rho_bar = 2\n").find("model.formulation") !=
          std::string::npos);
    CHECK(error_of("init.generator = swirl\n").find("unknown generator") != std::string::npos);
    CHECK(error_of("grid.n = 24\ninit.mode = 8\n").find("line 2") != std::string::npos);
    CHECK(error_of("params.epsilon = 0.1\n").find("epsilon") != std::string::npos);
}

// ------------------------------------------------------------ initial data

TEST_CASE("initial data: equilibrium and zero amplitude")
{
    const Grid g(2, 32, 2 * kPi);
    PhysParams p;
    for (Formulation f : {Formulation::primitive, Formulation::cauchy, Formulation::torus, Formulation::effective}) {
        InitSpec eq;
        eq.generator = "equilibrium";
        CHECK(max_abs_difference(initial_data(eq, f, g, p), models::equilibrium(f, g, p)) == 0.0);
        InitSpec zero;
        zero.amplitude = 0.0;
        CHECK(max_abs_difference(initial_data(zero, f, g, p), models::equilibrium(f, g, p)) == 0.0);
    }
}

TEST_CASE("initial data: amplitude, determinism and projected momentum")
{
    const Grid g(2, 32, 2 * kPi);
    const PhysParams p;
    for (const char* gen : {"single_mode", "random_smooth", "localized_gaussian", "zero_momentum_projected"}) {
        CAPTURE(gen);
        for (Formulation f : {Formulation::primitive, Formulation::cauchy, Formulation::torus}) {
            InitSpec spec;
            spec.generator = gen;
            spec.amplitude = 3e-3;
            spec.width = 0.5;
            const State s = initial_data(spec, f, g, p);
            CHECK(max_abs_difference(s, initial_data(spec, f, g, p)) == 0.0);
            if (std::string(gen) != "zero_momentum_projected")
                CHECK(perturbation_h3(s, p) == doctest::Approx(3e-3).epsilon(1e-12));
            else
                CHECK(momentum_norm(s, p) < 1e-14);
        }
    }
    InitSpec other;
    other.seed = 2;
    CHECK(max_abs_difference(initial_data(other, Formulation::torus, g, p),
                             initial_data(InitSpec{}, Formulation::torus, g, p)) > 0.0);
}

TEST_CASE("initial data: effective data are mapped torus data")
{
    const Grid g(2, 32, 2 * kPi);
    const PhysParams p;
    const InitSpec spec;
    const State eff = initial_data(spec, Formulation::effective, g, p);
    const State tor = initial_data(spec, Formulation::torus, g, p);
    CHECK(max_abs_difference(models::map_state(eff, Formulation::torus, p), tor) < 1e-14);
    CHECK(models::effective_residual(std::get<EffectiveState>(eff), p) < 1e-14);
}

// ------------------------------------------------------------ CSV

TEST_CASE("csv: schema and round trip")
{
    const std::vector<diag::LambdaSpec> lambdas{{0.0, diag::Group::nu}, {0.5, diag::Group::tau}};
    const auto cols = csv_columns(3, lambdas);
    CHECK(cols.front() == "t");
    CHECK(std::find(cols.begin(), cols.end(), "momentum_z") != cols.end());
    CHECK(cols[cols.size() - 2] == "lambda0_nu");
    CHECK(cols.back() == "lambda0.5_tau");
    CHECK(csv_columns(2, {}).size() == cols.size() - 3);

    std::vector<diag::EnergyRecord> recs(3);
    for (int i = 0; i < 3; ++i) {
        auto& r = recs[static_cast<std::size_t>(i)];
        r.t = 0.1 * i;
        r.E_inf = 1.0 / 3 + i;
        r.E_1 = 2.0 / 7;
        r.h3_u = 1e-300;
        r.h3_tau = 12345.678901234567;
        r.l2_n = std::numbers::pi;
        r.mass = 8 * kPi * kPi * kPi;
        r.momentum = {1e-17, -2e-16, 3.5};
        r.tau_min = -0.25;
        r.lambda_beta = {0.1 * i, 7.0};
    }
    std::stringstream ss;
    {
        CsvWriter w(ss, 3, lambdas);
        for (const auto& r : recs)
            w.write(r);
    }
    const CsvTable table = read_csv(ss);
    CHECK(table.columns == cols);
    REQUIRE(table.rows.size() == 3);
    std::vector<diag::LambdaSpec> back_lambdas;
    const auto back = records_from_csv(table, &back_lambdas);
    REQUIRE(back.size() == 3);
    REQUIRE(back_lambdas.size() == 2);
    CHECK(back_lambdas[1].beta == 0.5);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].t == recs[i].t);
        CHECK(back[i].E_inf == recs[i].E_inf);
        CHECK(back[i].h3_u == recs[i].h3_u);
        CHECK(back[i].h3_tau == recs[i].h3_tau);
        CHECK(back[i].mass == recs[i].mass);
        CHECK(back[i].momentum == recs[i].momentum);
        CHECK(back[i].lambda_beta == recs[i].lambda_beta);
    }
    CHECK(table.column("tau_min") == std::vector<double>{-0.25, -0.25, -0.25});
    CHECK_THROWS_AS(table.column("nope"), std::out_of_range);

    std::stringstream ragged("t,E_inf\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::runtime_error);
    std::stringstream missing("t,E_inf\n1,2\n");
    CHECK_THROWS_AS(records_from_csv(read_csv(missing)), std::runtime_error);
}

// ------------------------------------------------------------ checkpoints

TEST_CASE("checkpoint: bitwise round trip for every formulation")
{
    PhysParams p;
    p.gamma = 1.4;
    p.lambda = 0.125;
    for (Formulation f : {Formulation::primitive, Formulation::cauchy, Formulation::torus, Formulation::effective}) {
        for (const Grid& g : {Grid(2, 16, 2 * kPi), Grid(3, 8, 3.0)}) {
            CAPTURE(to_string(f));
            PhysParams pf = f == Formulation::effective ? PhysParams{} : p;
            const State s = initial_data(InitSpec{}, f, g, pf);
            std::stringstream ss;
            write_checkpoint(ss, s, pf, 0.75, 42);
            const Checkpoint ck = read_checkpoint(ss);
            CHECK(ck.t == 0.75);
            CHECK(ck.step == 42);
            CHECK(ck.params == pf);
            CHECK(formulation_of(ck.state) == f);
            CHECK(grid_of(ck.state) == g);
            CHECK(max_abs_difference(ck.state, s) == 0.0);
        }
    }
}

TEST_CASE("checkpoint: corrupt input is rejected")
{
    const Grid g(2, 16, 2 * kPi);
    const PhysParams p;
    std::stringstream ss;
    write_checkpoint(ss, models::equilibrium(Formulation::torus, g, p), p, 0.0, 0);
    const std::string bytes = ss.str();

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    std::stringstream a(bad_magic);
    CHECK_THROWS_AS(read_checkpoint(a), std::runtime_error);

    std::stringstream b(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(read_checkpoint(b), std::runtime_error);

    std::string bad_version = bytes;
    bad_version[8] = 9;
    std::stringstream c(bad_version);
    CHECK_THROWS_AS(read_checkpoint(c), std::runtime_error);
}

// ------------------------------------------------------------ verdicts

TEST_CASE("verdicts: checks, statuses and the JSON document")
{
    CHECK(Check{"x", 0.5, 0.0, 1.0}.pass());
    CHECK(Check{"x", 1.0, 0.0, 1.0}.pass());
    CHECK_FALSE(Check{"x", 1.0, 0.0, 1.0, false, true}.pass());
    CHECK_FALSE(Check{"x", 0.0, 0.0, 1.0, true, false}.pass());
    CHECK_FALSE(Check{"x", std::nan(""), 0.0, 1.0}.pass());

    Verdict hard{"A1", "hard"};
    hard.checks.push_back({"x", 2.0, 0.0, 1.0});
    Verdict soft{"A8", "soft", true};
    soft.checks.push_back({"x", 2.0, 0.0, 1.0});
    Verdict skipped{"A9", "skipped"};
    skipped.evaluated = false;
    Verdict good{"A2", "good"};
    good.checks.push_back({"x", 0.5, 0.0, 1.0});

    CHECK(hard.status() == "fail");
    CHECK(soft.status() == "warning");
    CHECK(skipped.status() == "not evaluated");
    CHECK(good.status() == "pass");
    CHECK(all_pass({good, soft}));
    CHECK_FALSE(all_pass({good, hard}));
    CHECK_FALSE(all_pass({good, skipped}));

    CHECK(summary_line(good).starts_with("[PASS] A2"));
    CHECK(summary_line(hard).starts_with("[FAIL] A1"));
    CHECK(summary_line(soft).starts_with("[WARN] A8"));

    const auto doc = verdict_document("probe", {good, soft}, {{"k", 1}});
    CHECK(doc["scenario"] == "probe");
    CHECK(doc["ok"] == true);
    REQUIRE(doc["verdicts"].size() == 2);
    CHECK(doc["verdicts"][1]["status"] == "warning");
    CHECK(doc["verdicts"][0]["checks"][0]["measured"] == 0.5);
    CHECK(doc["metadata"]["k"] == 1);
    // Infinite bounds serialise as null so the document stays valid JSON.
    Verdict open{"A7", "open"};
    open.checks.push_back({"rate", 1.0, 0.0, std::numeric_limits<double>::infinity(), true});
    const auto parsed = nlohmann::json::parse(to_json(open).dump());
    CHECK(parsed["checks"][0]["expected"]["hi"].is_null());
    CHECK(parsed["checks"][0]["expected"]["interval"] == "(0, inf]");
    CHECK(parsed["checks"][0]["expected"]["lo_open"] == true);
}

// ------------------------------------------------------------ scenario runs

TEST_CASE("scenario: deterministic files and exit codes")
{
    const auto dir = std::filesystem::temp_directory_path() / "oldroyd_test_cli";
    std::filesystem::remove_all(dir);
    RunConfig c = parse_config(R"(
grid.n = 16
integrator.dt = 0.01
integrator.t_end = 0.2
integrator.record_every = 2
integrator.checkpoint_every = 10
init.generator = zero_momentum_projected
diagnostics.fit_model = exp
diagnostics.fit_window = 0, 0.2
output.name = first
)");
    const auto a = run_scenario(c, {true, dir, "S"});
    CHECK(a.exit_code == 0);
    CHECK(a.records.size() == 11);
    CHECK(a.checkpoints.size() == 2);
    REQUIRE(a.fit);
    CHECK(a.verdicts.front().id == "S.completed");
    c.output.name = "second";
    const auto b = run_scenario(c, {true, dir, "S"});
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));
    CHECK(parse_config(slurp(dir / "first.config")).output.name == "first");
    const auto doc = nlohmann::json::parse(slurp(a.verdict_path));
    CHECK(doc["ok"] == true);
    CHECK(doc["metadata"]["steps"] == 20);

    std::ifstream ck(a.checkpoints.front(), std::ios::binary);
    CHECK(read_checkpoint(ck).t == doctest::Approx(0.1));

    // An impossible expectation makes the run fail its verdict.
    c.output.name = "third";
    c.diagnostics.expect_lo = 100.0;
    c.diagnostics.expect_hi = 200.0;
    const auto bad = run_scenario(c, {true, dir, ""});
    CHECK(bad.exit_code == 1);
    CHECK(bad.csv_path.filename() == "third.csv");
    std::filesystem::remove_all(dir);
}

TEST_CASE("acceptance: selection by id")
{
    CHECK(primary_criteria().size() == 11);
    CHECK(select_criteria({"all"}).size() == 11);
    CHECK(select_criteria({}).size() == 11);
    const auto two = select_criteria({"A11", "A2"});
    REQUIRE(two.size() == 2);
    CHECK(two[0].id == "A11");
    CHECK_THROWS_AS(select_criteria({"A12"}), std::invalid_argument);
    CHECK(primary_criteria()[7].soft);

    // A throwing criterion becomes a failed verdict rather than an abort.
    const Criterion boom{"X", "boom", false, [](const SuiteOptions&) -> Verdict { throw std::runtime_error("bang"); }};
    const auto v = run_criteria({boom}, {});
    REQUIRE(v.size() == 1);
    CHECK(v[0].status() == "fail");
    CHECK(v[0].note.find("bang") != std::string::npos);
}
