#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oldroyd/models.hpp"
#include "oldroyd/spectral.hpp"
#include "test_support.hpp"

using namespace oldroyd;
using test_support::max_abs_diff;
using test_support::random_field;
using test_support::random_vector;
using test_support::sample;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField perturbed(const Grid& g, std::mt19937_64& rng, double base, double amp, int modes = 4)
{
    ScalarField f = random_field(g, rng, modes);
    f *= amp;
    f += base;
    return f;
}

SymTensorField random_tensor(const Grid& g, std::mt19937_64& rng, double amp, double diag = 0.0)
{
    SymTensorField t(g);
    for (auto& c : t.components()) {
        c = random_field(g, rng, 4);
        c *= amp;
    }
    t.add_identity(ScalarField(g, diag));
    return t;
}

PrimitiveState random_primitive(const Grid& g, const PhysParams& p, std::mt19937_64& rng, double amp)
{
    VectorField v = random_vector(g, rng, 4);
    v *= amp;
    return {perturbed(g, rng, p.rho_bar, amp), v, random_tensor(g, rng, amp, p.K * p.eta_bar),
            perturbed(g, rng, p.eta_bar, amp)};
}

TorusState random_torus(const Grid& g, const PhysParams& p, std::mt19937_64& rng, double amp)
{
    VectorField u = random_vector(g, rng, 4);
    u *= amp;
    return {perturbed(g, rng, equilibrium_pressure(p), amp), u, perturbed(g, rng, p.eta_bar, amp),
            perturbed(g, rng, 0.0, amp)};
}

double rel_diff(const ScalarField& a, const ScalarField& b)
{
    return max_abs_diff(a, b) / std::max({a.max_abs(), b.max_abs(), 1e-300});
}

double max_abs(const State& s)
{
    double m = 0.0;
    for (const auto* f : slots(s))
        m = std::max(m, f->max_abs());
    return m;
}

} // namespace

TEST_CASE("params: validation messages and derived constants")
{
    PhysParams p;
    CHECK_NOTHROW(p.validate(2));
    p.gamma = 0.9;
    CHECK_THROWS_WITH_AS(p.validate(2), doctest::Contains("gamma > 1"), std::invalid_argument);
    p = PhysParams{};
    p.zeta = 0;
    p.L = 0;
    CHECK_THROWS_WITH_AS(p.validate(2), doctest::Contains("ζ + L ≠ 0"), std::invalid_argument);
    p = PhysParams{};
    p.lambda = -1.5;
    CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
    p = PhysParams{};
    p.epsilon = 0.1;
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);

    p = PhysParams{};
    p.R = 2.0;
    p.gamma = 1.4;
    p.rho_bar = 1.3;
    const auto c = DerivedConstants::from(p);
    CHECK(c.alpha * p.R * p.gamma * std::pow(p.rho_bar, p.gamma) == doctest::Approx(c.alpha1).epsilon(1e-14));
    CHECK(1.0 / (c.alpha * p.rho_bar) == doctest::Approx(c.alpha1).epsilon(1e-14));
    CHECK(c.damping == 1.0);
    CHECK(PhysParams::from_array(p.to_array()) == p);
}

TEST_CASE("pressure laws and auxiliary functions")
{
    const Grid g(2, 16, 2 * kPi);
    PhysParams p;
    CHECK(models::pressure(ScalarField(g, 1.0), p).max() == 1.0);
    CHECK(models::pressure(ScalarField(g, 2.0), p).min() == 4.0);
    p.zeta = 0;
    CHECK(models::polymer_pressure(ScalarField(g, 1.0), p).max() == 1.0);
    CHECK_THROWS_AS(models::pressure(ScalarField(g, 0.0), p), AdmissibilityError);

    p = PhysParams{};
    auto aux = models::aux_functions(ScalarField(g, 0.0), p);
    CHECK(aux.I.max_abs() == 0.0);
    CHECK(aux.k.max_abs() == 0.0);
    CHECK(aux.J.max_abs() == 0.0);
    aux = models::aux_functions(ScalarField(g, 1.0), p);
    CHECK(aux.I.max() == doctest::Approx(3.0));
    CHECK(aux.k.max() == doctest::Approx(-0.5));
    CHECK(aux.J.max() == doctest::Approx(0.5));
    CHECK_THROWS_AS(models::aux_functions(ScalarField(g, -1.0), p), AdmissibilityError);
}

TEST_CASE("density recovery matches an independent Newton solve")
{
    const Grid g(2, 16, 2 * kPi);
    PhysParams p;
    p.gamma = 1.4;
    p.R = 1.7;
    p.rho_bar = 0.8;
    std::mt19937_64 rng(2);
    const ScalarField n = perturbed(g, rng, models::polymer_pressure(1.0, p), 0.2);
    const ScalarField eta = perturbed(g, rng, 1.0, 0.2);
    const ScalarField a = models::recover_density_perturbation(n, eta, p);
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        const double target = n[i] + p.R * std::pow(p.rho_bar, p.gamma) - p.K * (p.L - 1) * eta[i] -
                              p.zeta * eta[i] * eta[i];
        double rho = p.rho_bar;
        for (int it = 0; it < 50; ++it) {
            const double f = p.R * std::pow(rho, p.gamma) - target;
            const double step = f / (p.R * p.gamma * std::pow(rho, p.gamma - 1));
            rho -= step;
            if (std::abs(step) < 1e-15)
                break;
        }
        CHECK(a[i] == doctest::Approx(rho - p.rho_bar).epsilon(1e-12));
    }
    ScalarField deep = n;
    deep += -10.0;
    CHECK_THROWS_AS(models::recover_density_perturbation(deep, eta, p), AdmissibilityError);
}

TEST_CASE("equilibria are exact fixed points")
{
    const PhysParams p;
    for (const Grid& g : {Grid(2, 32, 2 * kPi), Grid(3, 16, 2 * kPi)})
        for (auto f : {Formulation::primitive, Formulation::cauchy, Formulation::torus, Formulation::effective}) {
            const State eq = models::equilibrium(f, g, p);
            CHECK(max_abs(models::rhs(eq, p)) <= 1e-13);
        }
    // The image of the primitive equilibrium is a second Cauchy steady state.
    const Grid g(2, 32, 2 * kPi);
    const State image = models::map_state(models::equilibrium(Formulation::primitive, g, p), Formulation::cauchy, p);
    CHECK(max_abs(models::rhs(image, p)) <= 1e-13);
}

TEST_CASE("primitive: relaxation source and still density")
{
    const Grid g(2, 32, 2 * kPi);
    const PhysParams p;
    const auto c = DerivedConstants::from(p);
    const PrimitiveState s{ScalarField(g, p.rho_bar), VectorField(g), SymTensorField(g), ScalarField(g, p.eta_bar)};
    const auto t = models::rhs_primitive(s, p);
    CHECK(t.rho.max_abs() == 0.0);
    CHECK(t.sigma(0, 0).min() == doctest::Approx(p.K * c.damping * p.eta_bar).epsilon(1e-14));
    CHECK(t.sigma(1, 1).max() == doctest::Approx(p.K * c.damping * p.eta_bar).epsilon(1e-14));
    CHECK(t.sigma(0, 1).max_abs() == 0.0);
}

TEST_CASE("torus: still fluid relaxes the stress at unit rate")
{
    const Grid g(2, 32, 2 * kPi);
    const PhysParams p;
    std::mt19937_64 rng(4);
    TorusState s = random_torus(g, p, rng, 0.05);
    s.u = VectorField(g);
    const auto t = models::rhs_torus(s, p);
    ScalarField minus_tau = s.tau;
    minus_tau *= -1.0;
    CHECK(max_abs_diff(t.tau, minus_tau) < 1e-15);
}

TEST_CASE("cross-formulation: primitive chain rule reproduces the Cauchy tendencies")
{
    const Grid g(2, 64, 2 * kPi);
    for (double gamma : {2.0, 1.4}) {
        PhysParams p;
        p.gamma = gamma;
        p.lambda = 0.3;
        const auto c = DerivedConstants::from(p);
        std::mt19937_64 rng(7);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const PrimitiveState prim = random_primitive(g, p, rng, 0.01);
            const auto tp = models::rhs_primitive(prim, p);
            const auto mapped = std::get<CauchyState>(models::map_state(prim, Formulation::cauchy, p));
            const auto tc = models::rhs_cauchy(mapped, p);

            ScalarField n_dot(g);
            for (std::size_t i = 0; i < g.point_count(); ++i)
                n_dot[i] = p.R * p.gamma * std::pow(prim.rho[i], p.gamma - 1) * tp.rho[i] +
                           (p.K * (p.L - 1) + 2 * p.zeta * prim.eta[i]) * tp.eta[i];
            worst = std::max(worst, rel_diff(n_dot, tc.n));
            for (int a = 0; a < 2; ++a) {
                ScalarField u_dot = tp.v[a];
                u_dot *= 1.0 / c.alpha;
                worst = std::max(worst, rel_diff(u_dot, tc.u[a]));
            }
            SymTensorField tau_dot = tp.sigma;
            ScalarField k_eta = tp.eta;
            k_eta *= -p.K;
            tau_dot.add_identity(k_eta);
            for (std::size_t s = 0; s < tau_dot.components().size(); ++s)
                worst = std::max(worst, rel_diff(tau_dot.components()[s], tc.tau.components()[s]));
            worst = std::max(worst, rel_diff(tp.eta, tc.eta));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("cross-formulation: torus and effective tendencies agree")
{
    const Grid g(2, 64, 2 * kPi);
    PhysParams p;
    p.lambda = 0.2;
    std::mt19937_64 rng(9);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const TorusState tor = random_torus(g, p, rng, 0.01);
        const auto tt = models::rhs_torus(tor, p);
        const auto eff = std::get<EffectiveState>(models::map_state(tor, Formulation::effective, p));
        const auto te = models::rhs_effective(eff, p);

        ScalarField a_dot(g);
        for (std::size_t i = 0; i < g.point_count(); ++i)
            a_dot[i] = tt.P[i] + (p.K * (p.L - 1) + 2 * p.zeta * tor.eta[i]) * tt.eta[i];
        worst = std::max(worst, rel_diff(a_dot, te.a_tilde));
        worst = std::max(worst, rel_diff(tt.P, te.p));
        worst = std::max(worst, rel_diff(tt.eta, te.b));
        worst = std::max(worst, rel_diff(tt.tau, te.tau));
        for (int a = 0; a < 2; ++a)
            worst = std::max(worst, rel_diff(tt.u[a], te.u[a]));

        // Internal consistency: the a_tilde tendency is the chain rule of the
        // carried (p, b) tendencies.
        ScalarField chain(g);
        for (std::size_t i = 0; i < g.point_count(); ++i)
            chain[i] = te.p[i] + (p.K * (p.L - 1) + 2 * p.zeta * (eff.b[i] + 1)) * te.b[i];
        CHECK(max_abs_diff(chain, te.a_tilde) < 1e-10 * te.a_tilde.max_abs() + 1e-16);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("effective: b = 0 reduces the pressure nonlinearity")
{
    const Grid g(2, 32, 2 * kPi);
    const PhysParams p;
    std::mt19937_64 rng(12);
    VectorField u = random_vector(g, rng, 3);
    u *= 0.02;
    const ScalarField pp = perturbed(g, rng, 0.0, 0.02, 3);
    const EffectiveState s{pp, u, ScalarField(g), pp, ScalarField(g)};
    const auto t = models::rhs_effective(s, p);
    const ScalarField divu = divergence(u);
    const VectorField ga = gradient(pp);
    ScalarField expect(g);
    const double speed2 = p.gamma + 2 * p.zeta + p.K * (p.L - 1);
    for (std::size_t i = 0; i < g.point_count(); ++i)
        expect[i] = -speed2 * divu[i] - (u[0][i] * ga[0][i] + u[1][i] * ga[1][i]) - p.gamma * pp[i] * divu[i];
    CHECK(max_abs_diff(dealias(expect), t.a_tilde) < 1e-14);

    EffectiveState bad = s;
    bad.a_tilde += 1e-6;
    CHECK_THROWS_AS(models::rhs_effective(bad, p), AdmissibilityError);
    PhysParams off = p;
    off.rho_bar = 1.1;
    CHECK_THROWS_AS(models::rhs_effective(s, off), std::invalid_argument);
}

TEST_CASE("stress source symmetry and determinism")
{
    const PhysParams p;
    for (const Grid& g : {Grid(2, 32, 2 * kPi), Grid(3, 16, 2 * kPi)}) {
        std::mt19937_64 rng(13);
        VectorField u = random_vector(g, rng, 4);
        u *= 0.05;
        const CauchyState s{perturbed(g, rng, models::polymer_pressure(p.eta_bar, p), 0.01), u, random_tensor(g, rng, 0.05),
                            perturbed(g, rng, p.eta_bar, 0.01)};
        models::RhsInfo info;
        const auto t1 = models::rhs_cauchy(s, p, models::Assembly::full, &info);
        CHECK(info.tau_asymmetry < 1e-13);
        const auto t2 = models::rhs_cauchy(s, p);
        CHECK(State(t1) == State(t2));
    }
}

TEST_CASE("conservation structure of the tendencies")
{
    const Grid g(2, 64, 2 * kPi);
    const PhysParams p;
    std::mt19937_64 rng(21);
    const PrimitiveState s = random_primitive(g, p, rng, 0.05);
    const auto t = models::rhs_primitive(s, p);
    CHECK(std::abs(t.rho.mean()) < 1e-12);
    CHECK(std::abs(t.eta.mean()) < 1e-12);
    const VectorField m = models::momentum_tendency_conservative(s, p);
    for (int a = 0; a < 2; ++a) {
        CHECK(std::abs(m[a].mean()) < 1e-10);
        // Velocity form recombined: rho v_t + v rho_t.
        ScalarField rv = s.rho * t.v[a];
        rv += s.v[a] * t.rho;
        CHECK(std::abs(rv.mean()) < 1e-10);
        CHECK(max_abs_diff(dealias(rv), m[a]) < 1e-8 * m[a].max_abs());
    }

    const TorusState tor = random_torus(g, p, rng, 0.05);
    const auto tt = models::rhs_torus(tor, p);
    CHECK(std::abs(tt.eta.mean()) < 1e-12);
    CHECK(std::abs(tt.tau.mean() + tor.tau.mean()) < 1e-12);
}

TEST_CASE("nonstiff assembly omits exactly the integrating-factor operator")
{
    const Grid g(2, 32, 2 * kPi);
    PhysParams p;
    p.lambda = 0.4;
    p.A0 = 3.0;
    const auto c = DerivedConstants::from(p);
    std::mt19937_64 rng(25);
    const PrimitiveState prim = random_primitive(g, p, rng, 0.05);
    const State cau = models::map_state(prim, Formulation::cauchy, p);
    const State tor = random_torus(g, p, rng, 0.05);
    const State eff = models::map_state(tor, Formulation::effective, p);
    for (const State& s : {State(prim), cau, tor, eff}) {
        State diff = models::rhs(s, p, models::Assembly::full);
        axpy(diff, -1.0, models::rhs(s, p, models::Assembly::nonstiff));
        const Formulation f = formulation_of(s);
        const double rho_bar = f == Formulation::effective ? 1.0 : p.rho_bar;
        const VectorField vel = f == Formulation::primitive ? prim.v
                                : f == Formulation::cauchy  ? std::get<CauchyState>(s).u
                                : f == Formulation::torus   ? std::get<TorusState>(s).u
                                                            : std::get<EffectiveState>(s).u;
        // mu1 Lap P u + (mu1 + mu2) Lap Q u, built from the projectors.
        VectorField expect = laplacian(leray_P(vel));
        expect *= p.mu / rho_bar;
        VectorField q = laplacian(leray_Q(vel));
        q *= (2 * p.mu + p.lambda) / rho_bar;
        expect += q;
        const auto d_slots = slots(diff);
        for (int a = 0; a < 2; ++a)
            CHECK(max_abs_diff(*d_slots[1 + a], expect[a]) < 1e-12 * expect[a].max_abs());
        // stress slots: -rate * (stress - equilibrium stress); the primitive
        // diagonal relaxes towards K eta_bar.
        const auto s_slots = slots(s);
        const double rate = models::stress_damping(f, p);
        std::vector<std::size_t> stress;
        if (f == Formulation::primitive || f == Formulation::cauchy)
            stress = {3, 4, 5};
        else
            stress = {f == Formulation::torus ? 4u : 3u};
        for (std::size_t k : stress) {
            ScalarField e = *s_slots[k];
            if (f == Formulation::primitive && k != 4)
                e -= p.K * p.eta_bar;
            e *= -rate;
            CHECK(max_abs_diff(*d_slots[k], dealias(e)) < 1e-14);
        }
    }
    CHECK(models::stress_damping(Formulation::cauchy, p) == doctest::Approx(c.damping));
}

TEST_CASE("good unknowns")
{
    const Grid g(2, 32, 2 * kPi);
    PhysParams p;
    p.lambda = 0.5;
    const auto c = DerivedConstants::from(p);

    // Divergence-free u, n = 0.
    std::mt19937_64 rng(31);
    const VectorField solenoidal = leray_P(random_vector(g, rng, 5, true));
    CauchyState s{ScalarField(g), solenoidal, SymTensorField(g), ScalarField(g)};
    auto gu = models::good_unknowns(s, p);
    CHECK(gu.delta.max_abs() < 1e-14);
    CHECK(gu.Gamma.max_abs() < 1e-14);
    CHECK(test_support::max_abs(gu.G) < 1e-14);

    // n = cos x1, u = 0.
    s.u = VectorField(g);
    s.n = sample(g, [](const double* x) { return std::cos(x[0]); });
    gu = models::good_unknowns(s, p);
    const ScalarField sinx = sample(g, [](const double* x) { return std::sin(x[0]); });
    const double coeff = -c.alpha1 / (c.mu1 + c.mu2);
    ScalarField expect = sinx;
    expect *= coeff;
    CHECK(max_abs_diff(gu.G[0], expect) < 1e-14);
    CHECK(gu.G[1].max_abs() < 1e-14);

    // Gamma = (mu1+mu2) Lambda n - alpha1 (Lambda^-1 div G + c Lambda^-1 n).
    VectorField u = random_vector(g, rng, 6);
    u *= 0.1;
    s = CauchyState{random_field(g, rng, 6), u, SymTensorField(g), ScalarField(g)};
    s.n += 0.3;
    gu = models::good_unknowns(s, p);
    const double cc = c.alpha1 / (c.mu1 + c.mu2);
    ScalarField rhs = lambda_power(divergence(gu.G), -1.0, MeanPolicy::annihilate);
    ScalarField ln = lambda_power(s.n, -1.0, MeanPolicy::annihilate);
    ln *= cc;
    rhs += ln;
    rhs *= -c.alpha1;
    ScalarField lam = lambda_power(s.n, 1.0);
    lam *= c.mu1 + c.mu2;
    rhs += lam;
    CHECK(max_abs_diff(rhs, gu.Gamma) < 1e-10 * gu.Gamma.max_abs());

    // Effective analogue at the normalised equilibrium.
    const EffectiveState e{s.n, u, ScalarField(g), s.n, ScalarField(g)};
    const auto ge = models::good_unknowns(e, PhysParams{});
    const double nu = DerivedConstants::from(PhysParams{}).nu;
    VectorField pot = inv_laplacian(gradient(s.n));
    pot *= 1.0 / nu;
    VectorField gt = leray_Q(u);
    gt -= pot;
    CHECK(test_support::max_abs_diff(ge.G, gt) < 1e-14);
}

TEST_CASE("state maps: equilibria and round trips")
{
    const Grid g(2, 32, 2 * kPi);
    PhysParams p;
    p.gamma = 1.4;
    p.rho_bar = 1.2;
    const auto prim_eq = models::equilibrium(Formulation::primitive, g, p);
    const auto cau = std::get<CauchyState>(models::map_state(prim_eq, Formulation::cauchy, p));
    CHECK(cau.n.max() == doctest::Approx(models::polymer_pressure(p.eta_bar, p)).epsilon(1e-13));
    CHECK(cau.n.min() == doctest::Approx(models::polymer_pressure(p.eta_bar, p)).epsilon(1e-13));
    CHECK(test_support::max_abs(cau.u) == 0.0);
    for (const auto& c : cau.tau.components())
        CHECK(c.max_abs() == 0.0);
    CHECK(cau.eta.min() == p.eta_bar);

    const PhysParams unit;
    const TorusState tor_eq{ScalarField(g, 1.0), VectorField(g), ScalarField(g, 1.0), ScalarField(g)};
    CHECK(max_abs(models::map_state(tor_eq, Formulation::effective, unit)) == 0.0);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const State prim = random_primitive(g, p, rng, 0.1);
        const State back = models::map_state(models::map_state(prim, Formulation::cauchy, p),
                                             Formulation::primitive, p);
        CHECK(max_abs_difference(prim, back) < 1e-12);
        const State tor = random_torus(g, unit, rng, 0.1);
        const State tb = models::map_state(models::map_state(tor, Formulation::effective, unit),
                                           Formulation::torus, unit);
        CHECK(max_abs_difference(tor, tb) < 1e-12);
    }
    CHECK_THROWS_AS(models::map_state(prim_eq, Formulation::torus, p), std::invalid_argument);
}
