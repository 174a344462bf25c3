#include "oldroyd/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "oldroyd/spectral.hpp"

namespace oldroyd::cli {

namespace {

ScalarField smooth_random(const Grid& g, std::mt19937_64& rng, double xi0)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Spectrum s(g);
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        if (g.dealias_keep(i) && !g.nyquist(i))
            s[i] = std::exp(-g.xi_norm2(i) / (xi0 * xi0)) * Complex(re, im);
    }
    // The inverse transform keeps the Hermitian part, which is what we want.
    return ScalarField::from_spectrum(s);
}

ScalarField single_mode(const Grid& g, int mode, double phase)
{
    const double k = 2 * std::numbers::pi * mode / g.box_length();
    ScalarField f(g);
    for (std::size_t q = 0; q < g.point_count(); ++q)
        f[q] = std::cos(k * g.coordinate(q, 0) + phase);
    return f;
}

ScalarField gaussian(const Grid& g, double width)
{
    const double c = g.box_length() / 2;
    ScalarField f(g);
    for (std::size_t q = 0; q < g.point_count(); ++q) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double x = g.coordinate(q, a) - c;
            r2 += x * x;
        }
        f[q] = std::exp(-r2 / (2 * width * width));
    }
    return f;
}

double slots_h3(const State& s, const State& base)
{
    const auto a = slots(s);
    const auto b = slots(base);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = diag::sobolev_norm(*a[i] - *b[i], 3);
        sum += x * x;
    }
    return std::sqrt(sum);
}

} // namespace

double perturbation_h3(const State& s, const PhysParams& p)
{
    return slots_h3(s, models::equilibrium(formulation_of(s), grid_of(s), p));
}

void project_zero_momentum(State& s, const PhysParams& p)
{
    const ScalarField rho = models::density(s, p);
    const VectorField v = models::velocity(s, p);
    const double mass = rho.spectrum().mean();
    const double scale = formulation_of(s) == Formulation::cauchy ? DerivedConstants::from(p).alpha : 1.0;
    auto fields = slots(s);
    for (int i = 0; i < v.dim(); ++i) {
        const double shift = (rho * v[i]).spectrum().mean() / mass;
        *fields[1 + static_cast<std::size_t>(i)] -= shift / scale;
    }
}

State initial_data(const InitSpec& spec, Formulation f, const Grid& grid, const PhysParams& p)
{
    if (f == Formulation::effective) {
        models::require_effective_normalisation(p);
        return models::map_state(initial_data(spec, Formulation::torus, grid, p), Formulation::effective, p);
    }
    const State eq = models::equilibrium(f, grid, p);
    const std::string& gen = spec.generator;
    if (gen != "equilibrium" && gen != "single_mode" && gen != "random_smooth" && gen != "localized_gaussian" &&
        gen != "zero_momentum_projected")
        throw std::invalid_argument("initial_data: unknown generator '" + gen + "'");
    if (gen == "equilibrium" || spec.amplitude == 0.0)
        return eq;

    std::mt19937_64 rng(spec.seed);
    State pert = zero_like(eq);
    auto fields = slots(pert);
    if (gen == "single_mode") {
        std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
        for (auto* x : fields)
            *x = single_mode(grid, spec.mode, phase(rng));
    } else if (gen == "localized_gaussian") {
        *fields.front() = gaussian(grid, spec.width > 0 ? spec.width : grid.box_length() / 32);
    } else {
        for (auto* x : fields)
            *x = smooth_random(grid, rng, spec.xi0);
    }
    const double size = slots_h3(pert, zero_like(pert));
    scale(pert, spec.amplitude / size);

    State out = eq;
    axpy(out, 1.0, pert);
    if (gen == "zero_momentum_projected")
        project_zero_momentum(out, p);
    return out;
}

} // namespace oldroyd::cli
