#include "oldroyd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "oldroyd/integrator.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd::diag {

namespace {

// sum_xi w(|xi|^2) |f^(xi)|^2 with the normalisation of spectral::l2_norm_squared
template <class Weight>
double weighted_parseval(const ScalarField& f, Weight w)
{
    const Spectrum fh = f.spectrum();
    const Grid& g = f.grid();
    double sum = 0.0;
    for (std::size_t s = 0; s < fh.size(); ++s)
        sum += g.hermitian_weight(s) * w(s, g.xi_norm2(s)) * std::norm(fh[s]);
    const double n = static_cast<double>(g.point_count());
    return g.volume() * sum / (n * n);
}

double sobolev_sq(const ScalarField& f, int s)
{
    if (s < 0 || s > 4)
        throw std::invalid_argument("sobolev_norm: s must lie in 0..4");
    return weighted_parseval(f, [s](std::size_t, double k2) { return std::pow(1.0 + k2, s); });
}

double lambda_sq(const ScalarField& f, double beta)
{
    return weighted_parseval(f, [beta](std::size_t idx, double k2) {
        if (idx == 0)
            return beta == 0.0 ? 1.0 : 0.0;
        return std::pow(k2, beta);
    });
}

SymTensorField lambda_tensor(const SymTensorField& t, double beta)
{
    SymTensorField out = t;
    for (auto& c : out.components())
        c = lambda_power(c, beta, MeanPolicy::annihilate);
    return out;
}

double besov(const auto& f, double s, lp::Part part, const lp::DyadicBlockSet& blocks)
{
    return lp::besov_norm(f, lp::BesovNormSpec{s, 2.0, 1.0, part, blocks.k0()}, blocks);
}

double smallest_eigenvalue(const SymTensorField& t, std::size_t q)
{
    if (t.dim() == 2) {
        const double a = t(0, 0)[q];
        const double b = t(0, 1)[q];
        const double c = t(1, 1)[q];
        return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    }
    // Closed form for symmetric 3 x 3 matrices.
    const double a = t(0, 0)[q], b = t(1, 1)[q], c = t(2, 2)[q];
    const double d = t(0, 1)[q], e = t(1, 2)[q], f = t(0, 2)[q];
    const double p1 = d * d + e * e + f * f;
    const double mean = (a + b + c) / 3;
    const double p2 = (a - mean) * (a - mean) + (b - mean) * (b - mean) + (c - mean) * (c - mean) + 2 * p1;
    if (p2 <= 0)
        return a;
    const double pn = std::sqrt(p2 / 6);
    const double b11 = (a - mean) / pn, b22 = (b - mean) / pn, b33 = (c - mean) / pn;
    const double b12 = d / pn, b23 = e / pn, b13 = f / pn;
    const double det = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) + b13 * (b12 * b23 - b22 * b13);
    const double phi = std::acos(std::clamp(det / 2, -1.0, 1.0)) / 3;
    return mean + 2 * pn * std::cos(phi + 2 * std::numbers::pi / 3);
}

} // namespace

double sobolev_norm(const ScalarField& f, int s) { return std::sqrt(sobolev_sq(f, s)); }

double sobolev_norm(const VectorField& f, int s)
{
    double sum = 0.0;
    for (const auto& c : f.components())
        sum += sobolev_sq(c, s);
    return std::sqrt(sum);
}

double sobolev_norm(const SymTensorField& f, int s)
{
    double sum = 0.0;
    for (int k = 0; k < SymTensorField::slot_count(f.dim()); ++k)
        sum += symmetric_slot_weight(f.dim(), k) * sobolev_sq(f.components()[static_cast<std::size_t>(k)], s);
    return std::sqrt(sum);
}

double lambda_norm(const ScalarField& f, double beta) { return std::sqrt(lambda_sq(f, beta)); }

double lambda_norm(const VectorField& f, double beta)
{
    double sum = 0.0;
    for (const auto& c : f.components())
        sum += lambda_sq(c, beta);
    return std::sqrt(sum);
}

DiagnosticView view(const State& s, const PhysParams& p)
{
    switch (formulation_of(s)) {
    case Formulation::cauchy: {
        const auto& c = std::get<CauchyState>(s);
        return {c.n, c.u, c.tau, c.eta};
    }
    case Formulation::primitive:
        return view(models::map_state(s, Formulation::cauchy, p), p);
    case Formulation::torus: {
        const auto& t = std::get<TorusState>(s);
        ScalarField n = t.P;
        n -= equilibrium_pressure(p);
        n += models::polymer_pressure(t.eta, p);
        n -= models::polymer_pressure(p.eta_bar, p);
        ScalarField eta = t.eta;
        eta -= p.eta_bar;
        return {n, t.u, t.tau, eta};
    }
    case Formulation::effective: {
        const auto& e = std::get<EffectiveState>(s);
        return {e.a_tilde, e.u, e.tau, e.b};
    }
    }
    throw std::logic_error("view: unknown formulation");
}

Energies energy_functionals(const DiagnosticView& v, const lp::DyadicBlockSet& blocks)
{
    using lp::Part;
    const double d = v.u.dim();
    const ScalarField ln = lambda_power(v.n, 1.0, MeanPolicy::annihilate);
    const ScalarField leta = lambda_power(v.eta, 1.0, MeanPolicy::annihilate);

    const auto tau_low = [&](double s) {
        return std::visit([&](const auto& t) { return besov(t, s, Part::low, blocks); }, v.tau);
    };
    const auto ltau_high = [&](double s) {
        return std::visit(
            [&](const auto& t) {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, ScalarField>)
                    return besov(lambda_power(t, 1.0, MeanPolicy::annihilate), s, Part::high, blocks);
                else
                    return besov(lambda_tensor(t, 1.0), s, Part::high, blocks);
            },
            v.tau);
    };

    Energies e;
    e.E_inf = besov(v.n, d / 2 - 1, Part::low, blocks) + besov(v.u, d / 2 - 1, Part::low, blocks) +
              besov(v.eta, d / 2 - 1, Part::low, blocks) + tau_low(d / 2) +
              besov(ln, d / 2 + 1, Part::high, blocks) + besov(v.u, d / 2 + 1, Part::high, blocks) +
              ltau_high(d / 2 + 1) + besov(leta, d / 2 + 1, Part::high, blocks);
    e.E_1 = besov(v.n, d / 2 + 1, Part::low, blocks) + besov(v.u, d / 2 + 1, Part::low, blocks) + tau_low(d / 2) +
            besov(ln, d / 2 + 1, Part::high, blocks) + ltau_high(d / 2 + 1) +
            besov(v.u, d / 2 + 3, Part::high, blocks);
    return e;
}

Energies energy_functionals(const CauchyState& s, const lp::DyadicBlockSet& blocks)
{
    return energy_functionals(DiagnosticView{s.n, s.u, s.tau, s.eta}, blocks);
}

Conserved conserved_quantities(const State& s, const PhysParams& p)
{
    const ScalarField rho = models::density(s, p);
    const VectorField v = models::velocity(s, p);
    const Grid& g = rho.grid();
    const double vol = g.volume();

    ScalarField eta;
    switch (formulation_of(s)) {
    case Formulation::primitive: eta = std::get<PrimitiveState>(s).eta; break;
    case Formulation::cauchy: eta = std::get<CauchyState>(s).eta; break;
    case Formulation::torus: eta = std::get<TorusState>(s).eta; break;
    case Formulation::effective:
        eta = std::get<EffectiveState>(s).b;
        eta += p.eta_bar;
        break;
    }

    Conserved c;
    c.mass = vol * rho.spectrum().mean();
    c.eta_mass = vol * eta.spectrum().mean();
    for (int i = 0; i < v.dim(); ++i)
        c.momentum.push_back(vol * (rho * v[i]).spectrum().mean());
    return c;
}

std::string_view to_string(Group g) noexcept { return g == Group::nu ? "nu" : "tau"; }

Group parse_group(std::string_view text)
{
    if (text == "nu")
        return Group::nu;
    if (text == "tau")
        return Group::tau;
    throw std::invalid_argument("unknown field group '" + std::string(text) + "' (nu|tau)");
}

std::string LambdaSpec::column() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "lambda%g_", beta);
    return buf + std::string(to_string(group));
}

EnergyRecord energy_record(double t, const State& s, const PhysParams& p, const lp::DyadicBlockSet& blocks,
                           std::span<const LambdaSpec> lambdas)
{
    const DiagnosticView v = view(s, p);
    EnergyRecord r;
    r.t = t;
    const Energies e = energy_functionals(v, blocks);
    r.E_inf = e.E_inf;
    r.E_1 = e.E_1;
    r.h3_u = sobolev_norm(v.u, 3);
    r.h3_n = sobolev_norm(v.n, 3);
    r.h3_eta = sobolev_norm(v.eta, 3);
    r.l2_n = l2_norm(v.n);
    r.l2_u = l2_norm(v.u);
    std::visit(
        [&](const auto& tau) {
            r.h3_tau = sobolev_norm(tau, 3);
            r.l2_tau = l2_norm(tau);
        },
        v.tau);

    for (const auto& spec : lambdas) {
        if (spec.group == Group::nu) {
            const double a = lambda_norm(v.n, spec.beta);
            const double b = lambda_norm(v.u, spec.beta);
            r.lambda_beta.push_back(std::sqrt(a * a + b * b));
        } else {
            r.lambda_beta.push_back(std::visit(
                [&](const auto& tau) {
                    using T = std::decay_t<decltype(tau)>;
                    if constexpr (std::is_same_v<T, ScalarField>) {
                        return lambda_norm(tau, spec.beta);
                    } else {
                        double sum = 0.0;
                        for (int k = 0; k < SymTensorField::slot_count(tau.dim()); ++k) {
                            const double x = lambda_norm(tau.components()[static_cast<std::size_t>(k)], spec.beta);
                            sum += symmetric_slot_weight(tau.dim(), k) * x * x;
                        }
                        return std::sqrt(sum);
                    }
                },
                v.tau));
        }
    }

    const Conserved c = conserved_quantities(s, p);
    r.mass = c.mass;
    r.eta_mass = c.eta_mass;
    r.momentum = c.momentum;

    r.tau_min = std::visit(
        [&](const auto& tau) {
            using T = std::decay_t<decltype(tau)>;
            if constexpr (std::is_same_v<T, ScalarField>) {
                return tau.min();
            } else {
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t q = 0; q < tau.components().front().size(); ++q)
                    m = std::min(m, smallest_eigenvalue(tau, q));
                return m;
            }
        },
        v.tau);

    if (const auto* eff = std::get_if<EffectiveState>(&s))
        r.consistency_residuals["effective_pressure"] = models::effective_residual(*eff, p);
    return r;
}

std::string_view to_string(DecayModel m) noexcept
{
    return m == DecayModel::algebraic ? "algebraic" : "exponential";
}

DecayModel parse_decay_model(std::string_view text)
{
    if (text == "alg" || text == "algebraic")
        return DecayModel::algebraic;
    if (text == "exp" || text == "exponential")
        return DecayModel::exponential;
    throw std::invalid_argument("unknown decay model '" + std::string(text) + "' (alg|exp)");
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model, double t_lo,
                   double t_hi)
{
    if (t.size() != y.size())
        throw std::invalid_argument("fit_decay: t and y differ in length");
    if (!(t_lo < t_hi))
        throw std::invalid_argument("fit_decay: window needs t_lo < t_hi");

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi)
            continue;
        if (!(y[i] > 0))
            throw std::invalid_argument("fit_decay: non-positive sample at t = " + std::to_string(t[i]));
        xs.push_back(model == DecayModel::algebraic ? std::log1p(t[i]) : t[i]);
        ys.push_back(std::log(y[i]));
    }
    if (xs.size() < kMinFitSamples)
        throw std::invalid_argument("fit_decay: " + std::to_string(xs.size()) + " samples in window, need at least " +
                                    std::to_string(kMinFitSamples));

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0))
        throw std::invalid_argument("fit_decay: degenerate window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }

    DecayFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.model = model;
    fit.exponent_or_rate = model == DecayModel::algebraic ? slope : -slope;
    fit.amplitude = std::exp(intercept);
    fit.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.samples = static_cast<int>(xs.size());
    return fit;
}

double decay_target(int d, double s, double beta, Group group)
{
    if (d != 2 && d != 3)
        throw std::invalid_argument("decay_target: d must be 2 or 3");
    const double half = d / 2.0;
    if (!(s > 1 - half && s <= half))
        throw std::invalid_argument("decay_target: s outside (1 - d/2, d/2]");
    if (group == Group::nu) {
        if (!(beta > -s && beta <= half - 1))
            throw std::invalid_argument("decay_target: beta outside (-s, d/2 - 1] for (n, u)");
        return -(beta + s) / 2;
    }
    if (!(beta > 1 - s && beta <= half))
        throw std::invalid_argument("decay_target: beta outside (1 - s, d/2] for tau");
    return -(beta + s - 1) / 2;
}

double wrap_around_time(const Grid& grid, Formulation f, const PhysParams& p)
{
    return grid.box_length() / (2 * integrate::signal_speed(f, p));
}

std::vector<double> monotonicity_violations(std::span<const double> t, std::span<const double> y, double t_from,
                                            double rel_tol)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < std::min(t.size(), y.size()); ++i)
        if (t[i - 1] >= t_from && y[i] > y[i - 1] * (1 + rel_tol))
            out.push_back(t[i]);
    return out;
}

} // namespace oldroyd::diag
