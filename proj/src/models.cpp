#include "oldroyd/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oldroyd/kernels.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd::models {

namespace {

using Matrix = std::vector<std::vector<ScalarField>>;

std::vector<Spectrum> spectra(const VectorField& v)
{
    std::vector<Spectrum> out;
    for (const auto& c : v.components())
        out.push_back(c.spectrum());
    return out;
}

ScalarField deriv(const Spectrum& s, int axis)
{
    return ScalarField::from_spectrum(spectral::derivative(s, axis));
}

VectorField grad(const Spectrum& s)
{
    std::vector<ScalarField> comps;
    for (int a = 0; a < s.grid().dim(); ++a)
        comps.push_back(deriv(s, a));
    return VectorField(std::move(comps));
}

// (grad u)_ij = d_j u_i
Matrix velocity_gradient(const std::vector<Spectrum>& u)
{
    Matrix g;
    for (const auto& ui : u) {
        std::vector<ScalarField> row;
        for (int j = 0; j < ui.grid().dim(); ++j)
            row.push_back(deriv(ui, j));
        g.push_back(std::move(row));
    }
    return g;
}

ScalarField trace(const Matrix& g)
{
    ScalarField t = g[0][0];
    for (std::size_t i = 1; i < g.size(); ++i)
        t += g[i][i];
    return t;
}

// mu Lap u + m2 grad div u, evaluated spectrally.
VectorField viscous(const std::vector<Spectrum>& u, double mu, double m2)
{
    const Spectrum div = spectral::divergence(u);
    std::vector<ScalarField> comps;
    for (std::size_t i = 0; i < u.size(); ++i) {
        Spectrum s = spectral::laplacian(u[i]);
        s *= mu;
        Spectrum gd = spectral::derivative(div, static_cast<int>(i));
        gd *= m2;
        s += gd;
        comps.push_back(ScalarField::from_spectrum(s));
    }
    return VectorField(std::move(comps));
}

// (div t)_i = sum_j d_j t_ij
VectorField tensor_divergence(const SymTensorField& t)
{
    const int d = t.dim();
    const Grid& g = t.grid();
    std::vector<Spectrum> slot_spec;
    for (const auto& c : t.components())
        slot_spec.push_back(c.spectrum());
    std::vector<ScalarField> comps;
    for (int i = 0; i < d; ++i) {
        Spectrum acc(g);
        for (int j = 0; j < d; ++j)
            acc += spectral::derivative(slot_spec[static_cast<std::size_t>(SymTensorField::slot(d, i, j))], j);
        comps.push_back(ScalarField::from_spectrum(acc));
    }
    return VectorField(std::move(comps));
}

// -div(f u), spectrally from the pointwise flux.
ScalarField neg_flux_divergence(const ScalarField& f, const VectorField& u)
{
    std::vector<Spectrum> flux;
    for (const auto& c : u.components())
        flux.push_back((f * c).spectrum());
    Spectrum d = spectral::divergence(flux);
    d *= -1.0;
    return ScalarField::from_spectrum(d);
}

// sum_j u_j grad_j
ScalarField advect(const VectorField& u, const VectorField& grad_f)
{
    ScalarField out(u.grid());
    const int d = u.dim();
    kernels::for_each_index(out.size(), [&](std::size_t i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
            s += u[j][i] * grad_f[j][i];
        out[i] = s;
    });
    return out;
}

void require_positive(const ScalarField& f, const char* name, const char* what)
{
    const double m = f.min();
    if (!(m > 0))
        throw AdmissibilityError(name, m, std::string(what) + ": min " + name + " = " + std::to_string(m));
}

// Stress source  (grad u) t + t (grad u)^T + c (grad u + grad u^T) - t div u
// assembled as a full d x d array; returns the upper triangle and the largest
// mismatch between mirrored entries.
SymTensorField stress_source(const Matrix& g, const SymTensorField& t, const ScalarField& c,
                             const ScalarField& divu, double* asymmetry)
{
    const int d = t.dim();
    const Grid& grid = t.grid();
    Matrix full(static_cast<std::size_t>(d), std::vector<ScalarField>(static_cast<std::size_t>(d), ScalarField(grid)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ScalarField& out = full[i][j];
            kernels::for_each_index(out.size(), [&](std::size_t p) {
                double s = 0.0;
                for (int k = 0; k < d; ++k)
                    s += g[i][k][p] * t(k, j)[p];
                double s2 = 0.0;
                for (int k = 0; k < d; ++k)
                    s2 += t(i, k)[p] * g[j][k][p];
                out[p] = (s + s2) + c[p] * (g[i][j][p] + g[j][i][p]) - t(i, j)[p] * divu[p];
            });
        }
    double asym = 0.0;
    SymTensorField packed(grid);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            packed(i, j) = full[i][j];
            for (std::size_t p = 0; p < grid.point_count(); ++p)
                asym = std::max(asym, std::abs(full[i][j][p] - full[j][i][p]));
        }
    if (asymmetry)
        *asymmetry = asym;
    return packed;
}

// sum_k t_ik-slot advection: (u . grad) t for every slot
SymTensorField advect_tensor(const VectorField& u, const SymTensorField& t)
{
    SymTensorField out(t.grid());
    for (std::size_t s = 0; s < t.components().size(); ++s)
        out.components()[s] = advect(u, grad(t.components()[s].spectrum()));
    return out;
}

bool full_mode(Assembly m) { return m == Assembly::full; }

} // namespace

// ------------------------------------------------------------ pointwise

ScalarField pressure(const ScalarField& rho, const PhysParams& p)
{
    require_positive(rho, "rho", "pressure: non-positive density");
    ScalarField out(rho.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = p.R * std::pow(rho[i], p.gamma); });
    return out;
}

double polymer_pressure(double eta, const PhysParams& p) noexcept
{
    return p.K * (p.L - 1) * eta + p.zeta * eta * eta;
}

ScalarField polymer_pressure(const ScalarField& eta, const PhysParams& p)
{
    ScalarField out(eta.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = polymer_pressure(eta[i], p); });
    return out;
}

AuxFunctions aux_functions(const ScalarField& a, const PhysParams& p)
{
    ScalarField rho = a;
    rho += p.rho_bar;
    require_positive(rho, "rho", "aux_functions: vacuum (a + rho_bar <= 0)");
    AuxFunctions out{ScalarField(a.grid()), ScalarField(a.grid()), ScalarField(a.grid())};
    const double pb = std::pow(p.rho_bar, p.gamma);
    bool j_ok = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.I[i] = std::pow(a[i] + p.rho_bar, p.gamma) - pb;
        out.k[i] = 1.0 / (a[i] + p.rho_bar) - 1.0 / p.rho_bar;
        j_ok = j_ok && 1.0 + a[i] > 0;
        out.J[i] = a[i] / (1.0 + a[i]);
    }
    if (!j_ok)
        throw AdmissibilityError("rho", a.min(), "aux_functions: J(a) needs 1 + a > 0");
    return out;
}

ScalarField recover_density_perturbation(const ScalarField& n, const ScalarField& eta, const PhysParams& p)
{
    require_same_grid(n.grid(), eta.grid(), "recover_density_perturbation");
    // R rho^gamma = n + R rho_bar^gamma - q(eta) is monotone in rho, so the
    // inversion is the closed-form power.
    const double pb = equilibrium_pressure(p);
    ScalarField a(n.grid());
    double worst = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double target = n[i] + pb - polymer_pressure(eta[i], p);
        worst = std::min(worst, target);
        a[i] = std::pow(target / p.R, 1.0 / p.gamma) - p.rho_bar;
    }
    if (!(worst > 0))
        throw AdmissibilityError("n", worst, "cannot recover density from n: R rho^gamma = " +
                                                  std::to_string(worst) + " <= 0");
    return a;
}

// ------------------------------------------------------------ tendencies

PrimitiveState rhs_primitive(const PrimitiveState& s, const PhysParams& p, RhsOptions opt, RhsInfo* info)
{
    const Grid& g = s.rho.grid();
    const int d = g.dim();
    const auto c = DerivedConstants::from(p);
    require_positive(s.rho, "rho", "rhs_primitive: vacuum");

    const auto v_hat = spectra(s.v);
    const Matrix gv = velocity_gradient(v_hat);
    const ScalarField divv = trace(gv);
    const VectorField visc = viscous(v_hat, p.mu, p.lambda + p.mu);

    // grad of the isotropic part P(rho) + K L eta + zeta eta^2, minus div sigma
    ScalarField iso = pressure(s.rho, p);
    kernels::for_each_index(iso.size(), [&](std::size_t i) {
        iso[i] += p.K * p.L * s.eta[i] + p.zeta * s.eta[i] * s.eta[i];
    });
    const VectorField grad_iso = grad(iso.spectrum());
    const VectorField div_sigma = tensor_divergence(s.sigma);

    PrimitiveState out{neg_flux_divergence(s.rho, s.v), VectorField(g), SymTensorField(g),
                       neg_flux_divergence(s.eta, s.v)};

    for (int i = 0; i < d; ++i) {
        ScalarField& vt = out.v[i];
        const ScalarField adv = advect(s.v, VectorField(gv[static_cast<std::size_t>(i)]));
        kernels::for_each_index(vt.size(), [&](std::size_t q) {
            const double inv_rho = 1.0 / s.rho[q];
            const double visc_w = full_mode(opt.assembly) ? inv_rho : inv_rho - 1.0 / p.rho_bar;
            vt[q] = -adv[q] + visc_w * visc[i][q] + inv_rho * (div_sigma[i][q] - grad_iso[i][q]);
        });
    }

    // sigma: -(v.grad) sigma - sigma div v + grad v sigma + sigma grad v^T
    //        + K A0/(2 lambda1) eta Id - A0/(2 lambda1) sigma
    double asym = 0.0;
    out.sigma = stress_source(gv, s.sigma, ScalarField(g), divv, &asym);
    out.sigma -= advect_tensor(s.v, s.sigma);
    // The split form relaxes sigma - K eta_bar Id exactly, so only the
    // deviation of eta feeds the explicit source.
    ScalarField source = s.eta;
    if (!full_mode(opt.assembly))
        source -= p.eta_bar;
    source *= p.K * c.damping;
    out.sigma.add_identity(source);
    if (full_mode(opt.assembly)) {
        SymTensorField relax = s.sigma;
        relax *= -c.damping;
        out.sigma += relax;
    }
    if (info)
        info->tau_asymmetry = asym;

    if (opt.dealias) {
        out.rho = dealias(out.rho);
        out.v = dealias(out.v);
        out.sigma = dealias(out.sigma);
        out.eta = dealias(out.eta);
    }
    return out;
}

CauchyState rhs_cauchy(const CauchyState& s, const PhysParams& p, RhsOptions opt, RhsInfo* info)
{
    const Grid& g = s.n.grid();
    const int d = g.dim();
    const auto c = DerivedConstants::from(p);
    const double alpha = c.alpha;

    const ScalarField a = recover_density_perturbation(s.n, s.eta, p);
    const AuxFunctions aux = aux_functions(a, p);

    const Spectrum n_hat = s.n.spectrum();
    const auto u_hat = spectra(s.u);
    const Matrix gu = velocity_gradient(u_hat);
    const ScalarField divu = trace(gu);
    const VectorField grad_n = grad(n_hat);
    const VectorField grad_eta = grad(s.eta.spectrum());
    const VectorField lap_u = viscous(u_hat, 1.0, 0.0);
    const VectorField graddiv_u = viscous(u_hat, 0.0, 1.0);
    const VectorField div_tau = tensor_divergence(s.tau);

    CauchyState out{ScalarField(g), VectorField(g), SymTensorField(g), ScalarField(g)};

    // n_t = -alpha1 div u - alpha u.grad n + f1
    // f1  = -alpha R (gamma-1) I(a) div u - alpha n div u - alpha zeta eta^2 div u
    {
        const ScalarField adv = advect(s.u, grad_n);
        kernels::for_each_index(out.n.size(), [&](std::size_t i) {
            const double f1 = -alpha * p.R * (p.gamma - 1) * aux.I[i] * divu[i] -
                              alpha * s.n[i] * divu[i] - alpha * p.zeta * s.eta[i] * s.eta[i] * divu[i];
            out.n[i] = -c.alpha1 * divu[i] - alpha * adv[i] + f1;
        });
    }

    // u_t = mu1 Lap u + mu2 grad div u - alpha1 grad n + alpha1 div tau + f2
    // f2  = -alpha u.grad u + mu k Lap u + (lambda+mu) k grad div u
    //       - (1/alpha) k grad n + (1/alpha) k div tau
    for (int i = 0; i < d; ++i) {
        ScalarField& ut = out.u[i];
        const ScalarField adv = advect(s.u, VectorField(gu[static_cast<std::size_t>(i)]));
        const double stiff = full_mode(opt.assembly) ? 1.0 : 0.0;
        kernels::for_each_index(ut.size(), [&](std::size_t q) {
            const double k = aux.k[q];
            const double f2 = -alpha * adv[q] + p.mu * k * lap_u[i][q] +
                              (p.lambda + p.mu) * k * graddiv_u[i][q] - k * grad_n[i][q] / alpha +
                              k * div_tau[i][q] / alpha;
            ut[q] = stiff * (c.mu1 * lap_u[i][q] + c.mu2 * graddiv_u[i][q]) - c.alpha1 * grad_n[i][q] +
                    c.alpha1 * div_tau[i][q] + f2;
        });
    }

    // tau_t = -alpha u.grad tau - damping tau + f3
    // f3    = alpha (grad u tau + tau grad u^T) + alpha K eta (grad u + grad u^T) - alpha tau div u
    {
        ScalarField k_eta = s.eta;
        k_eta *= p.K;
        double asym = 0.0;
        out.tau = stress_source(gu, s.tau, k_eta, divu, &asym);
        out.tau *= alpha;
        SymTensorField adv = advect_tensor(s.u, s.tau);
        adv *= alpha;
        out.tau -= adv;
        if (full_mode(opt.assembly)) {
            SymTensorField relax = s.tau;
            relax *= -c.damping;
            out.tau += relax;
        }
        if (info)
            info->tau_asymmetry = asym;
    }

    // eta_t = -alpha u.grad eta + f4,  f4 = -alpha eta div u
    {
        const ScalarField adv = advect(s.u, grad_eta);
        kernels::for_each_index(out.eta.size(), [&](std::size_t i) {
            out.eta[i] = -alpha * adv[i] - alpha * s.eta[i] * divu[i];
        });
    }

    if (opt.dealias) {
        out.n = dealias(out.n);
        out.u = dealias(out.u);
        out.tau = dealias(out.tau);
        out.eta = dealias(out.eta);
    }
    return out;
}

TorusState rhs_torus(const TorusState& s, const PhysParams& p, RhsOptions opt)
{
    const Grid& g = s.P.grid();
    const int d = g.dim();
    require_positive(s.P, "P", "rhs_torus: non-positive pressure");

    const auto u_hat = spectra(s.u);
    const Matrix gu = velocity_gradient(u_hat);
    const ScalarField divu = trace(gu);
    const VectorField visc = viscous(u_hat, p.mu, p.lambda + p.mu);

    ScalarField total = s.P; // P + q(eta) - tau
    kernels::for_each_index(total.size(), [&](std::size_t i) {
        total[i] += polymer_pressure(s.eta[i], p) - s.tau[i];
    });
    const VectorField grad_total = grad(total.spectrum());

    TorusState out{neg_flux_divergence(s.P, s.u), VectorField(g), neg_flux_divergence(s.eta, s.u),
                   neg_flux_divergence(s.tau, s.u)};
    kernels::for_each_index(out.P.size(), [&](std::size_t i) {
        out.P[i] -= (p.gamma - 1) * s.P[i] * divu[i];
        if (full_mode(opt.assembly))
            out.tau[i] -= s.tau[i];
    });

    for (int i = 0; i < d; ++i) {
        ScalarField& ut = out.u[i];
        const ScalarField adv = advect(s.u, VectorField(gu[static_cast<std::size_t>(i)]));
        kernels::for_each_index(ut.size(), [&](std::size_t q) {
            const double inv_rho = 1.0 / std::pow(s.P[q] / p.R, 1.0 / p.gamma);
            const double visc_w = full_mode(opt.assembly) ? inv_rho : inv_rho - 1.0 / p.rho_bar;
            ut[q] = -adv[q] + visc_w * visc[i][q] - inv_rho * grad_total[i][q];
        });
    }

    if (opt.dealias) {
        out.P = dealias(out.P);
        out.u = dealias(out.u);
        out.eta = dealias(out.eta);
        out.tau = dealias(out.tau);
    }
    return out;
}

EffectiveState rhs_effective(const EffectiveState& s, const PhysParams& p, RhsOptions opt, RhsInfo* info)
{
    require_effective_normalisation(p);
    const Grid& g = s.a_tilde.grid();
    const int d = g.dim();

    const double residual = effective_residual(s, p);
    if (info)
        info->consistency_residual = residual;
    if (residual > 1e-10)
        throw AdmissibilityError("a_tilde", residual,
                                 "rhs_effective: a_tilde inconsistent with (p, b), residual " +
                                     std::to_string(residual));
    ScalarField P = s.p;
    P += 1.0;
    require_positive(P, "P", "rhs_effective: 1 + p <= 0");
    ScalarField eta = s.b;
    eta += 1.0;
    require_positive(eta, "eta", "rhs_effective: 1 + b <= 0");

    ScalarField a(g);
    kernels::for_each_index(a.size(), [&](std::size_t i) { a[i] = std::pow(P[i], 1.0 / p.gamma) - 1.0; });
    const AuxFunctions aux = aux_functions(a, p);

    const auto u_hat = spectra(s.u);
    const Matrix gu = velocity_gradient(u_hat);
    const ScalarField divu = trace(gu);
    const VectorField visc = viscous(u_hat, p.mu, p.lambda + p.mu);
    const VectorField grad_at = grad(s.a_tilde.spectrum());
    const VectorField grad_tau = grad(s.tau.spectrum());
    const VectorField grad_p = grad(s.p.spectrum());
    const VectorField grad_b = grad(s.b.spectrum());

    EffectiveState out{ScalarField(g), VectorField(g), neg_flux_divergence(s.tau, s.u), ScalarField(g),
                       ScalarField(g)};

    const double kl = p.K * (p.L - 1);
    const double speed2 = p.gamma + 2 * p.zeta + kl;
    const ScalarField adv_at = advect(s.u, grad_at);
    const ScalarField adv_p = advect(s.u, grad_p);
    const ScalarField adv_b = advect(s.u, grad_b);
    kernels::for_each_index(out.a_tilde.size(), [&](std::size_t i) {
        const double b = s.b[i];
        // f2 = -u.grad a - gamma a div u + (gamma-2) zeta b^2 div u
        //      + (2(gamma-2) zeta + K(gamma-1)(L-1)) b div u
        const double f2 = -adv_at[i] - p.gamma * s.a_tilde[i] * divu[i] +
                          (p.gamma - 2) * p.zeta * b * b * divu[i] +
                          (2 * (p.gamma - 2) * p.zeta + p.K * (p.gamma - 1) * (p.L - 1)) * b * divu[i];
        out.a_tilde[i] = -speed2 * divu[i] + f2;
        out.p[i] = -p.gamma * divu[i] - adv_p[i] - p.gamma * s.p[i] * divu[i];
        out.b[i] = -divu[i] - adv_b[i] - b * divu[i];
        if (full_mode(opt.assembly))
            out.tau[i] -= s.tau[i];
    });

    // u_t = mu Lap u + (lambda+mu) grad div u - grad a + f3
    // f3  = -u.grad u + J grad a - J (mu Lap u + (lambda+mu) grad div u) + grad tau / (1 + a)
    for (int i = 0; i < d; ++i) {
        ScalarField& ut = out.u[i];
        const ScalarField adv = advect(s.u, VectorField(gu[static_cast<std::size_t>(i)]));
        const double stiff = full_mode(opt.assembly) ? 1.0 : 0.0;
        kernels::for_each_index(ut.size(), [&](std::size_t q) {
            const double J = aux.J[q];
            const double f3 = -adv[q] + J * grad_at[i][q] - J * visc[i][q] + grad_tau[i][q] / (1.0 + a[q]);
            ut[q] = stiff * visc[i][q] - grad_at[i][q] + f3;
        });
    }

    if (opt.dealias) {
        out.a_tilde = dealias(out.a_tilde);
        out.u = dealias(out.u);
        out.tau = dealias(out.tau);
        out.p = dealias(out.p);
        out.b = dealias(out.b);
    }
    return out;
}

State rhs(const State& s, const PhysParams& p, RhsOptions opt, RhsInfo* info)
{
    switch (formulation_of(s)) {
    case Formulation::primitive: return rhs_primitive(std::get<PrimitiveState>(s), p, opt, info);
    case Formulation::cauchy: return rhs_cauchy(std::get<CauchyState>(s), p, opt, info);
    case Formulation::torus: return rhs_torus(std::get<TorusState>(s), p, opt);
    case Formulation::effective: return rhs_effective(std::get<EffectiveState>(s), p, opt, info);
    }
    throw std::logic_error("rhs: unknown formulation");
}

VectorField momentum_tendency_conservative(const PrimitiveState& s, const PhysParams& p)
{
    const Grid& g = s.rho.grid();
    const int d = g.dim();
    const auto v_hat = spectra(s.v);
    const VectorField visc = viscous(v_hat, p.mu, p.lambda + p.mu);
    ScalarField iso = pressure(s.rho, p);
    kernels::for_each_index(iso.size(), [&](std::size_t i) {
        iso[i] += p.K * p.L * s.eta[i] + p.zeta * s.eta[i] * s.eta[i];
    });
    const VectorField grad_iso = grad(iso.spectrum());
    const VectorField div_sigma = tensor_divergence(s.sigma);
    VectorField out(g);
    for (int i = 0; i < d; ++i) {
        // -div(rho v_i v)
        ScalarField rv = s.rho * s.v[i];
        out[i] = neg_flux_divergence(rv, s.v);
        out[i] += visc[i];
        out[i] += div_sigma[i];
        out[i] -= grad_iso[i];
    }
    return dealias(out);
}

// ------------------------------------------------------------ equilibria

void require_effective_normalisation(const PhysParams& p)
{
    if (p.R != 1.0 || p.rho_bar != 1.0 || p.eta_bar != 1.0)
        throw std::invalid_argument(
            "effective formulation requires R = 1, rho_bar = 1 and eta_bar = 1 (P_bar = 1, b = eta - 1)");
}

State equilibrium(Formulation f, const Grid& grid, const PhysParams& p)
{
    switch (f) {
    case Formulation::primitive: {
        SymTensorField sigma(grid);
        sigma.add_identity(ScalarField(grid, p.K * p.eta_bar));
        return PrimitiveState{ScalarField(grid, p.rho_bar), VectorField(grid), sigma,
                              ScalarField(grid, p.eta_bar)};
    }
    case Formulation::cauchy:
        return CauchyState{ScalarField(grid), VectorField(grid), SymTensorField(grid), ScalarField(grid)};
    case Formulation::torus:
        return TorusState{ScalarField(grid, equilibrium_pressure(p)), VectorField(grid),
                          ScalarField(grid, p.eta_bar), ScalarField(grid)};
    case Formulation::effective:
        require_effective_normalisation(p);
        return EffectiveState{ScalarField(grid), VectorField(grid), ScalarField(grid), ScalarField(grid),
                              ScalarField(grid)};
    }
    throw std::logic_error("equilibrium: unknown formulation");
}

ScalarField effective_pressure(const ScalarField& p_pert, const ScalarField& b, const PhysParams& p)
{
    ScalarField out(b.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) {
        out[i] = p_pert[i] + p.K * (p.L - 1) * b[i] + p.zeta * b[i] * (b[i] + 2);
    });
    return out;
}

double effective_residual(const EffectiveState& s, const PhysParams& p)
{
    const ScalarField rebuilt = effective_pressure(s.p, s.b, p);
    double m = 0.0;
    for (std::size_t i = 0; i < rebuilt.size(); ++i)
        m = std::max(m, std::abs(rebuilt[i] - s.a_tilde[i]));
    return m;
}

double resync_effective(EffectiveState& s, const PhysParams& p)
{
    const double r = effective_residual(s, p);
    s.a_tilde = effective_pressure(s.p, s.b, p);
    return r;
}

// ------------------------------------------------------------ good unknowns

namespace {

GoodUnknowns good_unknowns_impl(const ScalarField& pres, const VectorField& u, double visc, double coupling)
{
    const VectorField qu = leray_Q(u);
    GoodUnknowns out;
    out.delta = lambda_power(divergence(qu), -1.0, MeanPolicy::annihilate);
    out.Gamma = lambda_power(pres, 1.0, MeanPolicy::annihilate);
    out.Gamma *= visc;
    ScalarField d = out.delta;
    d *= coupling;
    out.Gamma -= d;
    VectorField pot = inv_laplacian(gradient(pres), MeanPolicy::annihilate);
    pot *= coupling / visc;
    out.G = qu;
    out.G -= pot;
    return out;
}

} // namespace

GoodUnknowns good_unknowns(const CauchyState& s, const PhysParams& p)
{
    const auto c = DerivedConstants::from(p);
    return good_unknowns_impl(s.n, s.u, c.mu1 + c.mu2, c.alpha1);
}

GoodUnknowns good_unknowns(const EffectiveState& s, const PhysParams& p)
{
    const auto c = DerivedConstants::from(p);
    return good_unknowns_impl(s.a_tilde, s.u, c.nu, 1.0);
}

// ------------------------------------------------------------ maps

namespace {

CauchyState to_cauchy(const PrimitiveState& s, const PhysParams& p)
{
    const auto c = DerivedConstants::from(p);
    ScalarField n = pressure(s.rho, p);
    const double pb = equilibrium_pressure(p);
    kernels::for_each_index(n.size(), [&](std::size_t i) { n[i] += polymer_pressure(s.eta[i], p) - pb; });
    VectorField u = s.v;
    u *= 1.0 / c.alpha;
    SymTensorField tau = s.sigma;
    ScalarField k_eta = s.eta;
    k_eta *= -p.K;
    tau.add_identity(k_eta);
    return {n, u, tau, s.eta};
}

PrimitiveState to_primitive(const CauchyState& s, const PhysParams& p)
{
    const auto c = DerivedConstants::from(p);
    ScalarField rho = recover_density_perturbation(s.n, s.eta, p);
    rho += p.rho_bar;
    VectorField v = s.u;
    v *= c.alpha;
    SymTensorField sigma = s.tau;
    ScalarField k_eta = s.eta;
    k_eta *= p.K;
    sigma.add_identity(k_eta);
    return {rho, v, sigma, s.eta};
}

EffectiveState to_effective(const TorusState& s, const PhysParams& p)
{
    require_effective_normalisation(p);
    require_positive(s.P, "P", "map_state: non-positive pressure");
    ScalarField pp = s.P;
    pp -= 1.0;
    ScalarField b = s.eta;
    b -= 1.0;
    return {effective_pressure(pp, b, p), s.u, s.tau, pp, b};
}

TorusState to_torus(const EffectiveState& s, const PhysParams& p)
{
    require_effective_normalisation(p);
    ScalarField P = s.p;
    P += 1.0;
    require_positive(P, "P", "map_state: non-positive pressure");
    ScalarField eta = s.b;
    eta += 1.0;
    return {P, s.u, eta, s.tau};
}

} // namespace

State map_state(const State& src, Formulation dst, const PhysParams& p)
{
    const Formulation from = formulation_of(src);
    if (from == dst)
        return src;
    if (from == Formulation::primitive && dst == Formulation::cauchy)
        return to_cauchy(std::get<PrimitiveState>(src), p);
    if (from == Formulation::cauchy && dst == Formulation::primitive)
        return to_primitive(std::get<CauchyState>(src), p);
    if (from == Formulation::torus && dst == Formulation::effective)
        return to_effective(std::get<TorusState>(src), p);
    if (from == Formulation::effective && dst == Formulation::torus)
        return to_torus(std::get<EffectiveState>(src), p);
    throw std::invalid_argument("map_state: no map from " + std::string(to_string(from)) + " to " +
                                std::string(to_string(dst)));
}

ScalarField density(const State& s, const PhysParams& p)
{
    switch (formulation_of(s)) {
    case Formulation::primitive: return std::get<PrimitiveState>(s).rho;
    case Formulation::cauchy: {
        const auto& c = std::get<CauchyState>(s);
        ScalarField rho = recover_density_perturbation(c.n, c.eta, p);
        rho += p.rho_bar;
        return rho;
    }
    case Formulation::torus:
    case Formulation::effective: {
        ScalarField P = formulation_of(s) == Formulation::torus ? std::get<TorusState>(s).P
                                                               : std::get<EffectiveState>(s).p;
        if (formulation_of(s) == Formulation::effective)
            P += 1.0;
        require_positive(P, "P", "density: non-positive pressure");
        kernels::for_each_index(P.size(), [&](std::size_t i) { P[i] = std::pow(P[i] / p.R, 1.0 / p.gamma); });
        return P;
    }
    }
    throw std::logic_error("density: unknown formulation");
}

VectorField velocity(const State& s, const PhysParams& p)
{
    switch (formulation_of(s)) {
    case Formulation::primitive: return std::get<PrimitiveState>(s).v;
    case Formulation::cauchy: {
        VectorField v = std::get<CauchyState>(s).u;
        v *= DerivedConstants::from(p).alpha;
        return v;
    }
    case Formulation::torus: return std::get<TorusState>(s).u;
    case Formulation::effective: return std::get<EffectiveState>(s).u;
    }
    throw std::logic_error("velocity: unknown formulation");
}

double stress_damping(Formulation f, const PhysParams& p)
{
    return f == Formulation::primitive || f == Formulation::cauchy ? DerivedConstants::from(p).damping : 1.0;
}

} // namespace oldroyd::models
