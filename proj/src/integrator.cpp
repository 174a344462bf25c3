#include "oldroyd/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "oldroyd/kernels.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd::integrate {

void IntegratorConfig::validate() const
{
    if (!(dt > 0) || !std::isfinite(dt))
        throw std::invalid_argument("integrator: dt must be positive");
    if (!(t_end >= 0) || !std::isfinite(t_end))
        throw std::invalid_argument("integrator: t_end must be non-negative");
    if (!(cfl_safety > 0 && cfl_safety <= 1))
        throw std::invalid_argument("integrator: cfl_safety must lie in (0, 1]");
    if (record_every < 1)
        throw std::invalid_argument("integrator: record_every must be >= 1");
    if (checkpoint_every < 0)
        throw std::invalid_argument("integrator: checkpoint_every must be >= 0");
}

// ------------------------------------------------------------ propagator

namespace {

// Packed upper-triangle index k is diagonal when it starts a row.
bool is_diagonal_slot(std::size_t k, int dim)
{
    std::size_t start = 0;
    for (int i = 0; i < dim; ++i) {
        if (k == start)
            return true;
        start += static_cast<std::size_t>(dim - i);
    }
    return false;
}

} // namespace

LinearPropagator::LinearPropagator(Formulation f, const Grid& grid, const PhysParams& p, double dt)
    : f_(f), dt_(dt)
{
    if (!(dt > 0))
        throw std::invalid_argument("linear_propagator: dt must be positive");
    const double rho_bar = f == Formulation::effective ? 1.0 : p.rho_bar;
    p_rate_ = p.mu / rho_bar;
    q_rate_ = (p.lambda + 2 * p.mu) / rho_bar;
    damping_ = models::stress_damping(f, p);
    p_mult_.resize(grid.spectral_count());
    q_mult_.resize(grid.spectral_count());
    for (std::size_t s = 0; s < grid.spectral_count(); ++s) {
        const double k2 = grid.xi_norm2(s);
        p_mult_[s] = std::exp(-dt * p_rate_ * k2);
        q_mult_[s] = std::exp(-dt * q_rate_ * k2);
    }
    stress_mult_ = std::exp(-dt * damping_);
    stress_offset_ = p.K * p.eta_bar;
}

void LinearPropagator::apply(State& s) const
{
    if (formulation_of(s) != f_)
        throw std::invalid_argument("linear_propagator: formulation mismatch");
    auto fields = slots(s);
    const Grid& grid = fields.front()->grid();
    const int d = grid.dim();

    const auto vel = velocity_slots(f_, d);
    std::vector<Spectrum> v;
    for (auto i : vel)
        v.push_back(fields[i]->spectrum());
    std::vector<Spectrum> pp;
    std::vector<Spectrum> qq;
    spectral::leray_split(v, &pp, &qq);
    for (std::size_t c = 0; c < vel.size(); ++c) {
        Spectrum out(grid);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = p_mult_[k] * pp[c][k] + q_mult_[k] * qq[c][k];
        *fields[vel[c]] = ScalarField::from_spectrum(out);
    }
    // The primitive stress relaxes towards K eta_bar Id.
    const auto stress = stress_slots(f_, d);
    for (std::size_t k = 0; k < stress.size(); ++k) {
        ScalarField& x = *fields[stress[k]];
        const double shift = f_ == Formulation::primitive && is_diagonal_slot(k, d) ? stress_offset_ : 0.0;
        x -= shift;
        x *= stress_mult_;
        x += shift;
    }
}

std::vector<std::size_t> velocity_slots(Formulation, int dim)
{
    std::vector<std::size_t> out;
    for (int i = 0; i < dim; ++i)
        out.push_back(1 + static_cast<std::size_t>(i));
    return out;
}

std::vector<std::size_t> stress_slots(Formulation f, int dim)
{
    const auto d = static_cast<std::size_t>(dim);
    switch (f) {
    case Formulation::primitive:
    case Formulation::cauchy: {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < d * (d + 1) / 2; ++k)
            out.push_back(1 + d + k);
        return out;
    }
    case Formulation::torus: return {2 + d};
    case Formulation::effective: return {1 + d};
    }
    return {};
}

double signal_speed(Formulation f, const PhysParams& p)
{
    if (f == Formulation::cauchy)
        return DerivedConstants::from(p).alpha1;
    const double dq = p.K * (p.L - 1) + 2 * p.zeta * p.eta_bar;
    const double c2 = (p.gamma * equilibrium_pressure(p) + dq * p.eta_bar) / p.rho_bar;
    return std::sqrt(std::max(c2, 0.0));
}

double cfl_limit(const State& s, const PhysParams& p, double cfl_safety)
{
    const Formulation f = formulation_of(s);
    const auto fields = slots(s);
    const Grid& g = fields.front()->grid();
    double umax = 0.0;
    for (auto i : velocity_slots(f, g.dim()))
        umax = std::max(umax, fields[i]->max_abs());
    const double scale = f == Formulation::cauchy ? DerivedConstants::from(p).alpha : 1.0;
    return cfl_safety * g.dx() / (umax * scale + signal_speed(f, p));
}

void check_admissible(const State& s, const PhysParams& p)
{
    switch (formulation_of(s)) {
    case Formulation::primitive: {
        const double m = std::get<PrimitiveState>(s).rho.min();
        if (!(m > 0))
            throw AdmissibilityError("rho", m, "vacuum: min rho = " + std::to_string(m));
        break;
    }
    case Formulation::cauchy: {
        const auto& c = std::get<CauchyState>(s);
        const double m = models::recover_density_perturbation(c.n, c.eta, p).min() + p.rho_bar;
        if (!(m > 0))
            throw AdmissibilityError("n", m, "vacuum: min rho = " + std::to_string(m));
        break;
    }
    case Formulation::torus: {
        const double m = std::get<TorusState>(s).P.min();
        if (!(m > 0))
            throw AdmissibilityError("P", m, "non-positive pressure: min P = " + std::to_string(m));
        break;
    }
    case Formulation::effective: {
        const double m = std::get<EffectiveState>(s).p.min() + 1.0;
        if (!(m > 0))
            throw AdmissibilityError("p", m, "non-positive pressure: min 1 + p = " + std::to_string(m));
        break;
    }
    }
}

// ------------------------------------------------------------ stepping

namespace {

State nonstiff(const State& s, const PhysParams& p, bool dealias, StepInfo* info)
{
    models::RhsInfo ri;
    State k = models::rhs(s, p, {models::Assembly::nonstiff, dealias}, &ri);
    if (info)
        info->tau_asymmetry = std::max(info->tau_asymmetry, ri.tau_asymmetry);
    return k;
}

void resync(State& s, const PhysParams& p, StepInfo* info)
{
    if (auto* e = std::get_if<EffectiveState>(&s)) {
        const double r = models::resync_effective(*e, p);
        if (info)
            info->consistency_residual = std::max(info->consistency_residual, r);
    }
}

} // namespace

State step(const State& s, const PhysParams& p, const LinearPropagator& prop, bool dealias, StepInfo* info)
{
    const double dt = prop.dt();
    if (info)
        *info = StepInfo{dt, 0.0, 0.0};

    const State k1 = nonstiff(s, p, dealias, info);

    State stage = s;
    axpy(stage, dt, k1);
    prop.apply(stage);
    // The effective pressure is a function of the carried (p, b); stages are
    // rebuilt from them and the drift is reported.
    resync(stage, p, info);
    check_admissible(stage, p);
    const State k2 = nonstiff(stage, p, dealias, info);

    State next = s;
    axpy(next, 0.5 * dt, k1);
    prop.apply(next);
    axpy(next, 0.5 * dt, k2);
    resync(next, p, info);
    check_admissible(next, p);
    return next;
}

RunResult run(State initial, const PhysParams& p, const IntegratorConfig& cfg, const RunSinks& sinks)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Formulation f = formulation_of(initial);
    const Grid grid = grid_of(initial);

    RunResult result;
    result.final_state = std::move(initial);
    State& state = result.final_state;
    check_admissible(state, p);
    if (sinks.on_record)
        sinks.on_record(0.0, state, StepInfo{});

    std::optional<LinearPropagator> prop;
    double t = 0.0;
    long steps = 0;
    try {
        while (t < cfg.t_end * (1 - 1e-12)) {
            double dt = cfg.dt;
            if (cfg.adaptive)
                dt = std::min(dt, cfl_limit(state, p, cfg.cfl_safety));
            double t_next = cfg.adaptive ? t + dt : static_cast<double>(steps + 1) * cfg.dt;
            if (t_next > cfg.t_end * (1 - 1e-12)) {
                t_next = cfg.t_end;
                dt = t_next - t;
            }
            if (!prop || std::abs(prop->dt() - dt) > 1e-14 * dt)
                prop.emplace(f, grid, p, dt);

            StepInfo info;
            try {
                state = step(state, p, *prop, cfg.dealias_every_rhs, &info);
            } catch (AdmissibilityError& e) {
                e.set_time(t);
                throw;
            }
            ++steps;
            t = t_next;
            result.max_tau_asymmetry = std::max(result.max_tau_asymmetry, info.tau_asymmetry);
            result.max_consistency_residual = std::max(result.max_consistency_residual, info.consistency_residual);

            const bool last = t >= cfg.t_end * (1 - 1e-12);
            if ((steps % cfg.record_every == 0 || last) && sinks.on_record)
                sinks.on_record(t, state, info);
            if (cfg.checkpoint_every > 0 && (steps % cfg.checkpoint_every == 0 || last) && sinks.on_checkpoint)
                sinks.on_checkpoint(t, state);
        }
    } catch (const AdmissibilityError& e) {
        result.failed = true;
        result.failure = std::string(e.what()) + " at t = " + std::to_string(e.time());
        result.failure_field = e.field();
    }
    result.t = t;
    result.steps = steps;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace oldroyd::integrate
