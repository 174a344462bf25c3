#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oldroyd/models.hpp"

namespace oldroyd::integrate {

enum class Scheme { imex_rk2 };

struct IntegratorConfig
{
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::imex_rk2;
    /// When adaptive, each step uses min(dt, cfl_safety * dx / signal speed).
    bool adaptive = false;
    double cfl_safety = 0.5;
    bool dealias_every_rhs = true;
    int record_every = 10;
    /// 0 disables checkpoints.
    int checkpoint_every = 0;

    void validate() const;
};

/// Exact propagator e^{dt L} of the stiff linear operator L: viscosity on the
/// velocity (rate mu1 |xi|^2 on Pu, (mu1 + mu2) |xi|^2 on Qu) and relaxation
/// of the stress slots towards their equilibrium value.
class LinearPropagator
{
public:
    LinearPropagator(Formulation f, const Grid& grid, const PhysParams& p, double dt);

    double dt() const noexcept { return dt_; }
    double p_rate() const noexcept { return p_rate_; }
    double q_rate() const noexcept { return q_rate_; }
    double damping() const noexcept { return damping_; }
    /// e^{-dt p_rate |xi_s|^2}, e^{-dt q_rate |xi_s|^2}, e^{-dt damping}
    double p_multiplier(std::size_t s) const noexcept { return p_mult_[s]; }
    double q_multiplier(std::size_t s) const noexcept { return q_mult_[s]; }
    double stress_multiplier() const noexcept { return stress_mult_; }

    void apply(State& s) const;

private:
    Formulation f_;
    double dt_;
    double p_rate_;
    double q_rate_;
    double damping_;
    std::vector<double> p_mult_;
    std::vector<double> q_mult_;
    double stress_mult_;
    double stress_offset_;
};

/// Slot indices (see state slots()) of the velocity and the relaxed stress.
std::vector<std::size_t> velocity_slots(Formulation f, int dim);
std::vector<std::size_t> stress_slots(Formulation f, int dim);

/// Linear wave speed of the pressure coupling at equilibrium, in the
/// formulation's own velocity units.
double signal_speed(Formulation f, const PhysParams& p);
/// cfl_safety * dx / (max|u| * scale + signal speed)
double cfl_limit(const State& s, const PhysParams& p, double cfl_safety);

struct StepInfo
{
    double dt = 0.0;
    double tau_asymmetry = 0.0;         ///< worst over the stage evaluations
    double consistency_residual = 0.0; ///< effective formulation, before resync
};

/// One integrating-factor RK2 (Heun) step:
///   k1 = N(u), u* = E(u + dt k1), u+ = E(u + dt/2 k1) + dt/2 N(u*)
/// where E is the linear propagator and N the non-stiff tendency.
/// Throws AdmissibilityError when a stage leaves the admissible set.
State step(const State& s, const PhysParams& p, const LinearPropagator& prop, bool dealias = true,
           StepInfo* info = nullptr);

/// Minimum of the positivity-constrained field of each formulation
/// (rho, recovered rho, P, 1 + p); throws AdmissibilityError when <= 0.
void check_admissible(const State& s, const PhysParams& p);

struct RunSinks
{
    std::function<void(double t, const State&, const StepInfo&)> on_record;
    std::function<void(double t, const State&)> on_checkpoint;
};

struct RunResult
{
    State final_state;
    double t = 0.0;
    long steps = 0;
    bool failed = false;
    std::string failure;
    std::string failure_field;
    double max_tau_asymmetry = 0.0;
    double max_consistency_residual = 0.0;
    double wall_seconds = 0.0;
};

/// Integrates to t_end, recording at t = 0, every record_every steps and at
/// the final time. Step failures end the run with failed = true; everything
/// recorded so far stays with the sinks.
RunResult run(State initial, const PhysParams& p, const IntegratorConfig& cfg, const RunSinks& sinks = {});

} // namespace oldroyd::integrate
