#pragma once

#include "oldroyd/params.hpp"
#include "oldroyd/state.hpp"

namespace oldroyd::models {

/// R rho^gamma; throws AdmissibilityError on a non-positive density sample.
ScalarField pressure(const ScalarField& rho, const PhysParams& p);
/// K (L - 1) eta + zeta eta^2
ScalarField polymer_pressure(const ScalarField& eta, const PhysParams& p);
double polymer_pressure(double eta, const PhysParams& p) noexcept;

/// I(a) = (a + rho_bar)^gamma - rho_bar^gamma, k(a) = 1/(a + rho_bar) - 1/rho_bar,
/// J(a) = a / (1 + a).
struct AuxFunctions
{
    ScalarField I;
    ScalarField k;
    ScalarField J;
};

AuxFunctions aux_functions(const ScalarField& a, const PhysParams& p);

/// a = rho - rho_bar from n = R rho^gamma - R rho_bar^gamma + q(eta).
ScalarField recover_density_perturbation(const ScalarField& n, const ScalarField& eta,
                                         const PhysParams& p);

/// `nonstiff` leaves out the terms the integrating factor handles exactly:
/// the viscous operator at the equilibrium density and the linear stress
/// relaxation.
enum class Assembly { full, nonstiff };

struct RhsOptions
{
    Assembly assembly = Assembly::full;
    /// Apply the 2/3 rule to every tendency (products are formed pointwise).
    bool dealias = true;

    RhsOptions() = default;
    RhsOptions(Assembly a, bool d = true) : assembly(a), dealias(d) {}
};

/// Side information collected while assembling a tendency.
struct RhsInfo
{
    /// max |f3_ij - f3_ji| of the full d x d stress source (Cauchy, primitive).
    double tau_asymmetry = 0.0;
    /// max |a_tilde - (p + K(L-1) b + zeta b (b + 2))| on entry (effective).
    double consistency_residual = 0.0;
};

/// Tendencies come back in the same shape as the state.
PrimitiveState rhs_primitive(const PrimitiveState& s, const PhysParams& p,
                             RhsOptions opt = {}, RhsInfo* info = nullptr);
CauchyState rhs_cauchy(const CauchyState& s, const PhysParams& p, RhsOptions opt = {},
                       RhsInfo* info = nullptr);
TorusState rhs_torus(const TorusState& s, const PhysParams& p, RhsOptions opt = {});
EffectiveState rhs_effective(const EffectiveState& s, const PhysParams& p,
                             RhsOptions opt = {}, RhsInfo* info = nullptr);
State rhs(const State& s, const PhysParams& p, RhsOptions opt = {}, RhsInfo* info = nullptr);

/// d/dt (rho v) in divergence form for the primitive system.
VectorField momentum_tendency_conservative(const PrimitiveState& s, const PhysParams& p);

/// Constant equilibrium of each formulation. The Cauchy system is posed
/// around the zero state (no polymer at infinity); the image of the
/// primitive equilibrium, n = q(eta_bar) and eta = eta_bar, is a second
/// constant steady state.
State equilibrium(Formulation f, const Grid& grid, const PhysParams& p);

/// The effective formulation is written for R = rho_bar = eta_bar = 1.
void require_effective_normalisation(const PhysParams& p);

ScalarField effective_pressure(const ScalarField& p_pert, const ScalarField& b, const PhysParams& p);
double effective_residual(const EffectiveState& s, const PhysParams& p);
/// Rebuild a_tilde from the carried (p, b); returns the residual it replaced.
double resync_effective(EffectiveState& s, const PhysParams& p);

struct GoodUnknowns
{
    ScalarField delta; ///< Lambda^-1 div Qu
    ScalarField Gamma; ///< (mu1 + mu2) Lambda n - alpha1 delta
    VectorField G;     ///< Qu - alpha1 / (mu1 + mu2) Delta^-1 grad n
};

GoodUnknowns good_unknowns(const CauchyState& s, const PhysParams& p);
/// Effective analogue: Gamma = nu Lambda a_tilde - delta,
/// G = Qu - (1 / nu) Delta^-1 grad a_tilde.
GoodUnknowns good_unknowns(const EffectiveState& s, const PhysParams& p);

/// primitive <-> cauchy and torus <-> effective; same-kind maps copy.
State map_state(const State& src, Formulation dst, const PhysParams& p);

/// Physical density and velocity of any formulation.
ScalarField density(const State& s, const PhysParams& p);
VectorField velocity(const State& s, const PhysParams& p);

/// Linear relaxation rate of the stress slots.
double stress_damping(Formulation f, const PhysParams& p);

} // namespace oldroyd::models
