#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oldroyd/littlewood_paley.hpp"
#include "oldroyd/models.hpp"

namespace oldroyd::diag {

/// sqrt(sum_xi (1 + |xi|^2)^s |f^(xi)|^2) with the Parseval normalisation of
/// l2_norm; s in 0..4.
double sobolev_norm(const ScalarField& f, int s);
double sobolev_norm(const VectorField& f, int s);
double sobolev_norm(const SymTensorField& f, int s);

/// ||Lambda^beta f||_{L^2}; the zero mode counts only for beta = 0.
double lambda_norm(const ScalarField& f, double beta);
double lambda_norm(const VectorField& f, double beta);

using Stress = std::variant<ScalarField, SymTensorField>;

/// Perturbation variables of any formulation in the roles of (n, u, tau, eta):
/// Cauchy is taken as is, primitive through its Cauchy image; torus and
/// effective use the effective pressure alpha_tilde, u, tau and eta - eta_bar.
struct DiagnosticView
{
    ScalarField n;
    VectorField u;
    Stress tau;
    ScalarField eta;
};

DiagnosticView view(const State& s, const PhysParams& p);

struct Energies
{
    double E_inf = 0.0;
    double E_1 = 0.0;
};

/// Sums of homogeneous B^s_{2,1} norms split at blocks.k0():
///   E_inf = |(n,u,eta)|^l_{d/2-1} + |tau|^l_{d/2} + |(Lambda n, u, Lambda tau, Lambda eta)|^h_{d/2+1}
///   E_1   = |(n,u)|^l_{d/2+1} + |tau|^l_{d/2} + |(Lambda n, Lambda tau)|^h_{d/2+1} + |u|^h_{d/2+3}
/// where a tuple norm is the sum of its members.
Energies energy_functionals(const DiagnosticView& v, const lp::DyadicBlockSet& blocks);
Energies energy_functionals(const CauchyState& s, const lp::DyadicBlockSet& blocks);

struct Conserved
{
    double mass = 0.0;
    double eta_mass = 0.0;
    std::vector<double> momentum;
};

/// Spatial integrals vol * mean of rho, eta and rho v.
Conserved conserved_quantities(const State& s, const PhysParams& p);

enum class Group { nu, tau };

std::string_view to_string(Group g) noexcept;
Group parse_group(std::string_view text);

struct LambdaSpec
{
    double beta = 0.0;
    Group group = Group::nu;

    /// `lambda<beta>_<group>`, beta printed with %g.
    std::string column() const;
};

struct EnergyRecord
{
    double t = 0.0;
    double E_inf = 0.0;
    double E_1 = 0.0;
    double h3_u = 0.0;
    double h3_tau = 0.0;
    double h3_n = 0.0;
    double h3_eta = 0.0;
    double l2_n = 0.0;
    double l2_u = 0.0;
    double l2_tau = 0.0;
    std::vector<double> lambda_beta; ///< one per configured LambdaSpec
    double mass = 0.0;
    double eta_mass = 0.0;
    std::vector<double> momentum;
    /// Smallest eigenvalue of tau over the grid (scalar tau: its minimum).
    double tau_min = 0.0;
    std::map<std::string, double> consistency_residuals;
};

EnergyRecord energy_record(double t, const State& s, const PhysParams& p, const lp::DyadicBlockSet& blocks,
                           std::span<const LambdaSpec> lambdas);

enum class DecayModel { algebraic, exponential };

std::string_view to_string(DecayModel m) noexcept;
DecayModel parse_decay_model(std::string_view text); ///< alg|algebraic|exp|exponential

struct DecayFit
{
    double t_lo = 0.0;
    double t_hi = 0.0;
    DecayModel model = DecayModel::exponential;
    /// Algebraic: slope of log y against log(1 + t). Exponential: the rate
    /// c in y = A e^{-c t}.
    double exponent_or_rate = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    int samples = 0;
};

inline constexpr int kMinFitSamples = 10;

/// Unweighted least squares on the log-transformed samples with t in
/// [t_lo, t_hi]. Throws std::invalid_argument on t_lo >= t_hi, fewer than
/// kMinFitSamples points or a non-positive sample in the window.
DecayFit fit_decay(std::span<const double> t, std::span<const double> y, DecayModel model, double t_lo,
                   double t_hi);

/// Predicted algebraic exponent: -(beta + s)/2 for (n, u), -(beta + s - 1)/2
/// for tau. Requires 1 - d/2 < s <= d/2 and -s < beta <= d/2 - 1 (nu) or
/// 1 - s < beta <= d/2 (tau).
double decay_target(int d, double s, double beta, Group group);

/// Time for the fastest linear wave to cross half the box: the last time a
/// periodic run still stands in for the whole space.
double wrap_around_time(const Grid& grid, Formulation f, const PhysParams& p);

/// Times after t_from where the series grows by more than rel_tol relative
/// to the previous sample.
std::vector<double> monotonicity_violations(std::span<const double> t, std::span<const double> y,
                                            double t_from = 1.0, double rel_tol = 1e-3);

} // namespace oldroyd::diag
