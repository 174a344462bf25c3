#pragma once

#include <array>
#include <cmath>
#include <string>

namespace oldroyd {

/// Physical constants of the model. The stress-diffusion coefficient is
/// carried only so configs and checkpoints can state it; it must be 0.
struct PhysParams
{
    double mu = 1.0;      ///< shear viscosity
    double lambda = 0.0;  ///< second viscosity
    double R = 1.0;       ///< P(rho) = R rho^gamma
    double gamma = 2.0;
    double K = 1.0;       ///< polymer pressure q(eta) = K(L-1) eta + zeta eta^2
    double L = 2.0;
    double zeta = 0.5;
    double A0 = 2.0;      ///< relaxation A0 / (2 lambda1)
    double lambda1 = 1.0;
    double rho_bar = 1.0; ///< equilibrium density
    double eta_bar = 1.0; ///< equilibrium polymer density
    double epsilon = 0.0;

    static constexpr int kCount = 12;
    std::array<double, kCount> to_array() const;
    static PhysParams from_array(const std::array<double, kCount>& values);
    static const std::array<const char*, kCount>& names();

    /// Throws std::invalid_argument naming the violated constraint.
    void validate(int dim) const;

    friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

/// Constants of the reformulated system.
struct DerivedConstants
{
    double alpha = 0.0;   ///< sqrt(1 / (R gamma rho_bar^(gamma+1)))
    double alpha1 = 0.0;  ///< sqrt(R gamma rho_bar^(gamma-1))
    double mu1 = 0.0;     ///< mu / rho_bar
    double mu2 = 0.0;     ///< (lambda + mu) / rho_bar
    double nu = 0.0;      ///< lambda + 2 mu
    double damping = 0.0; ///< A0 / (2 lambda1)

    static DerivedConstants from(const PhysParams& p);
};

/// Pressure at the equilibrium density.
inline double equilibrium_pressure(const PhysParams& p) { return p.R * std::pow(p.rho_bar, p.gamma); }

} // namespace oldroyd
