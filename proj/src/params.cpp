#include "oldroyd/params.hpp"

#include <cmath>
#include <stdexcept>

namespace oldroyd {

std::array<double, PhysParams::kCount> PhysParams::to_array() const
{
    return {mu, lambda, R, gamma, K, L, zeta, A0, lambda1, rho_bar, eta_bar, epsilon};
}

PhysParams PhysParams::from_array(const std::array<double, kCount>& v)
{
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
}

const std::array<const char*, PhysParams::kCount>& PhysParams::names()
{
    static const std::array<const char*, kCount> n{"mu", "lambda", "R",       "gamma",
                                                    "K",  "L",      "zeta",    "A0",
                                                    "lambda1", "rho_bar", "eta_bar", "epsilon"};
    return n;
}

void PhysParams::validate(int dim) const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("params: requires " + what); };
    for (double v : to_array())
        if (!std::isfinite(v))
            fail("finite values");
    if (!(mu > 0))
        fail("mu > 0");
    if (!(dim * lambda + 2 * mu >= 0))
        fail("d*lambda + 2*mu >= 0");
    if (!(lambda + 2 * mu > 0))
        fail("nu = lambda + 2*mu > 0");
    if (!(R > 0))
        fail("R > 0");
    if (!(gamma > 1))
        fail("gamma > 1");
    if (!(K > 0))
        fail("K > 0");
    if (!(L >= 0))
        fail("L >= 0");
    if (!(zeta >= 0))
        fail("zeta >= 0");
    if (zeta + L == 0)
        fail("ζ + L ≠ 0 (zeta + L != 0)");
    if (!(A0 > 0))
        fail("A0 > 0");
    if (!(lambda1 > 0))
        fail("lambda1 > 0");
    if (!(rho_bar > 0))
        fail("rho_bar > 0");
    if (!(eta_bar > 0))
        fail("eta_bar > 0");
    if (epsilon != 0)
        fail("epsilon = 0 (stress diffusion is not modelled)");
}

DerivedConstants DerivedConstants::from(const PhysParams& p)
{
    DerivedConstants c;
    c.alpha = std::sqrt(1.0 / (p.R * p.gamma * std::pow(p.rho_bar, p.gamma + 1)));
    c.alpha1 = std::sqrt(p.R * p.gamma * std::pow(p.rho_bar, p.gamma - 1));
    c.mu1 = p.mu / p.rho_bar;
    c.mu2 = (p.lambda + p.mu) / p.rho_bar;
    c.nu = p.lambda + 2 * p.mu;
    c.damping = p.A0 / (2 * p.lambda1);
    return c;
}

} // namespace oldroyd
