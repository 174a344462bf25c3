#pragma once

#include "oldroyd/config.hpp"

namespace oldroyd::cli {

/// Equilibrium plus a perturbation of H^3 size spec.amplitude (summed over
/// slots). Generators:
///   equilibrium              the constant state
///   single_mode              cos(2 pi mode x / L + phase) in every slot
///   random_smooth            random phases, spectrum e^{-|xi|^2 / xi0^2}
///   localized_gaussian       Gaussian bump in the first (pressure-like) slot
///   zero_momentum_projected  random_smooth with the mean velocity removed
///                            so that the momentum integral vanishes
/// Effective data are generated as torus data and mapped.
/// Throws std::invalid_argument for unknown generators.
State initial_data(const InitSpec& spec, Formulation f, const Grid& grid, const PhysParams& p);

/// H^3 size of s minus the equilibrium of its formulation, summed over slots.
double perturbation_h3(const State& s, const PhysParams& p);

/// Subtracts the density-weighted mean velocity.
void project_zero_momentum(State& s, const PhysParams& p);

} // namespace oldroyd::cli
