#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oldroyd/field.hpp"

namespace oldroyd {

enum class Formulation { primitive, cauchy, torus, effective };

std::string_view to_string(Formulation f) noexcept;
/// Throws std::invalid_argument for unknown names.
Formulation parse_formulation(std::string_view name);

/// Density, velocity, extra stress and polymer density.
struct PrimitiveState
{
    ScalarField rho;
    VectorField v;
    SymTensorField sigma;
    ScalarField eta;

    friend bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

/// Reformulated unknowns: n = P(rho) - P(rho_bar) + q(eta), u = v / alpha,
/// tau = sigma - K eta Id. eta is the absolute polymer density.
struct CauchyState
{
    ScalarField n;
    VectorField u;
    SymTensorField tau;
    ScalarField eta;

    friend bool operator==(const CauchyState&, const CauchyState&) = default;
};

/// Periodic system in pressure form with a scalar stress.
struct TorusState
{
    ScalarField P;
    VectorField u;
    ScalarField eta;
    ScalarField tau;

    friend bool operator==(const TorusState&, const TorusState&) = default;
};

/// Effective-pressure system. p = P - 1 and b = eta - 1 are carried so the
/// effective pressure can be rebuilt and checked.
struct EffectiveState
{
    ScalarField a_tilde;
    VectorField u;
    ScalarField tau;
    ScalarField p;
    ScalarField b;

    friend bool operator==(const EffectiveState&, const EffectiveState&) = default;
};

using State = std::variant<PrimitiveState, CauchyState, TorusState, EffectiveState>;

Formulation formulation_of(const State& s) noexcept;
const Grid& grid_of(const State& s);

/// Every scalar component in a fixed order (documented in the checkpoint
/// layout). Velocity components are contiguous.
std::vector<ScalarField*> slots(State& s);
std::vector<const ScalarField*> slots(const State& s);
std::vector<std::string> slot_names(Formulation f, int dim);

/// Zero state of the same formulation and grid.
State zero_like(const State& s);

/// y += a * x, slot by slot.
void axpy(State& y, double a, const State& x);
State& scale(State& s, double a);
double max_abs_difference(const State& a, const State& b);

/// Raised when a field leaves the admissible set (vacuum, non-positive
/// pressure, failed inversion). The integrator stamps the time.
class AdmissibilityError : public std::runtime_error
{
public:
    AdmissibilityError(std::string field, double value, std::string what);

    const std::string& field() const noexcept { return field_; }
    double value() const noexcept { return value_; }
    double time() const noexcept { return time_; }
    void set_time(double t) noexcept { time_ = t; }

private:
    std::string field_;
    double value_;
    double time_ = -1.0;
};

} // namespace oldroyd
