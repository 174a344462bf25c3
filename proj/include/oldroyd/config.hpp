#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oldroyd/diagnostics.hpp"
#include "oldroyd/integrator.hpp"

namespace oldroyd::cli {

struct InitSpec
{
    /// equilibrium | single_mode | random_smooth | localized_gaussian | zero_momentum_projected
    std::string generator = "random_smooth";
    double amplitude = 1e-2; ///< H^3 size of the perturbation
    std::uint64_t seed = 1;
    double xi0 = 4.0;   ///< random_smooth spectrum e^{-|xi|^2 / xi0^2}
    int mode = 1;       ///< single_mode wavenumber index along x
    double width = 0.0; ///< localized_gaussian standard deviation; 0 picks box_length / 32

    friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

struct DiagnosticsSpec
{
    std::vector<diag::LambdaSpec> lambdas;
    /// Column to fit: any CSV column, or h3_u_tau = sqrt(h3_u^2 + h3_tau^2).
    std::string fit_column = "h3_u_tau";
    std::optional<diag::DecayModel> fit_model;
    /// Negative bounds pick the default window [t_end / 5, 4 t_end / 5].
    double fit_lo = -1.0;
    double fit_hi = -1.0;
    /// Verdict interval for the fitted exponent or rate.
    double expect_lo = -std::numeric_limits<double>::infinity();
    double expect_hi = std::numeric_limits<double>::infinity();
    double r2_min = 0.0;
    double mass_tol = 1e-8;     ///< relative
    double momentum_tol = 1e-8; ///< absolute drift of each component

    friend bool operator==(const DiagnosticsSpec& a, const DiagnosticsSpec& b)
    {
        auto key = [](const DiagnosticsSpec& s) {
            std::vector<std::pair<double, int>> l;
            for (const auto& x : s.lambdas)
                l.emplace_back(x.beta, static_cast<int>(x.group));
            return std::tuple(l, s.fit_column, s.fit_model, s.fit_lo, s.fit_hi, s.expect_lo, s.expect_hi, s.r2_min,
                              s.mass_tol, s.momentum_tol);
        };
        return key(a) == key(b);
    }
};

struct OutputSpec
{
    std::string dir = "out";
    std::string name = "run";

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig
{
    Formulation formulation = Formulation::torus;
    int dim = 2;
    int n = 64;
    double box_length = 6.283185307179586;
    PhysParams params;
    integrate::IntegratorConfig integrator;
    int k0 = 0; ///< 0 picks lp::default_k0
    InitSpec init;
    DiagnosticsSpec diagnostics;
    OutputSpec output;

    Grid grid() const { return Grid(dim, n, box_length); }
    int effective_k0() const;
    /// Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

class ConfigError : public std::invalid_argument
{
public:
    ConfigError(std::string key, int line, const std::string& what);

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; } ///< 0 when not tied to a line

private:
    std::string key_;
    int line_;
};

/// Parses `section.key = value` lines ('#' starts a comment). Unknown keys
/// and malformed values are rejected with their line number; the result is
/// validated and constraint violations cite the line that set the key.
RunConfig parse_config(std::string_view text);

/// Every key with its effective value, in a fixed order, such that
/// parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& c);

/// The recognised keys, in echo order.
std::vector<std::string> config_keys();

} // namespace oldroyd::cli
