#pragma once

// Shared helpers for the unit suites: seeded random fields and a direct
// DFT-summation oracle that never touches FFTW or the Grid frequency tables.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "oldroyd/field.hpp"
#include "oldroyd/spectral.hpp"

namespace test_support {

using oldroyd::Grid;
using oldroyd::ScalarField;
using oldroyd::VectorField;

/// Random real field built from modes with every |m_j| <= max_mode.
/// With mean_free the zero mode is dropped.
inline ScalarField random_field(const Grid& g, std::mt19937_64& rng, int max_mode,
                                bool mean_free = false)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    oldroyd::Spectrum s(g);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto m = g.modes(i);
        bool keep = true;
        for (int a = 0; a < g.dim(); ++a)
            keep = keep && std::abs(m[a]) <= max_mode;
        const double re = normal(rng);
        const double im = normal(rng);
        if (keep)
            s[i] = {re, im};
    }
    if (mean_free)
        s[0] = 0.0;
    // Round-trip through physical space to restore Hermitian symmetry.
    ScalarField f = ScalarField::from_spectrum(s);
    const double scale = 1.0 / std::max(f.max_abs(), 1e-300);
    f *= scale;
    return f;
}

inline ScalarField random_full_field(const Grid& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    ScalarField f(g);
    for (auto& v : f.values())
        v = normal(rng);
    return f;
}

inline VectorField random_vector(const Grid& g, std::mt19937_64& rng, int max_mode,
                                 bool mean_free = false)
{
    std::vector<ScalarField> comps;
    for (int a = 0; a < g.dim(); ++a)
        comps.push_back(random_field(g, rng, max_mode, mean_free));
    return VectorField(std::move(comps));
}

inline ScalarField sample(const Grid& g, const std::function<double(const double*)>& fn)
{
    ScalarField f(g);
    double x[3] = {0, 0, 0};
    for (std::size_t p = 0; p < g.point_count(); ++p) {
        for (int a = 0; a < g.dim(); ++a)
            x[a] = g.coordinate(p, a);
        f[p] = fn(x);
    }
    return f;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b)
{
    double m = 0.0;
    for (int c = 0; c < a.dim(); ++c)
        m = std::max(m, max_abs_diff(a[c], b[c]));
    return m;
}

inline double max_abs(const VectorField& v)
{
    double m = 0.0;
    for (const auto& c : v.components())
        m = std::max(m, c.max_abs());
    return m;
}

// ------------------------------------------------------------ DFT oracle

/// Direct O(N^{2d}) evaluation of a Fourier multiplier. `symbol` receives the
/// signed integer modes (range -N/2..N/2-1 on every axis) and the physical
/// frequency vector and returns the complex multiplier for one output
/// component given one input component.
struct DftOracle
{
    const Grid& g;

    std::vector<std::array<int, 3>> all_modes() const
    {
        std::vector<std::array<int, 3>> out;
        const int n = g.n();
        const int nz = g.dim() == 3 ? n : 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < nz; ++k) {
                    std::array<int, 3> m{i - n / 2, j - n / 2, g.dim() == 3 ? k - n / 2 : 0};
                    out.push_back(m);
                }
        return out;
    }

    std::vector<std::complex<double>> coefficients(const ScalarField& f,
                                                   const std::vector<std::array<int, 3>>& modes) const
    {
        std::vector<std::complex<double>> c(modes.size());
        const double two_pi_over_l = 2.0 * std::numbers::pi / g.box_length();
        for (std::size_t m = 0; m < modes.size(); ++m) {
            std::complex<double> acc = 0.0;
            for (std::size_t p = 0; p < g.point_count(); ++p) {
                double phase = 0.0;
                for (int a = 0; a < g.dim(); ++a)
                    phase += two_pi_over_l * modes[m][a] * g.coordinate(p, a);
                acc += f[p] * std::complex<double>(std::cos(phase), -std::sin(phase));
            }
            c[m] = acc / static_cast<double>(g.point_count());
        }
        return c;
    }

    ScalarField synthesize(const std::vector<std::complex<double>>& c,
                           const std::vector<std::array<int, 3>>& modes) const
    {
        ScalarField f(g);
        const double two_pi_over_l = 2.0 * std::numbers::pi / g.box_length();
        for (std::size_t p = 0; p < g.point_count(); ++p) {
            std::complex<double> acc = 0.0;
            for (std::size_t m = 0; m < modes.size(); ++m) {
                double phase = 0.0;
                for (int a = 0; a < g.dim(); ++a)
                    phase += two_pi_over_l * modes[m][a] * g.coordinate(p, a);
                acc += c[m] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            f[p] = acc.real();
        }
        return f;
    }
};

} // namespace test_support
