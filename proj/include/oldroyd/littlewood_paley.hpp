#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "oldroyd/field.hpp"

namespace oldroyd::lp {

/// C-infinity step rising from 0 at x <= 0 to 1 at x >= 1.
double smooth_step(double x) noexcept;

/// Low-frequency bump: 1 on [0, 3/4], 0 on [4/3, inf).
double chi(double r) noexcept;

/// Ring bump phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3]. The
/// telescoping construction makes sum_k phi(2^-k r) = 1 exactly for r > 0.
double phi(double r) noexcept;

inline constexpr double kRingInner = 3.0 / 4.0;
inline constexpr double kRingOuter = 8.0 / 3.0;

/// Homogeneous dyadic filter bank resolved on one grid. Blocks k_min..k_max
/// cover every nonzero grid frequency; the zero mode belongs to no block.
/// Immutable after construction.
class DyadicBlockSet
{
public:
    struct Entry
    {
        std::size_t index; ///< spectral index
        double weight;     ///< phi(2^-k |xi|)
    };

    DyadicBlockSet(const Grid& grid, int k0);

    const Grid& grid() const noexcept { return grid_; }
    int k_min() const noexcept { return k_min_; }
    int k_max() const noexcept { return k_max_; }
    int k0() const noexcept { return k0_; }
    bool resolved(int k) const noexcept { return k >= k_min_ && k <= k_max_; }

    /// Nonzero filter entries of block k (throws std::out_of_range).
    std::span<const Entry> block(int k) const;

    /// phi(2^-k |xi_s|) evaluated directly.
    double weight(int k, std::size_t s) const noexcept;

    /// Multiplier of f^l (blocks k <= k0); f^h uses 1 - low on nonzero modes.
    double low_weight(std::size_t s) const noexcept { return low_[s]; }

    Spectrum apply(const Spectrum& f, int k) const;

private:
    Grid grid_;
    int k_min_ = 0;
    int k_max_ = 0;
    int k0_ = 1;
    std::vector<std::vector<Entry>> blocks_;
    std::vector<double> low_;
};

DyadicBlockSet build_blocks(const Grid& grid, int k0);

/// k0 with 2^k0 near a quarter of the dealiased band, clamped to >= 1.
int default_k0(const Grid& grid);

ScalarField block_apply(const ScalarField& f, int k, const DyadicBlockSet& blocks);

/// (f^l, f^h) with f^l + f^h = f - mean(f).
std::pair<ScalarField, ScalarField> low_high_split(const ScalarField& f,
                                                   const DyadicBlockSet& blocks);

enum class Part { full, low, high };

struct BesovNormSpec
{
    double s = 0.0;
    double p = 2.0; ///< 2 or infinity
    double r = 1.0; ///< 1, 2 or infinity
    Part part = Part::full;
    int k0 = 1;
};

/// (||Delta_k f||_{L^p}) for k_min..k_max. Vector and tensor fields use the
/// pointwise Euclidean / Frobenius magnitude.
std::vector<double> block_norms(const ScalarField& f, double p, const DyadicBlockSet& blocks);
std::vector<double> block_norms(const VectorField& f, double p, const DyadicBlockSet& blocks);
std::vector<double> block_norms(const SymTensorField& f, double p, const DyadicBlockSet& blocks);

/// l^r sum of 2^{ks} * norms[k - k_min] restricted to the requested part.
double combine_block_norms(std::span<const double> norms, const BesovNormSpec& spec,
                           const DyadicBlockSet& blocks);

double besov_norm(const ScalarField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks);
double besov_norm(const VectorField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks);
double besov_norm(const SymTensorField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks);

/// Time-L^q per block (trapezoid for q = 1, running max for q = inf) over a
/// uniformly sampled series with spacing dt, then l^r over k.
double chemin_lerner_norm(std::span<const ScalarField> series, double dt, const BesovNormSpec& spec,
                          double q, const DyadicBlockSet& blocks);

/// fg = T_f g + T_g f + R(f, g) + mean(f) mean(g).
/// T_f g = sum_k S_{k-1} f Delta_k g with S_{k-1} carrying the mean, and R
/// sums Delta_k f Delta_k' g over |k - k'| <= 1. All three parts are
/// dealiased.
struct BonyParts
{
    ScalarField t_fg;
    ScalarField t_gf;
    ScalarField remainder;
    double mean_product = 0.0;
};

BonyParts bony_decompose(const ScalarField& f, const ScalarField& g, const DyadicBlockSet& blocks);

/// CSV with header `k,xi,weight`, one row per nonzero (block, |xi|) pair.
void write_filter_csv(std::ostream& out, const DyadicBlockSet& blocks);

} // namespace oldroyd::lp
