#include "oldroyd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "oldroyd/kernels.hpp"
#include "oldroyd/spectral.hpp"

namespace oldroyd::lp {

namespace {

double h(double t) noexcept { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

bool is_infinite(double x) noexcept { return std::isinf(x) && x > 0; }

void check_lebesgue(double p)
{
    if (p != 2.0 && !is_infinite(p))
        throw std::invalid_argument("besov: unsupported Lebesgue exponent p = " + std::to_string(p) +
                                    " (only 2 and inf)");
}

double sum_l_r(std::span<const double> terms, double r)
{
    if (r == 1.0) {
        double s = 0.0;
        for (double t : terms)
            s += t;
        return s;
    }
    if (r == 2.0) {
        double s = 0.0;
        for (double t : terms)
            s += t * t;
        return std::sqrt(s);
    }
    if (is_infinite(r)) {
        double m = 0.0;
        for (double t : terms)
            m = std::max(m, t);
        return m;
    }
    throw std::invalid_argument("besov: unsupported summation exponent r = " + std::to_string(r));
}

double block_l2_squared(const Spectrum& f, std::span<const DyadicBlockSet::Entry> block)
{
    const Grid& g = f.grid();
    double sum = 0.0;
    for (const auto& e : block)
        sum += g.hermitian_weight(e.index) * e.weight * e.weight * std::norm(f[e.index]);
    const double n = static_cast<double>(g.point_count());
    return g.volume() * sum / (n * n);
}

// Physical samples of block k for every component, then the pointwise
// magnitude's maximum.
double block_linf(const std::vector<Spectrum>& comps, std::span<const double> slot_weights,
                  int k, const DyadicBlockSet& blocks)
{
    const Grid& g = blocks.grid();
    std::vector<double> mag2(g.point_count(), 0.0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const ScalarField part = ScalarField::from_spectrum(blocks.apply(comps[c], k));
        const double w = slot_weights.empty() ? 1.0 : slot_weights[c];
        for (std::size_t i = 0; i < mag2.size(); ++i)
            mag2[i] += w * part[i] * part[i];
    }
    double m = 0.0;
    for (double v : mag2)
        m = std::max(m, v);
    return std::sqrt(m);
}

std::vector<double> block_norms_impl(const std::vector<Spectrum>& comps,
                                     std::span<const double> slot_weights, double p,
                                     const DyadicBlockSet& blocks)
{
    check_lebesgue(p);
    std::vector<double> out;
    for (int k = blocks.k_min(); k <= blocks.k_max(); ++k) {
        if (p == 2.0) {
            double s = 0.0;
            for (std::size_t c = 0; c < comps.size(); ++c)
                s += (slot_weights.empty() ? 1.0 : slot_weights[c]) *
                     block_l2_squared(comps[c], blocks.block(k));
            out.push_back(std::sqrt(s));
        } else {
            out.push_back(block_linf(comps, slot_weights, k, blocks));
        }
    }
    return out;
}

} // namespace

double smooth_step(double x) noexcept
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double a = h(x);
    return a / (a + h(1.0 - x));
}

double chi(double r) noexcept
{
    return 1.0 - smooth_step((r - kRingInner) / (4.0 / 3.0 - kRingInner));
}

double phi(double r) noexcept { return chi(0.5 * r) - chi(r); }

// ------------------------------------------------------------ block set

DyadicBlockSet::DyadicBlockSet(const Grid& grid, int k0) : grid_(grid), k0_(k0)
{
    if (k0 < 1)
        throw std::invalid_argument("build_blocks: k0 must be >= 1");
    const double xi_min = grid.xi_min();
    const double xi_max = grid.xi_max();
    // Smallest k with 4/3 2^k <= xi_min and largest with 3/4 2^{k+1} >= xi_max
    // make the telescoped sum equal to one on every nonzero grid frequency.
    k_min_ = static_cast<int>(std::floor(std::log2(xi_min * kRingInner)));
    k_max_ = static_cast<int>(std::ceil(std::log2(xi_max / kRingInner))) - 1;
    if (k_max_ < k_min_)
        throw std::invalid_argument("build_blocks: grid too coarse to host a dyadic ring");

    blocks_.resize(static_cast<std::size_t>(k_max_ - k_min_ + 1));
    low_.assign(grid.spectral_count(), 0.0);
    for (std::size_t s = 1; s < grid.spectral_count(); ++s) {
        const double r = grid.xi_norm(s);
        for (int k = k_min_; k <= k_max_; ++k) {
            const double w = phi(std::ldexp(r, -k));
            if (w == 0.0)
                continue;
            blocks_[static_cast<std::size_t>(k - k_min_)].push_back({s, w});
            if (k <= k0_)
                low_[s] += w;
        }
    }
}

std::span<const DyadicBlockSet::Entry> DyadicBlockSet::block(int k) const
{
    if (!resolved(k))
        throw std::out_of_range("dyadic block " + std::to_string(k) + " outside resolved range [" +
                                std::to_string(k_min_) + ", " + std::to_string(k_max_) + "]");
    return blocks_[static_cast<std::size_t>(k - k_min_)];
}

double DyadicBlockSet::weight(int k, std::size_t s) const noexcept
{
    return s == 0 ? 0.0 : phi(std::ldexp(grid_.xi_norm(s), -k));
}

Spectrum DyadicBlockSet::apply(const Spectrum& f, int k) const
{
    require_same_grid(f.grid(), grid_, "block_apply");
    Spectrum out(grid_);
    for (const auto& e : block(k))
        out[e.index] = e.weight * f[e.index];
    return out;
}

DyadicBlockSet build_blocks(const Grid& grid, int k0) { return DyadicBlockSet(grid, k0); }

int default_k0(const Grid& grid)
{
    const double band = grid.frequency(grid.n() / 3);
    const int k0 = static_cast<int>(std::lround(std::log2(band / 4.0)));
    return std::max(1, k0);
}

ScalarField block_apply(const ScalarField& f, int k, const DyadicBlockSet& blocks)
{
    return ScalarField::from_spectrum(blocks.apply(f.spectrum(), k));
}

std::pair<ScalarField, ScalarField> low_high_split(const ScalarField& f, const DyadicBlockSet& blocks)
{
    require_same_grid(f.grid(), blocks.grid(), "low_high_split");
    const Spectrum fs = f.spectrum();
    Spectrum low(f.grid());
    Spectrum high(f.grid());
    kernels::for_each_index(fs.size(), [&](std::size_t s) {
        if (s == 0)
            return;
        const double w = blocks.low_weight(s);
        low[s] = w * fs[s];
        high[s] = (1.0 - w) * fs[s];
    });
    return {ScalarField::from_spectrum(low), ScalarField::from_spectrum(high)};
}

// ---------------------------------------------------------------- norms

std::vector<double> block_norms(const ScalarField& f, double p, const DyadicBlockSet& blocks)
{
    require_same_grid(f.grid(), blocks.grid(), "block_norms");
    return block_norms_impl({f.spectrum()}, {}, p, blocks);
}

std::vector<double> block_norms(const VectorField& f, double p, const DyadicBlockSet& blocks)
{
    std::vector<Spectrum> comps;
    for (const auto& c : f.components())
        comps.push_back(c.spectrum());
    return block_norms_impl(comps, {}, p, blocks);
}

std::vector<double> block_norms(const SymTensorField& f, double p, const DyadicBlockSet& blocks)
{
    std::vector<Spectrum> comps;
    std::vector<double> weights;
    for (std::size_t c = 0; c < f.components().size(); ++c) {
        comps.push_back(f.components()[c].spectrum());
        weights.push_back(symmetric_slot_weight(f.dim(), static_cast<int>(c)));
    }
    return block_norms_impl(comps, weights, p, blocks);
}

double combine_block_norms(std::span<const double> norms, const BesovNormSpec& spec,
                           const DyadicBlockSet& blocks)
{
    std::vector<double> terms;
    for (int k = blocks.k_min(); k <= blocks.k_max(); ++k) {
        if (spec.part == Part::low && k > spec.k0)
            continue;
        if (spec.part == Part::high && k <= spec.k0)
            continue;
        terms.push_back(std::exp2(k * spec.s) * norms[static_cast<std::size_t>(k - blocks.k_min())]);
    }
    return sum_l_r(terms, spec.r);
}

double besov_norm(const ScalarField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks)
{
    return combine_block_norms(block_norms(f, spec.p, blocks), spec, blocks);
}

double besov_norm(const VectorField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks)
{
    return combine_block_norms(block_norms(f, spec.p, blocks), spec, blocks);
}

double besov_norm(const SymTensorField& f, const BesovNormSpec& spec, const DyadicBlockSet& blocks)
{
    return combine_block_norms(block_norms(f, spec.p, blocks), spec, blocks);
}

double chemin_lerner_norm(std::span<const ScalarField> series, double dt, const BesovNormSpec& spec,
                          double q, const DyadicBlockSet& blocks)
{
    if (q != 1.0 && !is_infinite(q))
        throw std::invalid_argument("chemin_lerner_norm: q must be 1 or inf");
    if (series.empty() || (q == 1.0 && series.size() < 2))
        throw std::invalid_argument("chemin_lerner_norm: need at least 2 time samples for q = 1");
    if (q == 1.0 && !(dt > 0.0))
        throw std::invalid_argument("chemin_lerner_norm: dt must be positive");

    const auto count = static_cast<std::size_t>(blocks.k_max() - blocks.k_min() + 1);
    std::vector<double> time_norm(count, 0.0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto norms = block_norms(series[i], spec.p, blocks);
        const bool end = i == 0 || i + 1 == series.size();
        for (std::size_t k = 0; k < count; ++k) {
            if (q == 1.0)
                time_norm[k] += (end ? 0.5 : 1.0) * dt * norms[k];
            else
                time_norm[k] = std::max(time_norm[k], norms[k]);
        }
    }
    return combine_block_norms(time_norm, spec, blocks);
}

// ------------------------------------------------------------ paraproduct

BonyParts bony_decompose(const ScalarField& f, const ScalarField& g, const DyadicBlockSet& blocks)
{
    require_same_grid(f.grid(), g.grid(), "bony_decompose");
    require_same_grid(f.grid(), blocks.grid(), "bony_decompose");
    const Grid& grid = f.grid();
    const Spectrum fs = f.spectrum();
    const Spectrum gs = g.spectrum();

    std::vector<ScalarField> df;
    std::vector<ScalarField> dg;
    for (int k = blocks.k_min(); k <= blocks.k_max(); ++k) {
        df.push_back(ScalarField::from_spectrum(blocks.apply(fs, k)));
        dg.push_back(ScalarField::from_spectrum(blocks.apply(gs, k)));
    }
    const std::size_t count = df.size();

    BonyParts out{ScalarField(grid), ScalarField(grid), ScalarField(grid), fs.mean() * gs.mean()};
    // S_{k-1} f = mean(f) + sum_{j <= k-2} Delta_j f on grid frequencies.
    ScalarField sf(grid, fs.mean());
    ScalarField sg(grid, gs.mean());
    for (std::size_t k = 0; k < count; ++k) {
        if (k >= 2) {
            sf += df[k - 2];
            sg += dg[k - 2];
        }
        const std::size_t points = grid.point_count();
        kernels::for_each_index(points, [&](std::size_t i) {
            out.t_fg[i] += sf[i] * dg[k][i];
            out.t_gf[i] += sg[i] * df[k][i];
            double near = dg[k][i];
            if (k > 0)
                near += dg[k - 1][i];
            if (k + 1 < count)
                near += dg[k + 1][i];
            out.remainder[i] += df[k][i] * near;
        });
    }
    out.t_fg = dealias(out.t_fg);
    out.t_gf = dealias(out.t_gf);
    out.remainder = dealias(out.remainder);
    return out;
}

void write_filter_csv(std::ostream& out, const DyadicBlockSet& blocks)
{
    out << "k,xi,weight\n";
    out.precision(17);
    for (int k = blocks.k_min(); k <= blocks.k_max(); ++k) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& e : blocks.block(k))
            rows.emplace_back(blocks.grid().xi_norm(e.index), e.weight);
        std::sort(rows.begin(), rows.end());
        double last = -1.0;
        for (const auto& [xi, w] : rows) {
            if (last >= 0.0 && std::abs(xi - last) <= 1e-12 * xi)
                continue;
            last = xi;
            out << k << ',' << xi << ',' << w << '\n';
        }
    }
}

} // namespace oldroyd::lp
