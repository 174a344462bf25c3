#include "oldroyd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oldroyd {

Grid::Grid(int dim, int n, double box_length)
    : dim_(dim), n_(n), box_length_(box_length)
{
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("grid: n_per_axis must be even and >= 8, got " +
                                    std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw std::invalid_argument("grid: box_length must be positive");

    point_count_ = 1;
    for (int a = 0; a < dim; ++a)
        point_count_ *= static_cast<std::size_t>(n);
    spectral_count_ = point_count_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(half_n());

    auto tables = std::make_shared<Tables>();
    for (int a = 0; a < dim; ++a)
        tables->xi[a].resize(spectral_count_);
    tables->xi2.resize(spectral_count_);
    tables->xi_abs.resize(spectral_count_);
    tables->weight.resize(spectral_count_);
    tables->flags.resize(spectral_count_);

    for (std::size_t s = 0; s < spectral_count_; ++s) {
        const auto m = modes(s);
        double k2 = 0.0;
        std::uint8_t flags = kKeep;
        for (int a = 0; a < dim; ++a) {
            const double k = frequency(m[a]);
            tables->xi[a][s] = k;
            k2 += k * k;
            if (std::abs(m[a]) == n / 2)
                flags |= kNyquist;
            if (3 * std::abs(m[a]) > n)
                flags &= static_cast<std::uint8_t>(~kKeep);
        }
        tables->xi2[s] = k2;
        tables->xi_abs[s] = std::sqrt(k2);
        tables->flags[s] = flags;
        const int last = m[dim - 1];
        tables->weight[s] = (last == 0 || last == -n / 2) ? 1.0 : 2.0;
    }
    tables_ = std::move(tables);
}

double Grid::volume() const noexcept { return std::pow(box_length_, dim_); }

double Grid::frequency(int mode) const noexcept
{
    return 2.0 * std::numbers::pi * mode / box_length_;
}

std::array<int, 3> Grid::modes(std::size_t s) const noexcept
{
    std::array<int, 3> m{0, 0, 0};
    const auto h = static_cast<std::size_t>(half_n());
    const auto nn = static_cast<std::size_t>(n_);
    const int last = static_cast<int>(s % h);
    m[dim_ - 1] = last == n_ / 2 ? -n_ / 2 : last;
    std::size_t rest = s / h;
    for (int a = dim_ - 2; a >= 0; --a) {
        m[a] = mode_of_index(static_cast<int>(rest % nn));
        rest /= nn;
    }
    return m;
}

double Grid::xi_max() const noexcept
{
    return std::sqrt(static_cast<double>(dim_)) * frequency(n_ / 2);
}

double Grid::coordinate(std::size_t point, int axis) const noexcept
{
    const auto nn = static_cast<std::size_t>(n_);
    std::size_t idx = point;
    for (int a = dim_ - 1; a > axis; --a)
        idx /= nn;
    return dx() * static_cast<double>(idx % nn);
}

Grid build_grid(int dim, int n_per_axis, double box_length)
{
    return Grid(dim, n_per_axis, box_length);
}

void require_same_grid(const Grid& a, const Grid& b, const char* where)
{
    if (!(a == b))
        throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

} // namespace oldroyd
