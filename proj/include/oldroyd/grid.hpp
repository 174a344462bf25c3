#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace oldroyd {

/// Uniform periodic grid on [0, box_length)^dim.
///
/// Physical samples are stored row-major with the last axis fastest. Spectral
/// coefficients use the real-to-complex half layout: every axis but the last
/// runs over all n modes, the last over n/2 + 1. A mode index m maps to the
/// physical frequency xi = 2*pi*m / box_length, with signed modes in
/// {-n/2, ..., n/2 - 1}. The Nyquist index (|m| = n/2) is reported as -n/2.
class Grid
{
public:
    Grid() = default;

    /// Throws std::invalid_argument unless dim is 2 or 3, n is even and at
    /// least 8, and box_length is positive.
    Grid(int dim, int n, double box_length);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double box_length() const noexcept { return box_length_; }
    double dx() const noexcept { return box_length_ / n_; }
    double volume() const noexcept;

    std::size_t point_count() const noexcept { return point_count_; }
    std::size_t spectral_count() const noexcept { return spectral_count_; }
    int half_n() const noexcept { return n_ / 2 + 1; }

    /// Signed mode for a full-axis storage index.
    int mode_of_index(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
    double frequency(int mode) const noexcept;

    /// Signed modes of spectral entry s (unused axes are 0).
    std::array<int, 3> modes(std::size_t s) const noexcept;

    double xi(std::size_t s, int axis) const noexcept { return tables_->xi[axis][s]; }
    double xi_norm2(std::size_t s) const noexcept { return tables_->xi2[s]; }
    double xi_norm(std::size_t s) const noexcept { return tables_->xi_abs[s]; }

    /// True when any axis of entry s sits on the Nyquist mode.
    bool nyquist(std::size_t s) const noexcept { return tables_->flags[s] & kNyquist; }

    /// True when the 2/3 rule keeps entry s (every |m_j| <= n/3).
    bool dealias_keep(std::size_t s) const noexcept { return tables_->flags[s] & kKeep; }

    /// Multiplicity of entry s in the full Hermitian spectrum (1 or 2).
    double hermitian_weight(std::size_t s) const noexcept { return tables_->weight[s]; }

    /// Largest and smallest nonzero |xi| present on the grid.
    double xi_max() const noexcept;
    double xi_min() const noexcept { return frequency(1); }

    /// Coordinate of a physical sample along one axis.
    double coordinate(std::size_t point, int axis) const noexcept;

    friend bool operator==(const Grid& a, const Grid& b) noexcept
    {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.box_length_ == b.box_length_;
    }

private:
    static constexpr std::uint8_t kNyquist = 1;
    static constexpr std::uint8_t kKeep = 2;

    struct Tables
    {
        std::array<std::vector<double>, 3> xi;
        std::vector<double> xi2;
        std::vector<double> xi_abs;
        std::vector<double> weight;
        std::vector<std::uint8_t> flags;
    };

    int dim_ = 0;
    int n_ = 0;
    double box_length_ = 0.0;
    std::size_t point_count_ = 0;
    std::size_t spectral_count_ = 0;
    std::shared_ptr<const Tables> tables_;
};

Grid build_grid(int dim, int n_per_axis, double box_length);

/// Throws std::invalid_argument when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

} // namespace oldroyd
