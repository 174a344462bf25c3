#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "oldroyd/grid.hpp"

namespace oldroyd {

using Complex = std::complex<double>;

/// Unnormalised forward coefficients of a real field in the half layout of
/// Grid. The inverse transform carries the single 1/N^d factor, so the
/// Fourier coefficient of mode xi is `at(s) / point_count()`.
class Spectrum
{
public:
    Spectrum() = default;
    explicit Spectrum(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return data_.size(); }
    Complex& operator[](std::size_t s) noexcept { return data_[s]; }
    const Complex& operator[](std::size_t s) const noexcept { return data_[s]; }
    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    /// Spatial mean of the represented field.
    double mean() const noexcept;

    Spectrum& operator+=(const Spectrum& other);
    Spectrum& operator-=(const Spectrum& other);
    Spectrum& operator*=(double factor) noexcept;

private:
    Grid grid_;
    std::vector<Complex> data_;
};

/// Real samples of a periodic scalar field. Coefficients are obtained on
/// demand through `spectrum()`, so values and coefficients cannot drift.
class ScalarField
{
public:
    ScalarField() = default;
    explicit ScalarField(Grid grid, double value = 0.0);
    ScalarField(Grid grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    Spectrum spectrum() const;
    static ScalarField from_spectrum(const Spectrum& spectrum);

    double mean() const noexcept;
    double min() const noexcept;
    double max() const noexcept;
    double max_abs() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double factor) noexcept;
    ScalarField& operator+=(double shift) noexcept;
    ScalarField& operator-=(double shift) noexcept { return *this += -shift; }

    friend bool operator==(const ScalarField& a, const ScalarField& b)
    {
        return a.grid_ == b.grid_ && a.values_ == b.values_;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double factor, ScalarField a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);

class VectorField
{
public:
    VectorField() = default;
    explicit VectorField(const Grid& grid, double value = 0.0);
    explicit VectorField(std::vector<ScalarField> components);

    const Grid& grid() const noexcept { return comps_.front().grid(); }
    int dim() const noexcept { return static_cast<int>(comps_.size()); }
    ScalarField& operator[](int i) noexcept { return comps_[static_cast<std::size_t>(i)]; }
    const ScalarField& operator[](int i) const noexcept { return comps_[static_cast<std::size_t>(i)]; }
    std::vector<ScalarField>& components() noexcept { return comps_; }
    const std::vector<ScalarField>& components() const noexcept { return comps_; }

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(double factor) noexcept;

    friend bool operator==(const VectorField& a, const VectorField& b) { return a.comps_ == b.comps_; }

private:
    std::vector<ScalarField> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double factor, VectorField a);

/// Symmetric d x d tensor field; stores the upper triangle row by row,
/// so component(i, j) and component(j, i) are the same object.
class SymTensorField
{
public:
    SymTensorField() = default;
    explicit SymTensorField(const Grid& grid, double value = 0.0);

    static int slot_count(int dim) noexcept { return dim * (dim + 1) / 2; }
    static int slot(int dim, int i, int j) noexcept;

    const Grid& grid() const noexcept { return slots_.front().grid(); }
    int dim() const noexcept { return dim_; }
    ScalarField& operator()(int i, int j) noexcept;
    const ScalarField& operator()(int i, int j) const noexcept;
    std::vector<ScalarField>& components() noexcept { return slots_; }
    const std::vector<ScalarField>& components() const noexcept { return slots_; }

    /// c * Id added to the diagonal.
    SymTensorField& add_identity(const ScalarField& c);

    SymTensorField& operator+=(const SymTensorField& other);
    SymTensorField& operator-=(const SymTensorField& other);
    SymTensorField& operator*=(double factor) noexcept;

    friend bool operator==(const SymTensorField& a, const SymTensorField& b)
    {
        return a.dim_ == b.dim_ && a.slots_ == b.slots_;
    }

private:
    int dim_ = 0;
    std::vector<ScalarField> slots_;
};

/// Off-diagonal slots counted twice, matching the Frobenius norm.
double symmetric_slot_weight(int dim, int slot) noexcept;

} // namespace oldroyd
