#include "oldroyd/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oldroyd/fft.hpp"
#include "oldroyd/kernels.hpp"

namespace oldroyd {

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(Grid grid) : grid_(std::move(grid)), data_(grid_.spectral_count()) {}

double Spectrum::mean() const noexcept
{
    return data_.empty() ? 0.0 : data_[0].real() / static_cast<double>(grid_.point_count());
}

Spectrum& Spectrum::operator+=(const Spectrum& other)
{
    require_same_grid(grid_, other.grid_, "Spectrum::operator+=");
    kernels::for_each_index(data_.size(), [&](std::size_t s) { data_[s] += other.data_[s]; });
    return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& other)
{
    require_same_grid(grid_, other.grid_, "Spectrum::operator-=");
    kernels::for_each_index(data_.size(), [&](std::size_t s) { data_[s] -= other.data_[s]; });
    return *this;
}

Spectrum& Spectrum::operator*=(double factor) noexcept
{
    kernels::for_each_index(data_.size(), [&](std::size_t s) { data_[s] *= factor; });
    return *this;
}

// ------------------------------------------------------------- ScalarField

ScalarField::ScalarField(Grid grid, double value)
    : grid_(std::move(grid)), values_(grid_.point_count(), value)
{
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_.point_count())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

Spectrum ScalarField::spectrum() const
{
    Spectrum out(grid_);
    fft::forward(grid_, values_, out.data());
    return out;
}

ScalarField ScalarField::from_spectrum(const Spectrum& spectrum)
{
    ScalarField out(spectrum.grid());
    fft::inverse(spectrum.grid(), spectrum.data(), out.values());
    return out;
}

double ScalarField::mean() const noexcept
{
    double sum = 0.0;
    for (double v : values_)
        sum += v;
    return values_.empty() ? 0.0 : sum / static_cast<double>(values_.size());
}

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField::operator+=");
    kernels::for_each_index(values_.size(), [&](std::size_t i) { values_[i] += other.values_[i]; });
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other)
{
    require_same_grid(grid_, other.grid_, "ScalarField::operator-=");
    kernels::for_each_index(values_.size(), [&](std::size_t i) { values_[i] -= other.values_[i]; });
    return *this;
}

ScalarField& ScalarField::operator*=(double factor) noexcept
{
    kernels::for_each_index(values_.size(), [&](std::size_t i) { values_[i] *= factor; });
    return *this;
}

ScalarField& ScalarField::operator+=(double shift) noexcept
{
    kernels::for_each_index(values_.size(), [&](std::size_t i) { values_[i] += shift; });
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double factor, ScalarField a) { return a *= factor; }

ScalarField operator*(const ScalarField& a, const ScalarField& b)
{
    require_same_grid(a.grid(), b.grid(), "ScalarField product");
    ScalarField out(a.grid());
    kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] = a[i] * b[i]; });
    return out;
}

// ------------------------------------------------------------- VectorField

VectorField::VectorField(const Grid& grid, double value)
{
    comps_.assign(static_cast<std::size_t>(grid.dim()), ScalarField(grid, value));
}

VectorField::VectorField(std::vector<ScalarField> components) : comps_(std::move(components))
{
    if (comps_.empty() || static_cast<int>(comps_.size()) != comps_.front().grid().dim())
        throw std::invalid_argument("VectorField: component count must equal grid dimension");
    for (const auto& c : comps_)
        require_same_grid(c.grid(), comps_.front().grid(), "VectorField");
}

VectorField& VectorField::operator+=(const VectorField& other)
{
    for (std::size_t i = 0; i < comps_.size(); ++i)
        comps_[i] += other.comps_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other)
{
    for (std::size_t i = 0; i < comps_.size(); ++i)
        comps_[i] -= other.comps_[i];
    return *this;
}

VectorField& VectorField::operator*=(double factor) noexcept
{
    for (auto& c : comps_)
        c *= factor;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double factor, VectorField a) { return a *= factor; }

// ---------------------------------------------------------- SymTensorField

SymTensorField::SymTensorField(const Grid& grid, double value) : dim_(grid.dim())
{
    slots_.assign(static_cast<std::size_t>(slot_count(dim_)), ScalarField(grid, value));
}

int SymTensorField::slot(int dim, int i, int j) noexcept
{
    if (i > j)
        std::swap(i, j);
    // rows of the upper triangle: row i starts after sum_{r<i} (dim - r)
    return i * dim - i * (i - 1) / 2 + (j - i);
}

ScalarField& SymTensorField::operator()(int i, int j) noexcept
{
    return slots_[static_cast<std::size_t>(slot(dim_, i, j))];
}

const ScalarField& SymTensorField::operator()(int i, int j) const noexcept
{
    return slots_[static_cast<std::size_t>(slot(dim_, i, j))];
}

SymTensorField& SymTensorField::add_identity(const ScalarField& c)
{
    for (int i = 0; i < dim_; ++i)
        (*this)(i, i) += c;
    return *this;
}

SymTensorField& SymTensorField::operator+=(const SymTensorField& other)
{
    for (std::size_t i = 0; i < slots_.size(); ++i)
        slots_[i] += other.slots_[i];
    return *this;
}

SymTensorField& SymTensorField::operator-=(const SymTensorField& other)
{
    for (std::size_t i = 0; i < slots_.size(); ++i)
        slots_[i] -= other.slots_[i];
    return *this;
}

SymTensorField& SymTensorField::operator*=(double factor) noexcept
{
    for (auto& c : slots_)
        c *= factor;
    return *this;
}

double symmetric_slot_weight(int dim, int slot) noexcept
{
    for (int i = 0; i < dim; ++i)
        if (SymTensorField::slot(dim, i, i) == slot)
            return 1.0;
    return 2.0;
}

} // namespace oldroyd
