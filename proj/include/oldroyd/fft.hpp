#pragma once

#include <span>

#include "oldroyd/field.hpp"

namespace oldroyd::fft {

/// Unnormalised real-to-complex forward transform.
void forward(const Grid& grid, std::span<const double> in, std::span<Complex> out);

/// Complex-to-real inverse transform including the 1/N^d factor.
/// `in` is left untouched.
void inverse(const Grid& grid, std::span<const Complex> in, std::span<double> out);

} // namespace oldroyd::fft
