#pragma once

#include <stdexcept>

#include "oldroyd/field.hpp"

namespace oldroyd {

/// How operators with a singular symbol at xi = 0 (inverse Laplacian,
/// negative powers of Lambda) treat the mean.
enum class MeanPolicy {
    annihilate, ///< drop the zero mode silently
    strict,     ///< throw MeanNotZeroError when |mean| > kMeanTolerance
};

inline constexpr double kMeanTolerance = 1e-10;

class MeanNotZeroError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Process-wide default used when callers do not pass a policy
/// (the CLI sets it from --strict-means).
MeanPolicy default_mean_policy() noexcept;
void set_default_mean_policy(MeanPolicy policy) noexcept;

// Conventions shared by every operator below:
//  * differentiation symbols i*xi_j are zeroed on any entry touching the
//    Nyquist mode;
//  * the Leray pair uses Q = xi xi^T / |xi|^2 off the zero mode and off the
//    Nyquist entries, and P = I - Q, so the mean flow belongs to P.

namespace spectral {

/// Coefficient-wise operators on spectra. All return fresh spectra.
Spectrum derivative(const Spectrum& f, int axis);
Spectrum laplacian(const Spectrum& f);
Spectrum inv_laplacian(const Spectrum& f, MeanPolicy policy);
Spectrum lambda_power(const Spectrum& f, double beta, MeanPolicy policy);
Spectrum dealias(const Spectrum& f);
void dealias_in_place(Spectrum& f);
/// sum_j i xi_j f_j
Spectrum divergence(const std::vector<Spectrum>& v);
void leray_split(const std::vector<Spectrum>& v, std::vector<Spectrum>* p_part,
                 std::vector<Spectrum>* q_part);

/// ||f||_{L^2}^2 via Parseval with the Hermitian multiplicity of each entry.
double l2_norm_squared(const Spectrum& f);

} // namespace spectral

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
SymTensorField laplacian(const SymTensorField& t);

VectorField leray_P(const VectorField& v);
VectorField leray_Q(const VectorField& v);

ScalarField inv_laplacian(const ScalarField& f, MeanPolicy policy = default_mean_policy());
VectorField inv_laplacian(const VectorField& v, MeanPolicy policy = default_mean_policy());

/// Multiplication by |xi|^beta (Lambda = sqrt(-Laplacian)).
ScalarField lambda_power(const ScalarField& f, double beta,
                         MeanPolicy policy = default_mean_policy());
VectorField lambda_power(const VectorField& v, double beta,
                         MeanPolicy policy = default_mean_policy());

/// 2/3 rule: zero every coefficient with some |m_j| > n/3.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);
SymTensorField dealias(const SymTensorField& t);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double l2_norm(const SymTensorField& t);

} // namespace oldroyd
