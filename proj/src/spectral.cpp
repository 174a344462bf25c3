#include "oldroyd/spectral.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "oldroyd/kernels.hpp"

namespace oldroyd {

namespace {

std::atomic<MeanPolicy> g_mean_policy{MeanPolicy::annihilate};

void check_mean(const Spectrum& f, MeanPolicy policy, const char* op)
{
    if (policy == MeanPolicy::strict && std::abs(f.mean()) > kMeanTolerance)
        throw MeanNotZeroError(std::string(op) + ": field mean " + std::to_string(f.mean()) +
                               " is not zero (strict mean mode)");
}

template <class Symbol>
Spectrum apply_symbol(const Spectrum& f, Symbol&& symbol)
{
    Spectrum out(f.grid());
    const Grid& g = f.grid();
    kernels::for_each_index(out.size(), [&](std::size_t s) { out[s] = symbol(g, s) * f[s]; });
    return out;
}

} // namespace

MeanPolicy default_mean_policy() noexcept { return g_mean_policy.load(); }

void set_default_mean_policy(MeanPolicy policy) noexcept { g_mean_policy.store(policy); }

namespace spectral {

Spectrum derivative(const Spectrum& f, int axis)
{
    return apply_symbol(f, [axis](const Grid& g, std::size_t s) {
        return g.nyquist(s) ? Complex(0.0) : Complex(0.0, g.xi(s, axis));
    });
}

Spectrum laplacian(const Spectrum& f)
{
    return apply_symbol(f, [](const Grid& g, std::size_t s) { return Complex(-g.xi_norm2(s)); });
}

Spectrum inv_laplacian(const Spectrum& f, MeanPolicy policy)
{
    check_mean(f, policy, "inv_laplacian");
    return apply_symbol(f, [](const Grid& g, std::size_t s) {
        return s == 0 ? Complex(0.0) : Complex(-1.0 / g.xi_norm2(s));
    });
}

Spectrum lambda_power(const Spectrum& f, double beta, MeanPolicy policy)
{
    if (beta == 0.0)
        return f;
    if (beta < 0.0)
        check_mean(f, policy, "lambda_power");
    return apply_symbol(f, [beta](const Grid& g, std::size_t s) {
        return s == 0 ? Complex(0.0) : Complex(std::pow(g.xi_norm(s), beta));
    });
}

Spectrum dealias(const Spectrum& f)
{
    Spectrum out = f;
    dealias_in_place(out);
    return out;
}

void dealias_in_place(Spectrum& f)
{
    const Grid& g = f.grid();
    kernels::for_each_index(f.size(), [&](std::size_t s) {
        if (!g.dealias_keep(s))
            f[s] = 0.0;
    });
}

Spectrum divergence(const std::vector<Spectrum>& v)
{
    const Grid& g = v.front().grid();
    for (const auto& c : v)
        require_same_grid(c.grid(), g, "divergence");
    Spectrum out(g);
    const int dim = g.dim();
    kernels::for_each_index(out.size(), [&](std::size_t s) {
        if (g.nyquist(s))
            return;
        Complex acc = 0.0;
        for (int a = 0; a < dim; ++a)
            acc += Complex(0.0, g.xi(s, a)) * v[static_cast<std::size_t>(a)][s];
        out[s] = acc;
    });
    return out;
}

void leray_split(const std::vector<Spectrum>& v, std::vector<Spectrum>* p_part,
                 std::vector<Spectrum>* q_part)
{
    const Grid& g = v.front().grid();
    const int dim = g.dim();
    std::vector<Spectrum> q(v.size(), Spectrum(g));
    kernels::for_each_index(g.spectral_count(), [&](std::size_t s) {
        if (s == 0 || g.nyquist(s))
            return;
        Complex dot = 0.0;
        for (int a = 0; a < dim; ++a)
            dot += g.xi(s, a) * v[static_cast<std::size_t>(a)][s];
        const Complex scaled = dot / g.xi_norm2(s);
        for (int a = 0; a < dim; ++a)
            q[static_cast<std::size_t>(a)][s] = g.xi(s, a) * scaled;
    });
    if (p_part) {
        p_part->assign(v.begin(), v.end());
        for (std::size_t a = 0; a < v.size(); ++a)
            (*p_part)[a] -= q[a];
    }
    if (q_part)
        *q_part = std::move(q);
}

double l2_norm_squared(const Spectrum& f)
{
    const Grid& g = f.grid();
    double sum = 0.0;
    for (std::size_t s = 0; s < f.size(); ++s)
        sum += g.hermitian_weight(s) * std::norm(f[s]);
    const double n = static_cast<double>(g.point_count());
    return g.volume() * sum / (n * n);
}

} // namespace spectral

namespace {

std::vector<Spectrum> spectra(const VectorField& v)
{
    std::vector<Spectrum> out;
    out.reserve(static_cast<std::size_t>(v.dim()));
    for (const auto& c : v.components())
        out.push_back(c.spectrum());
    return out;
}

VectorField from_spectra(const std::vector<Spectrum>& s)
{
    std::vector<ScalarField> comps;
    comps.reserve(s.size());
    for (const auto& c : s)
        comps.push_back(ScalarField::from_spectrum(c));
    return VectorField(std::move(comps));
}

template <class Op>
VectorField map_components(const VectorField& v, Op&& op)
{
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(v.dim()));
    for (const auto& c : v.components())
        comps.push_back(op(c));
    return VectorField(std::move(comps));
}

template <class Op>
SymTensorField map_components(const SymTensorField& t, Op&& op)
{
    SymTensorField out = t;
    for (auto& c : out.components())
        c = op(c);
    return out;
}

} // namespace

VectorField gradient(const ScalarField& f)
{
    const Spectrum fs = f.spectrum();
    std::vector<ScalarField> comps;
    for (int a = 0; a < f.grid().dim(); ++a)
        comps.push_back(ScalarField::from_spectrum(spectral::derivative(fs, a)));
    return VectorField(std::move(comps));
}

ScalarField divergence(const VectorField& v)
{
    return ScalarField::from_spectrum(spectral::divergence(spectra(v)));
}

ScalarField laplacian(const ScalarField& f)
{
    return ScalarField::from_spectrum(spectral::laplacian(f.spectrum()));
}

VectorField laplacian(const VectorField& v)
{
    return map_components(v, [](const ScalarField& c) { return laplacian(c); });
}

SymTensorField laplacian(const SymTensorField& t)
{
    return map_components(t, [](const ScalarField& c) { return laplacian(c); });
}

VectorField leray_P(const VectorField& v)
{
    std::vector<Spectrum> p;
    spectral::leray_split(spectra(v), &p, nullptr);
    return from_spectra(p);
}

VectorField leray_Q(const VectorField& v)
{
    std::vector<Spectrum> q;
    spectral::leray_split(spectra(v), nullptr, &q);
    return from_spectra(q);
}

ScalarField inv_laplacian(const ScalarField& f, MeanPolicy policy)
{
    return ScalarField::from_spectrum(spectral::inv_laplacian(f.spectrum(), policy));
}

VectorField inv_laplacian(const VectorField& v, MeanPolicy policy)
{
    return map_components(v, [policy](const ScalarField& c) { return inv_laplacian(c, policy); });
}

ScalarField lambda_power(const ScalarField& f, double beta, MeanPolicy policy)
{
    if (beta == 0.0)
        return f;
    return ScalarField::from_spectrum(spectral::lambda_power(f.spectrum(), beta, policy));
}

VectorField lambda_power(const VectorField& v, double beta, MeanPolicy policy)
{
    return map_components(v, [=](const ScalarField& c) { return lambda_power(c, beta, policy); });
}

ScalarField dealias(const ScalarField& f)
{
    return ScalarField::from_spectrum(spectral::dealias(f.spectrum()));
}

VectorField dealias(const VectorField& v)
{
    return map_components(v, [](const ScalarField& c) { return dealias(c); });
}

SymTensorField dealias(const SymTensorField& t)
{
    return map_components(t, [](const ScalarField& c) { return dealias(c); });
}

double l2_norm(const ScalarField& f) { return std::sqrt(spectral::l2_norm_squared(f.spectrum())); }

double l2_norm(const VectorField& v)
{
    double sum = 0.0;
    for (const auto& c : v.components())
        sum += spectral::l2_norm_squared(c.spectrum());
    return std::sqrt(sum);
}

double l2_norm(const SymTensorField& t)
{
    double sum = 0.0;
    for (int s = 0; s < static_cast<int>(t.components().size()); ++s)
        sum += symmetric_slot_weight(t.dim(), s) *
               spectral::l2_norm_squared(t.components()[static_cast<std::size_t>(s)].spectrum());
    return std::sqrt(sum);
}

} // namespace oldroyd
