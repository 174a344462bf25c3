#include "oldroyd/state.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace oldroyd {

namespace {

template <class S, class Out>
void collect(S& s, Out& out)
{
    using T = std::remove_cvref_t<S>;
    auto vec = [&](auto& v) {
        for (auto& c : v.components())
            out.push_back(&c);
    };
    if constexpr (std::is_same_v<T, PrimitiveState>) {
        out.push_back(&s.rho);
        vec(s.v);
        vec(s.sigma);
        out.push_back(&s.eta);
    } else if constexpr (std::is_same_v<T, CauchyState>) {
        out.push_back(&s.n);
        vec(s.u);
        vec(s.tau);
        out.push_back(&s.eta);
    } else if constexpr (std::is_same_v<T, TorusState>) {
        out.push_back(&s.P);
        vec(s.u);
        out.push_back(&s.eta);
        out.push_back(&s.tau);
    } else {
        out.push_back(&s.a_tilde);
        vec(s.u);
        out.push_back(&s.tau);
        out.push_back(&s.p);
        out.push_back(&s.b);
    }
}

} // namespace

std::string_view to_string(Formulation f) noexcept
{
    switch (f) {
    case Formulation::primitive: return "primitive";
    case Formulation::cauchy: return "cauchy";
    case Formulation::torus: return "torus";
    case Formulation::effective: return "effective";
    }
    return "?";
}

Formulation parse_formulation(std::string_view name)
{
    for (auto f : {Formulation::primitive, Formulation::cauchy, Formulation::torus, Formulation::effective})
        if (to_string(f) == name)
            return f;
    throw std::invalid_argument("unknown formulation '" + std::string(name) +
                                "' (expected primitive, cauchy, torus or effective)");
}

Formulation formulation_of(const State& s) noexcept { return static_cast<Formulation>(s.index()); }

const Grid& grid_of(const State& s) { return slots(s).front()->grid(); }

std::vector<ScalarField*> slots(State& s)
{
    std::vector<ScalarField*> out;
    std::visit([&](auto& st) { collect(st, out); }, s);
    return out;
}

std::vector<const ScalarField*> slots(const State& s)
{
    std::vector<const ScalarField*> out;
    std::visit([&](const auto& st) { collect(st, out); }, s);
    return out;
}

std::vector<std::string> slot_names(Formulation f, int dim)
{
    std::vector<std::string> out;
    auto vec = [&](const char* name) {
        for (int i = 0; i < dim; ++i)
            out.push_back(std::string(name) + "_" + std::to_string(i));
    };
    auto tensor = [&](const char* name) {
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j)
                out.push_back(std::string(name) + "_" + std::to_string(i) + std::to_string(j));
    };
    switch (f) {
    case Formulation::primitive:
        out.push_back("rho");
        vec("v");
        tensor("sigma");
        out.push_back("eta");
        break;
    case Formulation::cauchy:
        out.push_back("n");
        vec("u");
        tensor("tau");
        out.push_back("eta");
        break;
    case Formulation::torus:
        out.push_back("P");
        vec("u");
        out.push_back("eta");
        out.push_back("tau");
        break;
    case Formulation::effective:
        out.push_back("a_tilde");
        vec("u");
        out.push_back("tau");
        out.push_back("p");
        out.push_back("b");
        break;
    }
    return out;
}

State zero_like(const State& s)
{
    State z = s;
    for (auto* f : slots(z))
        *f *= 0.0;
    return z;
}

void axpy(State& y, double a, const State& x)
{
    if (y.index() != x.index())
        throw std::invalid_argument("axpy: formulation mismatch");
    auto ys = slots(y);
    auto xs = slots(x);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        ScalarField& yi = *ys[i];
        const ScalarField& xi = *xs[i];
        require_same_grid(yi.grid(), xi.grid(), "axpy");
        for (std::size_t p = 0; p < yi.size(); ++p)
            yi[p] += a * xi[p];
    }
}

State& scale(State& s, double a)
{
    for (auto* f : slots(s))
        *f *= a;
    return s;
}

double max_abs_difference(const State& a, const State& b)
{
    if (a.index() != b.index())
        throw std::invalid_argument("max_abs_difference: formulation mismatch");
    const auto as = slots(a);
    const auto bs = slots(b);
    double m = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t p = 0; p < as[i]->size(); ++p)
            m = std::max(m, std::abs((*as[i])[p] - (*bs[i])[p]));
    return m;
}

AdmissibilityError::AdmissibilityError(std::string field, double value, std::string what)
    : std::runtime_error(std::move(what)), field_(std::move(field)), value_(value)
{
}

} // namespace oldroyd
