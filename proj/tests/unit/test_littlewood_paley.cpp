#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oldroyd/littlewood_paley.hpp"
#include "test_support.hpp"

using namespace oldroyd;
using test_support::max_abs_diff;
using test_support::random_field;
using test_support::sample;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Block weights recomputed from the profile alone, independent of the
// sparse tables the block set stores.
double profile_sum(double r, int k_lo, int k_hi)
{
    double s = 0.0;
    for (int k = k_lo; k <= k_hi; ++k)
        s += lp::phi(std::ldexp(r, -k));
    return s;
}

double stored_weight(const lp::DyadicBlockSet& b, int k, std::size_t s)
{
    for (const auto& e : b.block(k))
        if (e.index == s)
            return e.weight;
    return 0.0;
}

} // namespace

TEST_CASE("profiles: support and partition of unity")
{
    CHECK(lp::smooth_step(-1.0) == 0.0);
    CHECK(lp::smooth_step(0.0) == 0.0);
    CHECK(lp::smooth_step(1.0) == 1.0);
    CHECK(lp::smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lp::chi(0.0) == 1.0);
    CHECK(lp::chi(0.75) == 1.0);
    CHECK(lp::chi(4.0 / 3.0) == 0.0);
    CHECK(lp::chi(10.0) == 0.0);

    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double r = 0.001 + 0.01 * i;
        const double p = lp::phi(r);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        if (r <= lp::kRingInner || r >= lp::kRingOuter)
            CHECK(p == 0.0);
        double s = lp::chi(r);
        for (int k = 0; k <= 20; ++k)
            s += lp::phi(std::ldexp(r, -k));
        worst = std::max(worst, std::abs(s - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("profiles: unit frequency only touches blocks -1 and 0")
{
    double sum = 0.0;
    for (int k = -10; k <= 10; ++k) {
        const double w = lp::phi(std::ldexp(1.0, -k));
        if (k != -1 && k != 0)
            CHECK(w == 0.0);
        sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(profile_sum(0.0, -10, 10) == 0.0);
    CHECK(lp::chi(0.0) == 1.0);
}

TEST_CASE("blocks: grid partition, overlap and k range")
{
    const Grid grids[] = {Grid(2, 64, 2 * kPi), Grid(2, 128, 64 * kPi), Grid(3, 16, 2 * kPi),
                          Grid(2, 32, 1.0)};
    for (const auto& g : grids) {
        const auto b = lp::build_blocks(g, 1);
        CHECK(std::ldexp(4.0 / 3.0, b.k_min()) <= g.xi_min());
        CHECK(std::ldexp(0.75, b.k_max() + 1) >= g.xi_max());
        double worst = 0.0;
        int max_active = 0;
        for (std::size_t s = 1; s < g.spectral_count(); ++s) {
            const double r = g.xi_norm(s);
            double sum = 0.0;
            int active = 0;
            for (int k = b.k_min(); k <= b.k_max(); ++k) {
                const double w = stored_weight(b, k, s);
                CHECK(w == lp::phi(std::ldexp(r, -k)));
                sum += w;
                active += w != 0.0;
            }
            worst = std::max(worst, std::abs(sum - 1.0));
            max_active = std::max(max_active, active);
            // Nothing outside the resolved range touches a grid frequency.
            CHECK(lp::phi(std::ldexp(r, -(b.k_min() - 1))) == 0.0);
            CHECK(lp::phi(std::ldexp(r, -(b.k_max() + 1))) == 0.0);
        }
        CHECK(worst < 1e-10);
        CHECK(max_active <= 2);
        CHECK_THROWS_AS((void)b.block(b.k_max() + 1), std::out_of_range);
        CHECK_THROWS_AS((void)b.block(b.k_min() - 1), std::out_of_range);
    }

    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    // max|xi| = 32 sqrt 2; the top ring is the last whose inner edge is below it.
    CHECK(b.k_max() == 5);
    CHECK(b.k_min() == -1);
    CHECK_THROWS_AS(lp::build_blocks(g, 0), std::invalid_argument);
}

TEST_CASE("blocks: default k0 sits near a quarter of the dealiased band")
{
    CHECK(lp::default_k0(Grid(2, 64, 2 * kPi)) == 2);   // band 21.3 -> 5.3
    CHECK(lp::default_k0(Grid(2, 256, 2 * kPi)) == 4);  // band 85.3 -> 21.3
    CHECK(lp::default_k0(Grid(2, 16, 2 * kPi)) == 1);   // clamped
}

TEST_CASE("block_apply: telescoping, disjoint support and Bernstein bounds")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);

    // |xi| = 4 = 2^2 exactly: only blocks 1 and 2 see it.
    const ScalarField wave = sample(g, [](const double* x) { return std::cos(4 * x[0]); });
    ScalarField sum = lp::block_apply(wave, 2, b);
    sum += lp::block_apply(wave, 1, b);
    CHECK(max_abs_diff(sum, wave) < 1e-13);
    CHECK(lp::block_apply(wave, 3, b).max_abs() < 1e-13);
    CHECK(lp::block_apply(wave, 0, b).max_abs() < 1e-13);

    // |xi| = 20 > 8/3 * 4 -> block 2 is blind to it.
    const ScalarField hi = sample(g, [](const double* x) { return std::sin(20 * x[1]); });
    CHECK(lp::block_apply(hi, 2, b).max_abs() < 1e-13);
    CHECK_THROWS_AS(lp::block_apply(hi, 9, b), std::out_of_range);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField f = random_field(g, rng, 31);
        for (int k = b.k_min(); k <= b.k_max(); ++k) {
            const ScalarField dk = lp::block_apply(f, k, b);
            const double base = l2_norm(dk);
            if (base < 1e-12)
                continue;
            const double grad = l2_norm(gradient(dk));
            CHECK(grad >= std::ldexp(0.75, k) * base * (1 - 1e-12));
            CHECK(grad <= std::ldexp(8.0 / 3.0, k) * base * (1 + 1e-12));
        }
    }
}

TEST_CASE("low_high_split: reconstruction and support cases")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        ScalarField f = random_field(g, rng, 32);
        f += 0.7;
        const auto [lo, hi] = lp::low_high_split(f, b);
        ScalarField rec = lo;
        rec += hi;
        ScalarField centred = f;
        centred -= f.mean();
        CHECK(max_abs_diff(rec, centred) < 1e-12);
    }

    // 2^k0 = 4: |xi| = 2 < 3 is purely low, |xi| = 11 > 32/3 purely high.
    const ScalarField low = sample(g, [](const double* x) { return std::cos(2 * x[0]) + 1.0; });
    CHECK(lp::low_high_split(low, b).second.max_abs() < 1e-14);
    const ScalarField high = sample(g, [](const double* x) { return std::sin(11 * x[1]); });
    CHECK(lp::low_high_split(high, b).first.max_abs() < 1e-14);
}

TEST_CASE("besov: zero, scaling and plane-wave weights")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    const lp::BesovNormSpec spec{0.0, 2.0, 1.0, lp::Part::full, 2};
    CHECK(lp::besov_norm(ScalarField(g), spec, b) == 0.0);

    std::mt19937_64 rng(3);
    const ScalarField f = random_field(g, rng, 20);
    for (double p : {2.0, kInf})
        for (double r : {1.0, 2.0, kInf}) {
            const lp::BesovNormSpec sp{0.5, p, r, lp::Part::full, 2};
            const double n1 = lp::besov_norm(f, sp, b);
            ScalarField scaled = f;
            scaled *= -3.5;
            CHECK(n1 > 0.0);
            CHECK(lp::besov_norm(scaled, sp, b) == doctest::Approx(3.5 * n1).epsilon(1e-12));
        }
    CHECK_THROWS_AS(lp::besov_norm(f, {0.0, 3.0, 1.0, lp::Part::full, 2}, b), std::invalid_argument);
    CHECK_THROWS_AS(lp::besov_norm(f, {0.0, 2.0, 1.5, lp::Part::full, 2}, b), std::invalid_argument);

    // Plane wave at |xi| = 8 = 2^3 with amplitude A: blocks 2 and 3 see it,
    // each with its filter weight, so the s=0 B_{2,1} norm is
    // (phi(2) + phi(1)) * ||f||_{L2} = ||f||_{L2}.
    const double amp = 1.7;
    const ScalarField wave = sample(g, [&](const double* x) { return amp * std::cos(8 * x[1]); });
    const double l2 = l2_norm(wave);
    CHECK(l2 == doctest::Approx(amp * std::sqrt(2.0) * kPi).epsilon(1e-12));
    CHECK(lp::besov_norm(wave, spec, b) ==
          doctest::Approx((lp::phi(2.0) + lp::phi(1.0)) * l2).epsilon(1e-12));
    // Off-power frequency: |xi| = 6 splits between blocks 2 and 3 unevenly.
    const ScalarField w6 = sample(g, [](const double* x) { return std::sin(6 * x[0]); });
    const double expect = (lp::phi(6.0 / 4.0) + lp::phi(6.0 / 8.0)) * l2_norm(w6);
    CHECK(lp::besov_norm(w6, spec, b) == doctest::Approx(expect).epsilon(1e-12));
    // p = inf of a single cosine block is weight * amplitude.
    const lp::BesovNormSpec inf_spec{0.0, kInf, kInf, lp::Part::full, 2};
    CHECK(lp::besov_norm(wave, inf_spec, b) ==
          doctest::Approx(amp * std::max(lp::phi(2.0), lp::phi(1.0))).epsilon(1e-12));
}

TEST_CASE("besov: B^0_{2,2} against L2 with per-frequency weight bound")
{
    const Grid g(2, 32, 2 * kPi);
    const auto b = lp::build_blocks(g, 1);
    for (std::size_t s = 1; s < g.spectral_count(); ++s) {
        double w = 0.0;
        for (int k = b.k_min(); k <= b.k_max(); ++k) {
            const double p = lp::phi(std::ldexp(g.xi_norm(s), -k));
            w += p * p;
        }
        CHECK(w >= 0.5 - 1e-12);
        CHECK(w <= 1.0 + 1e-12);
    }
    std::mt19937_64 rng(17);
    const lp::BesovNormSpec spec{0.0, 2.0, 2.0, lp::Part::full, 1};
    for (int trial = 0; trial < 10; ++trial) {
        ScalarField f = random_field(g, rng, 16);
        const double besov = lp::besov_norm(f, spec, b);
        f -= f.mean();
        const double ratio = besov / l2_norm(f);
        CHECK(ratio >= 1.0 / std::sqrt(2.0) - 1e-12);
        CHECK(ratio <= std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("besov: low + high parts and vector/tensor magnitudes")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    std::mt19937_64 rng(23);
    const ScalarField f = random_field(g, rng, 24);
    const double full = lp::besov_norm(f, {1.0, 2.0, 1.0, lp::Part::full, 2}, b);
    const double low = lp::besov_norm(f, {1.0, 2.0, 1.0, lp::Part::low, 2}, b);
    const double high = lp::besov_norm(f, {1.0, 2.0, 1.0, lp::Part::high, 2}, b);
    CHECK(low + high == doctest::Approx(full).epsilon(1e-13));
    CHECK(low > 0.0);
    CHECK(high > 0.0);

    // Vector norm over one nonzero component equals the scalar norm.
    const VectorField v({f, ScalarField(g)});
    for (double p : {2.0, kInf}) {
        const lp::BesovNormSpec sp{0.0, p, 1.0, lp::Part::full, 2};
        CHECK(lp::besov_norm(v, sp, b) == doctest::Approx(lp::besov_norm(f, sp, b)).epsilon(1e-13));
    }
    // Tensor with equal off-diagonals: Frobenius counts them twice.
    SymTensorField t(g);
    t(0, 1) = f;
    for (double p : {2.0, kInf}) {
        const lp::BesovNormSpec sp{0.0, p, 1.0, lp::Part::full, 2};
        CHECK(lp::besov_norm(t, sp, b) ==
              doctest::Approx(std::sqrt(2.0) * lp::besov_norm(f, sp, b)).epsilon(1e-13));
    }
}

TEST_CASE("chemin-lerner: constant and exponential series")
{
    const Grid g(2, 32, 2 * kPi);
    const auto b = lp::build_blocks(g, 1);
    std::mt19937_64 rng(29);
    const ScalarField f = random_field(g, rng, 10);
    const lp::BesovNormSpec spec{0.5, 2.0, 1.0, lp::Part::full, 1};
    const double base = lp::besov_norm(f, spec, b);

    const std::vector<ScalarField> constant(11, f);
    const double dt = 0.3;
    CHECK(lp::chemin_lerner_norm(constant, dt, spec, kInf, b) == doctest::Approx(base).epsilon(1e-13));
    CHECK(lp::chemin_lerner_norm(constant, dt, spec, 1.0, b) ==
          doctest::Approx(3.0 * base).epsilon(1e-13));

    const int steps = 2000;
    const double h = 10.0 / steps;
    std::vector<ScalarField> decaying;
    for (int i = 0; i <= steps; ++i) {
        ScalarField fi = f;
        fi *= std::exp(-i * h);
        decaying.push_back(fi);
    }
    // Trapezoid error on e^{-t}: h^2/12 * (1 - e^{-10}).
    const double exact = (1.0 - std::exp(-10.0)) * base;
    CHECK(std::abs(lp::chemin_lerner_norm(decaying, h, spec, 1.0, b) - exact) < 1e-5 * base);

    CHECK_THROWS_AS(lp::chemin_lerner_norm(std::span(constant).first(1), dt, spec, 1.0, b),
                    std::invalid_argument);
    CHECK_THROWS_AS(lp::chemin_lerner_norm(constant, dt, spec, 2.0, b), std::invalid_argument);
}

TEST_CASE("bony: reconstruction on band-limited pairs")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField f = random_field(g, rng, 10);
        ScalarField gg = random_field(g, rng, 10);
        f += 0.3;
        gg -= 0.2;
        const auto parts = lp::bony_decompose(f, gg, b);
        ScalarField sum = parts.t_fg;
        sum += parts.t_gf;
        sum += parts.remainder;
        sum += parts.mean_product;
        const ScalarField product = f * gg;
        CHECK(max_abs_diff(sum, product) < 1e-10 * product.max_abs());
    }
}

TEST_CASE("bony: constant factor and separated frequencies")
{
    const Grid g(2, 64, 2 * kPi);
    const auto b = lp::build_blocks(g, 2);
    const ScalarField f = sample(g, [](const double* x) { return std::cos(3 * x[0]) + std::sin(x[1]); });
    const ScalarField c(g, 2.5);
    auto parts = lp::bony_decompose(f, c, b);
    CHECK(parts.t_fg.max_abs() < 1e-14);
    ScalarField rest = parts.t_gf;
    rest += parts.remainder;
    CHECK(max_abs_diff(rest, f * c) < 1e-13);

    // |xi| = 1 against |xi| = 16: every block pair is at least 2 apart.
    const ScalarField lo = sample(g, [](const double* x) { return std::cos(x[0]); });
    const ScalarField hi = sample(g, [](const double* x) { return std::sin(16 * x[1]); });
    parts = lp::bony_decompose(lo, hi, b);
    CHECK(parts.remainder.max_abs() < 1e-14);
    ScalarField t = parts.t_fg;
    t += parts.t_gf;
    CHECK(max_abs_diff(t, lo * hi) < 1e-13);

    CHECK_THROWS_AS(lp::bony_decompose(lo, ScalarField(Grid(2, 32, 2 * kPi)), b), std::invalid_argument);
}

TEST_CASE("filter csv export")
{
    const Grid g(2, 16, 2 * kPi);
    const auto b = lp::build_blocks(g, 1);
    std::ostringstream out;
    lp::write_filter_csv(out, b);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,xi,weight");
    int rows = 0;
    while (std::getline(in, line)) {
        int k = 0;
        double xi = 0.0;
        double w = 0.0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream row(line);
        row >> k >> c1 >> xi >> c2 >> w;
        REQUIRE(row);
        CHECK(b.resolved(k));
        CHECK(w == doctest::Approx(lp::phi(std::ldexp(xi, -k))).epsilon(1e-15));
        ++rows;
    }
    CHECK(rows > 0);
}
