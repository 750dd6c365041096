#include <doctest.h>

#include <cmath>
#include <sstream>

#include "restrictlab/errors.hpp"
#include "restrictlab/numerics.hpp"
#include "restrictlab/variation.hpp"

using namespace restrictlab;
using variation::Complex;
using variation::SampledPath;
using variation::ScaleGrid;

namespace {

ScaleGrid unit_grid(std::size_t n) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i + 1.0;
    return ScaleGrid(s);
}

std::vector<Complex> random_path(numerics::Rng& rng, std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& x : v) x = Complex(rng.normal(), rng.normal());
    return v;
}

}  // namespace

TEST_CASE("hand-computed variations") {
    const std::vector<Complex> mono = {0.0, 1.0, 2.0, 3.0};
    CHECK(variation::rho_variation(mono, 1.0).value == doctest::Approx(3.0));
    CHECK(variation::rho_variation(mono, 2.0).value == doctest::Approx(3.0));
    const std::vector<Complex> alt = {0.0, 1.0, 0.0, 1.0};
    const auto r = variation::rho_variation(alt, 2.0);
    CHECK(r.value == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.witness == std::vector<std::size_t>{0, 1, 2, 3});
    const auto flat = variation::rho_variation(std::vector<Complex>(5, Complex(2.0, 1.0)), 2.0);
    CHECK(flat.value == 0.0);
    CHECK(flat.witness == std::vector<std::size_t>{0});
    CHECK(variation::maximal(alt) == 1.0);
    CHECK(variation::maximal(std::vector<Complex>{}) == 0.0);
}

TEST_CASE("dynamic programming equals exhaustive search") {
    numerics::Rng rng(2024);
    for (int c = 0; c < 300; ++c) {
        const auto n = static_cast<std::size_t>(rng.integer(2, 12));
        const SampledPath path(unit_grid(n), random_path(rng, n));
        for (double rho : {1.0, 1.5, 2.0, 3.7, 8.0}) {
            const auto dp = variation::rho_variation(path, rho);
            const double brute = variation::brute_force_variation(path, rho);
            CHECK(std::fabs(dp.value - brute) <= 1e-12 * std::max(1.0, brute));
            CHECK(variation::partition_sum(path.values, dp.witness, rho) == doctest::Approx(dp.value).epsilon(1e-13));
        }
    }
}

TEST_CASE("monotone in rho and under refinement") {
    numerics::Rng rng(99);
    for (int c = 0; c < 200; ++c) {
        const auto v = random_path(rng, 10);
        double prev = variation::rho_variation(v, 1.0).value;
        for (double rho : {1.3, 2.0, 2.5, 4.0, 10.0}) {
            const double cur = variation::rho_variation(v, rho).value;
            CHECK(cur <= prev * (1.0 + 1e-12));
            prev = cur;
        }
        auto coarse = v;
        coarse.erase(coarse.begin() + rng.integer(0, 9));
        CHECK(variation::rho_variation(coarse, 2.0).value <= variation::rho_variation(v, 2.0).value * (1.0 + 1e-12));
        CHECK(variation::maximal(v) <= std::abs(v[0]) + variation::rho_variation(v, 2.0).value + 1e-12);
    }
}

TEST_CASE("dyadic grids mark exact powers of two") {
    const auto g = ScaleGrid::dyadic(-2, 3, 4);
    CHECK(g.size() == 21);
    CHECK(g[0] == 0.25);
    CHECK(g[20] == 8.0);
    CHECK(g.anchors() == std::vector<std::size_t>{0, 4, 8, 12, 16, 20});
    CHECK(g[8] == 1.0);
    CHECK(g.is_anchor(12));
    CHECK_FALSE(g.is_anchor(13));
    const auto h = g.scaled(2.0);
    CHECK(h[0] == 0.5);
    CHECK(h.anchors().size() == 6);
    CHECK_THROWS_AS(ScaleGrid({1.0}), ShapeError);
    CHECK_THROWS_AS(ScaleGrid({1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(ScaleGrid({-1.0, 1.0}), DomainError);
}

TEST_CASE("long and short variations") {
    numerics::Rng rng(5);
    for (int c = 0; c < 200; ++c) {
        const auto grid = ScaleGrid::dyadic(0, 4, static_cast<int>(rng.integer(1, 8)));
        const SampledPath path(grid, random_path(rng, grid.size()));
        for (double rho : {1.5, 2.0, 4.0}) {
            const auto s = variation::long_short_split(path, rho);
            CHECK(s.shorts.size() == 4);
            CHECK(s.full == doctest::Approx(variation::rho_variation(path, rho).value));
            CHECK(s.full <= s.combined_bound * (1.0 + 1e-12));
            CHECK(s.long_variation <= s.full * (1.0 + 1e-12));
            for (double v : s.shorts) CHECK(v <= s.full * (1.0 + 1e-12));
        }
    }
    const SampledPath off(ScaleGrid({1.0, 1.5, 3.0}), {0.0, 1.0, 2.0});
    CHECK_THROWS_AS(variation::long_short_split(off, 2.0), ShapeError);
    const SampledPath gap(ScaleGrid({1.0, 4.0}), {0.0, 1.0});
    CHECK_THROWS_AS(variation::long_short_split(gap, 2.0), ShapeError);
}

TEST_CASE("errors and csv") {
    CHECK_THROWS_AS(variation::rho_variation(std::vector<Complex>{0.0, 1.0}, 0.5), DomainError);
    CHECK_THROWS_AS(SampledPath(unit_grid(3), {0.0, 1.0}), ShapeError);
    CHECK_THROWS_AS(variation::brute_force_variation(SampledPath(unit_grid(15), std::vector<Complex>(15)), 2.0),
                    ShapeError);
    std::ostringstream os;
    variation::write_csv(os, SampledPath(unit_grid(2), {Complex(1.0, -2.0), 0.5}));
    CHECK(os.str() == "scale,re,im\n1,1,-2\n2,0.5,0\n");
}
