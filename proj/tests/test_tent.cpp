#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tentlab/grid.hpp"
#include "tentlab/tent.hpp"
#include "tentlab/weights.hpp"

using namespace tentlab;

namespace {

HalfSpaceFn random_hs(const Box& box, const TLevels& tl, unsigned seed, double lo = -1.0,
                      double hi = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<size_t>(box.num_cells()) * static_cast<size_t>(tl.count()));
    for (auto& x : v) x = dist(eng);
    return {box, tl, std::move(v)};
}

Weight random_weight(const Box& box, unsigned seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(0.2, 3.0);
    std::vector<double> v(static_cast<size_t>(box.num_cells()));
    for (auto& x : v) x = dist(eng);
    return Weight::sampled(GridFn(box, std::move(v)), "random");
}

}  // namespace

TEST_CASE("cone functional of zero is zero") {
    const Box box(1, 1.0, 16);
    const TLevels tl(0.25, 1.0, 4);
    const HalfSpaceFn F(box, tl, 0.0);
    for (auto mode : {ConeMode::FubiniExact, ConeMode::Continuum}) {
        const GridFn a = cone_functional(F, 2.0, 1.0, mode);
        for (long i = 0; i < a.size(); ++i) CHECK(a[i] == 0.0);
    }
}

TEST_CASE("cone quadrature shares ball membership with the rest of the library") {
    const Box box(2, 1.0, 8);
    const TLevels tl(0.3, 1.4, 3);
    const ConeQuadrature q(box, tl, 2.0);
    for (int k = 0; k < tl.count(); ++k) {
        for (long cell : {0L, 27L, 63L}) {
            const auto ref = DiscreteBall::at_cell(box, cell, 2.0 * tl.level(k));
            CHECK(q.members(cell, k) == ref.members);
            CHECK(q.measure(cell, k) == doctest::Approx(ref.measure));
        }
    }
}

TEST_CASE("cone functional matches the brute-force triple loop on small grids") {
    for (int dim : {1, 2}) {
        const Box box(dim, 1.0, dim == 1 ? 8 : 6);
        const TLevels tl(0.3, 1.5, 4);
        const HalfSpaceFn F = random_hs(box, tl, 200u + static_cast<unsigned>(dim));
        for (double r : {1.0, 2.0, 3.0}) {
            for (double beta : {1.0, 2.0}) {
                for (auto mode : {ConeMode::FubiniExact, ConeMode::Continuum}) {
                    const GridFn fast = cone_functional(F, r, beta, mode);
                    const GridFn slow = oracle::cone_functional(F, r, beta, mode);
                    for (long i = 0; i < fast.size(); ++i) {
                        CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("continuum cone over a height slab integrates to the exact log measure") {
    // Levels between 1 and 2 carry exactly log 2 of dt/t mass, so for F = 1
    // on that slab the continuum cone gives (2 log 2)^{1/r} at every cell.
    const Box box(1, 2.0, 64);
    const TLevels tl(0.25, 4.0, 48);
    HalfSpaceFn F(box, tl);
    int in_band = 0;
    for (int k = 0; k < tl.count(); ++k) {
        if (tl.level(k) >= 1.0 && tl.level(k) < 2.0) {
            F.set_slice(k, GridFn(box, 1.0));
            ++in_band;
        }
    }
    CHECK(in_band == 12);
    for (double r : {1.0, 2.0, 3.0}) {
        const GridFn a = cone_functional(F, r, 1.0, ConeMode::Continuum);
        const double expected = std::pow(2.0 * std::log(2.0), 1.0 / r);
        for (long i = 0; i < a.size(); ++i) {
            CHECK(a[i] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("cone functional is monotone in aperture and in the argument") {
    const Box box(1, 2.0, 48);
    const TLevels tl(0.25, 1.5, 6);
    const HalfSpaceFn F = random_hs(box, tl, 211);
    const GridFn a1 = cone_functional(F, 2.0, 1.0);
    const GridFn a2 = cone_functional(F, 2.0, 2.0);
    for (long i = 0; i < a1.size(); ++i) CHECK(a1[i] <= a2[i] + 1e-12);

    HalfSpaceFn G = F;
    for (int k = 0; k < tl.count(); ++k) {
        for (long i = 0; i < box.num_cells(); ++i) {
            G.at(i, k) = std::fabs(G.at(i, k)) + 0.1;
        }
    }
    const GridFn aF = cone_functional(F, 2.0, 1.0);
    const GridFn aG = cone_functional(G, 2.0, 1.0);
    for (long i = 0; i < aF.size(); ++i) CHECK(aF[i] <= aG[i] + 1e-12);
}

TEST_CASE("cone functional is homogeneous and r-subadditive") {
    const Box box(2, 1.0, 8);
    const TLevels tl(0.3, 1.2, 4);
    const HalfSpaceFn F = random_hs(box, tl, 223);
    const HalfSpaceFn G = random_hs(box, tl, 227);
    for (double r : {1.0, 2.0, 3.0}) {
        const GridFn aF = cone_functional(F, r, 1.0);
        const GridFn aG = cone_functional(G, r, 1.0);
        HalfSpaceFn scaled = F;
        for (int k = 0; k < tl.count(); ++k) {
            for (long i = 0; i < box.num_cells(); ++i) scaled.at(i, k) *= -2.0;
        }
        const GridFn aS = cone_functional(scaled, r, 1.0);
        HalfSpaceFn sum = F;
        for (int k = 0; k < tl.count(); ++k) {
            for (long i = 0; i < box.num_cells(); ++i) sum.at(i, k) += G.at(i, k);
        }
        const GridFn aSum = cone_functional(sum, r, 1.0);
        for (long i = 0; i < aF.size(); ++i) {
            CHECK(aS[i] == doctest::Approx(2.0 * aF[i]).epsilon(1e-12));
            CHECK(aSum[i] <= aF[i] + aG[i] + 1e-12);
        }
    }
    CHECK_THROWS_AS((void)cone_functional(F, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)cone_functional(F, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("tent norms are the weighted norms of the aperture-one cone") {
    const Box box(1, 2.0, 32);
    const TLevels tl(0.25, 1.0, 5);
    const HalfSpaceFn F = random_hs(box, tl, 229);
    const Weight w = random_weight(box, 231);
    const GridFn cone = cone_functional(F, 2.0, 1.0);
    for (double p : {1.0, 2.0, 3.5}) {
        CHECK(tent_norm(F, 2.0, p, w) == doctest::Approx(lp_norm(cone, p, w)).epsilon(1e-13));
        CHECK(tent_lorentz_norm(F, 2.0, p, p, w) ==
              doctest::Approx(tent_norm(F, 2.0, p, w)).epsilon(1e-12));
        CHECK(tent_lorentz_norm(F, 2.0, p, kInfinity, w) <=
              tent_norm(F, 2.0, p, w) * (1 + 1e-12));
    }
}

TEST_CASE("reassociation identity holds to rounding error") {
    const Box box1(1, 2.0, 64);
    const TLevels tl1(0.25, 2.0, 16);
    const HalfSpaceFn F1 = random_hs(box1, tl1, 233);
    const Weight w1 = random_weight(box1, 239);
    for (double r : {1.5, 2.0, 3.0}) {
        const auto res = fubini_identity_residual(F1, r, w1);
        CHECK(res.rel_error <= 1e-10);
        CHECK(res.lhs > 0.0);
    }

    const Box box2(2, 2.0, 32);
    const TLevels tl2(0.25, 2.0, 8);
    const HalfSpaceFn F2 = random_hs(box2, tl2, 241);
    const Weight w2 = Weight::step(box2, 1.0, 4.0);
    const auto res2 = fubini_identity_residual(F2, 2.0, w2);
    CHECK(res2.rel_error <= 1e-10);

    const HalfSpaceFn Z(box1, tl1, 0.0);
    const auto rz = fubini_identity_residual(Z, 2.0, w1);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs == 0.0);
    CHECK(rz.rel_error == 0.0);
}

TEST_CASE("aperture doubling never shrinks the tent mass") {
    const Box box(1, 2.0, 64);
    const TLevels tl(0.25, 1.0, 6);
    const Weight w = random_weight(box, 251);
    for (unsigned seed : {253u, 257u, 263u}) {
        const HalfSpaceFn G = random_hs(box, tl, seed, 0.0, 1.0);
        CHECK(change_of_aperture_ratio(G, 2.0, w) >= 1.0 - 1e-12);
    }
    const HalfSpaceFn Z(box, tl, 0.0);
    CHECK_THROWS_AS((void)change_of_aperture_ratio(Z, 2.0, w), std::runtime_error);
}

TEST_CASE("aperture ratio of a mid-height spike doubles the shadow") {
    const Box box(1, 2.0, 128);
    const TLevels tl(0.25, 1.0, 4);
    HalfSpaceFn G(box, tl, 0.0);
    G.at(box.cell_at(0.0), 2) = 1.0;
    const Weight w = Weight::constant(box, 1.0);
    CHECK(change_of_aperture_ratio(G, 2.0, w) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("saturated cones make the aperture ratio collapse to one") {
    // Every cross-section at these heights already covers the whole box, so
    // widening the aperture changes nothing.
    const Box box(1, 2.0, 64);
    const TLevels tl(8.0, 32.0, 4);
    const HalfSpaceFn G(box, tl, 1.0);
    const Weight w = Weight::constant(box, 1.0);
    CHECK(change_of_aperture_ratio(G, 2.0, w) == doctest::Approx(1.0).epsilon(1e-13));
}
