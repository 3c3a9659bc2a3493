#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tentlab/grid.hpp"
#include "tentlab/operators.hpp"
#include "tentlab/weights.hpp"

using namespace tentlab;

namespace {

GridFn random_fn(const Box& box, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<size_t>(box.num_cells()));
    for (auto& x : v) x = dist(eng);
    return {box, std::move(v)};
}

// Cell-centered balls at every cell with radii j * (4h): fine enough that the
// family granularity stops dominating envelope comparisons.
BallFamily fine_family(const Box& box, int radius_step = 4) {
    std::vector<std::pair<long, double>> balls;
    const double h = box.cell_width();
    const double t_cap = 2.0 * box.half_width();
    for (long c = 0; c < box.num_cells(); ++c) {
        for (double t = radius_step * h; t <= t_cap; t += radius_step * h) {
            balls.emplace_back(c, t);
        }
    }
    return BallFamily::from_balls(box, balls);
}

}  // namespace

TEST_CASE("maximal function of a constant is that constant") {
    for (int dim : {1, 2}) {
        const Box box(dim, 1.5, dim == 1 ? 32 : 10);
        const BallFamily fam = BallFamily::dyadic(box);
        const GridFn f(box, 0.75);
        const GridFn mf = maximal(f, fam);
        for (long i = 0; i < mf.size(); ++i) {
            CHECK(mf[i] == doctest::Approx(0.75).epsilon(1e-14));
        }
    }
}

TEST_CASE("maximal function dominates, is sublinear, and is homogeneous") {
    const Box box(2, 1.0, 9);
    const BallFamily fam = BallFamily::dyadic(box);
    const GridFn f = random_fn(box, 101);
    const GridFn g = random_fn(box, 102);
    const GridFn mf = maximal(f, fam);
    const GridFn mg = maximal(g, fam);
    GridFn sum = f;
    for (long i = 0; i < sum.size(); ++i) sum[i] += g[i];
    const GridFn msum = maximal(sum, fam);
    GridFn scaled = f;
    for (long i = 0; i < scaled.size(); ++i) scaled[i] *= -3.0;
    const GridFn mscaled = maximal(scaled, fam);
    for (long i = 0; i < f.size(); ++i) {
        CHECK(mf[i] >= std::fabs(f[i]) - 1e-12);
        CHECK(msum[i] <= mf[i] + mg[i] + 1e-12);
        CHECK(mscaled[i] == doctest::Approx(3.0 * mf[i]).epsilon(1e-12));
    }
}

TEST_CASE("maximal function matches the brute-force scan on small grids") {
    for (int dim : {1, 2}) {
        const Box box(dim, 1.0, dim == 1 ? 8 : 5);
        const BallFamily fam = BallFamily::dyadic(box);
        const GridFn f = random_fn(box, 103u + static_cast<unsigned>(dim));
        const GridFn fast = maximal(f, fam);
        const GridFn slow = oracle::maximal(f, fam);
        for (long i = 0; i < f.size(); ++i) {
            CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("maximal function of an interval indicator follows the 1/x envelope") {
    const Box box(1, 4.0, 512);
    const GridFn f = indicator_interval(box, 0.0, 1.0);
    const GridFn mf = maximal(f, fine_family(box));
    // Inside the interval small interior balls average to exactly 1.
    for (double x : {0.2, 0.5, 0.8}) {
        CHECK(mf[box.cell_at(x)] == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (double x : {1.5, 2.0, 2.96875, 3.5}) {
        const long cell = box.cell_at(x);
        const double xc = box.axis_center(cell);
        const double ratio = xc * mf[cell];
        CHECK(ratio >= 0.85);
        CHECK(ratio <= 1.05);
    }
    for (double x : {-1.0, -2.5}) {
        const long cell = box.cell_at(x);
        const double xc = box.axis_center(cell);
        const double ratio = (1.0 - xc) * mf[cell];
        CHECK(ratio >= 0.85);
        CHECK(ratio <= 1.05);
    }
}

TEST_CASE("maximal function of a spike decays at the exact dyadic rate") {
    // With dyadic radii and separation 2^m h, the best ball holding both the
    // spike and the observation cell has exactly 2^{m+1} - 1 cells.
    const Box box(1, 4.0, 512);
    GridFn f(box, 0.0);
    const long spike = 256;
    f[spike] = 1.0;
    const GridFn mf = maximal(f, BallFamily::dyadic(box));
    for (long m : {5L, 6L, 7L}) {
        const long dist_cells = 1L << m;
        const double expected = 1.0 / static_cast<double>(2 * dist_cells - 1);
        CHECK(mf[spike + dist_cells] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(mf[spike - dist_cells] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("safety-factor operator-norm estimate") {
    const Box box(1, 4.0, 256);
    const BallFamily fam = BallFamily::dyadic(box);
    const Weight w = Weight::constant(box, 1.0);
    const GridFn one(box, 1.0);
    CHECK(maximal_opnorm_estimate(w, 2.0, {one}, fam) == doctest::Approx(2.0).epsilon(1e-13));

    const GridFn ind = indicator_interval(box, 0.0, 1.0);
    CHECK(maximal_opnorm_estimate(w, 2.0, {ind}, fam) >= 2.0 - 1e-12);

    // Deterministic: identical inputs give identical estimates.
    const GridFn probe = random_fn(box, 107, 0.0, 1.0);
    const Weight pw = Weight::power(box, 0.5);
    const double a = maximal_opnorm_estimate(pw, 2.0, {probe, ind}, fam);
    const double b = maximal_opnorm_estimate(pw, 2.0, {probe, ind}, fam);
    CHECK(a == b);
    CHECK(std::isfinite(a));

    CHECK_THROWS_AS((void)maximal_opnorm_estimate(w, 2.0, {}, fam), std::invalid_argument);
}

TEST_CASE("fractional maximal function: small-order limit and exact peak") {
    const Box box(1, 2.0, 256);
    const BallFamily dy = BallFamily::dyadic(box);
    const GridFn f = random_fn(box, 109, 0.0, 2.0);
    const GridFn m0 = maximal(f, dy);
    const GridFn ma = frac_maximal(f, 1e-9, dy);
    for (long i = 0; i < f.size(); ++i) {
        CHECK(ma[i] == doctest::Approx(m0[i]).epsilon(1e-6));
    }

    // For the [0,1) indicator seen through origin-centered balls, the value
    // sqrt(t) * covered-fraction peaks at exactly 1/2 when t = 1.
    const GridFn ind = indicator_interval(box, 0.0, 1.0);
    const BallFamily centered = BallFamily::at_point(box, 0.0, 0.0, {0.25, 0.5, 1.0, 2.0});
    const GridFn frac = frac_maximal(ind, 0.5, centered);
    const long near_origin = box.cell_at(0.5 * box.cell_width());
    CHECK(frac[near_origin] == doctest::Approx(0.5).epsilon(1e-13));

    const GridFn zero(box, 0.0);
    const GridFn mz = frac_maximal(zero, 0.5, dy);
    for (long i = 0; i < mz.size(); ++i) CHECK(mz[i] == 0.0);

    // Order zero degenerates to the plain maximal function exactly.
    const GridFn m00 = frac_maximal(f, 0.0, dy);
    for (long i = 0; i < f.size(); ++i) CHECK(m00[i] == m0[i]);

    CHECK_THROWS_AS((void)frac_maximal(f, -0.5, dy), std::invalid_argument);
    CHECK_THROWS_AS((void)frac_maximal(f, 1.0, dy), std::invalid_argument);
}

TEST_CASE("fractional integral: kernel values, self cell, linearity") {
    const Box box(1, 2.0, 256);
    const double h = box.cell_width();
    GridFn spike(box, 0.0);
    const long c0 = 128;
    spike[c0] = 1.0;
    const GridFn pot = riesz_potential(spike, 0.5);
    for (long d : {3L, 10L, 40L, 100L}) {
        const double dist = static_cast<double>(d) * h;
        const double expected = h / std::sqrt(dist);
        CHECK(pot[c0 + d] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(pot[c0 - d] == doctest::Approx(expected).epsilon(1e-12));
    }
    // Self cell: the exact integral of |z|^{-1/2} over one cell is 4 sqrt(h/2).
    CHECK(pot[c0] == doctest::Approx(4.0 * std::sqrt(h / 2.0)).epsilon(1e-12));

    const GridFn f = random_fn(box, 113);
    const GridFn g = random_fn(box, 114);
    GridFn mix(box, 0.0);
    for (long i = 0; i < mix.size(); ++i) mix[i] = 2.0 * f[i] - 0.5 * g[i];
    const GridFn pf = riesz_potential(f, 0.5);
    const GridFn pg = riesz_potential(g, 0.5);
    const GridFn pmix = riesz_potential(mix, 0.5);
    for (long i = 0; i < mix.size(); ++i) {
        CHECK(pmix[i] == doctest::Approx(2.0 * pf[i] - 0.5 * pg[i]).epsilon(1e-12));
    }

    const GridFn zero(box, 0.0);
    const GridFn pz = riesz_potential(zero, 0.5);
    for (long i = 0; i < pz.size(); ++i) CHECK(pz[i] == 0.0);
    CHECK_THROWS_AS((void)riesz_potential(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)riesz_potential(f, 1.0), std::invalid_argument);
}

TEST_CASE("two-dimensional fractional integral is finite and linear") {
    const Box box(2, 1.0, 24);
    const GridFn f = random_fn(box, 115);
    const GridFn pot = riesz_potential(f, 1.0);
    for (long i = 0; i < pot.size(); ++i) CHECK(std::isfinite(pot[i]));
    GridFn twice = f;
    for (long i = 0; i < twice.size(); ++i) twice[i] *= 2.0;
    const GridFn p2 = riesz_potential(twice, 1.0);
    for (long i = 0; i < p2.size(); ++i) {
        CHECK(p2[i] == doctest::Approx(2.0 * pot[i]).epsilon(1e-12));
    }
}

TEST_CASE("discrete Hilbert transform: oddness and the log kernel") {
    const Box box(1, 4.0, 512);
    const GridFn zero(box, 0.0);
    const GridFn hz = hilbert(zero);
    for (long i = 0; i < hz.size(); ++i) CHECK(hz[i] == 0.0);

    const GridFn ind = indicator_interval(box, -1.0, 1.0);
    const GridFn hind = hilbert(ind);
    const long n = box.num_cells();
    for (long i = 0; i < n; ++i) {
        CHECK(hind[i] == doctest::Approx(-hind[n - 1 - i]).epsilon(1e-12).scale(1.0));
    }
    for (double x : {1.5, 2.0, 3.0, -2.5}) {
        const long cell = box.cell_at(x);
        const double xc = box.axis_center(cell);
        const double expected = std::log(std::fabs((xc + 1.0) / (xc - 1.0)));
        CHECK(hind[cell] == doctest::Approx(expected).epsilon(2e-3));
    }

    const Box sq(2, 1.0, 8);
    CHECK_THROWS_AS((void)hilbert(GridFn(sq, 1.0)), std::invalid_argument);
}

TEST_CASE("scale families: identity, averaging, heat") {
    const Box box(1, 2.0, 128);
    const GridFn f = random_fn(box, 117);

    const OperatorFamily id = OperatorFamily::identity();
    const GridFn idf = family_apply(id, 0.5, f);
    for (long i = 0; i < f.size(); ++i) CHECK(idf[i] == f[i]);

    const OperatorFamily avg = OperatorFamily::averaging();
    const GridFn av = family_apply(avg, 0.5, f);
    const GridFn ref = ball_average_all(f, 0.5);
    for (long i = 0; i < f.size(); ++i) CHECK(av[i] == doctest::Approx(ref[i]).epsilon(1e-13));
    const GridFn c(box, 2.5);
    const GridFn avc = family_apply(avg, 0.3, c);
    for (long i = 0; i < avc.size(); ++i) CHECK(avc[i] == doctest::Approx(2.5).epsilon(1e-14));

    const OperatorFamily heat = OperatorFamily::heat();
    const GridFn one(box, 1.0);
    const GridFn h1 = family_apply(heat, 0.7, one);
    for (long i = 0; i < h1.size(); ++i) CHECK(h1[i] == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS((void)family_apply(avg, 0.0, f), std::invalid_argument);
    CHECK_THROWS_AS((void)family_apply(heat, -1.0, f), std::invalid_argument);

    CHECK(id.linear());
    CHECK(!id.scale_dependent());
    CHECK(avg.scale_dependent());
    CHECK(heat.scale_dependent());
    CHECK(!OperatorFamily::constant_maximal(BallFamily::dyadic(box)).linear());
    CHECK_THROWS_AS((void)id.family(), std::logic_error);
}

TEST_CASE("slicewise extension applies the operator level by level") {
    const Box box(1, 1.0, 32);
    const TLevels tl(0.25, 1.0, 4);
    HalfSpaceFn F(box, tl);
    for (int k = 0; k < tl.count(); ++k) F.set_slice(k, random_fn(box, 120u + static_cast<unsigned>(k)));

    const OperatorFamily avg = OperatorFamily::averaging();
    const HalfSpaceFn out = extend_slicewise(avg, F);
    for (int k = 0; k < tl.count(); ++k) {
        const GridFn ref = ball_average_all(F.slice_fn(k), tl.level(k));
        for (long i = 0; i < box.num_cells(); ++i) {
            CHECK(out.at(i, k) == doctest::Approx(ref[i]).epsilon(1e-13));
        }
    }

    // Constant-in-t input through a constant operator: every slice equal.
    const BallFamily dy = BallFamily::dyadic(box);
    const OperatorFamily mx = OperatorFamily::constant_maximal(dy);
    HalfSpaceFn G(box, tl);
    const GridFn base = random_fn(box, 131);
    for (int k = 0; k < tl.count(); ++k) G.set_slice(k, base);
    const HalfSpaceFn mg = extend_slicewise(mx, G);
    const GridFn mbase = maximal(base, dy);
    for (int k = 0; k < tl.count(); ++k) {
        for (long i = 0; i < box.num_cells(); ++i) {
            CHECK(mg.at(i, k) == doctest::Approx(mbase[i]).epsilon(1e-13));
        }
    }

    const HalfSpaceFn Z(box, tl, 0.0);
    const HalfSpaceFn mz = extend_slicewise(avg, Z);
    for (int k = 0; k < tl.count(); ++k) {
        for (long i = 0; i < box.num_cells(); ++i) CHECK(mz.at(i, k) == 0.0);
    }
}

TEST_CASE("strip geometry hits the requested separations exactly on the grid") {
    const Box box(1, 2.0, 128);
    const double h = box.cell_width();
    const double t = 0.25;
    const auto cases = strip_cases(box, {0.0, 1.0, 2.0, 4.0}, t);
    REQUIRE(cases.size() == 4);
    CHECK(cases[0].d == 0.0);
    CHECK(cases[0].E == cases[0].F);
    for (size_t i = 1; i < cases.size(); ++i) {
        const auto& c = cases[i];
        CHECK(!c.E.empty());
        CHECK(!c.F.empty());
        // Measured separation: the minimum center distance between the sets.
        double dmin = kInfinity;
        for (long e : c.E) {
            for (long f : c.F) {
                dmin = std::min(dmin, std::fabs(box.axis_center(e) - box.axis_center(f)));
            }
        }
        CHECK(dmin == doctest::Approx(c.d).epsilon(1e-13));
        CHECK(std::fabs(c.d - (0.0 + static_cast<double>(i == 1 ? 1 : (i == 2 ? 2 : 4))) * t) <=
              h + 1e-12);
    }
    CHECK_THROWS_AS((void)strip_cases(box, {-1.0}, t), std::invalid_argument);
    CHECK_THROWS_AS((void)strip_cases(box, {100.0}, t), std::invalid_argument);
}

TEST_CASE("identity family has no off-diagonal decay evidence") {
    const Box box(1, 2.0, 128);
    std::vector<GridFn> probes = {random_fn(box, 137, 0.1, 1.0), random_fn(box, 139, 0.1, 1.0)};
    const auto geometry = strip_cases(box, {0.0, 1.0, 2.0}, 0.25);
    const auto prof = offdiag_profile(OperatorFamily::identity(), 2.0, probes, geometry);
    REQUIRE(prof.points.size() == 3);
    CHECK(prof.points[0].ratio == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(prof.points[1].ratio == 0.0);
    CHECK(prof.points[2].ratio == 0.0);
    CHECK(!prof.fit_valid);
    CHECK(prof.has_cutoff_zero);
    CHECK(!prof.has_near_positive);
}

TEST_CASE("averaging family vanishes exactly beyond its radius") {
    const Box box(1, 2.0, 128);
    std::vector<GridFn> probes = {random_fn(box, 141, 0.1, 1.0)};
    const double t = 0.25;
    const auto geometry = strip_cases(box, {2.0, 3.0}, t);
    const auto prof = offdiag_profile(OperatorFamily::averaging(), 2.0, probes, geometry);
    for (const auto& pt : prof.points) {
        CHECK(pt.d >= t);
        CHECK(pt.ratio == 0.0);
    }
    CHECK(prof.has_cutoff_zero);
}

TEST_CASE("heat family decays faster than any claimed polynomial order") {
    const Box box(1, 2.0, 256);
    std::vector<GridFn> probes = {random_fn(box, 149, 0.1, 1.0), random_fn(box, 151, 0.1, 1.0)};
    const double t = 0.25;
    const auto geometry = strip_cases(box, {1.0, 2.0, 4.0, 8.0}, t);
    const auto prof = offdiag_profile(OperatorFamily::heat(), 2.0, probes, geometry);
    CHECK(prof.fit_valid);
    CHECK(prof.m_fit >= 5.0);
    for (const auto& pt : prof.points) CHECK(pt.ratio > 0.0);
}

TEST_CASE("off-diagonal fitting rejects sublinear families and bad inputs") {
    const Box box(1, 2.0, 64);
    const auto geometry = strip_cases(box, {1.0}, 0.25);
    std::vector<GridFn> probes = {GridFn(box, 1.0)};
    const OperatorFamily mx = OperatorFamily::constant_maximal(BallFamily::dyadic(box));
    CHECK_THROWS_AS((void)offdiag_profile(mx, 2.0, probes, geometry), std::invalid_argument);
    CHECK_THROWS_AS((void)offdiag_profile(OperatorFamily::heat(), 0.5, probes, geometry),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)offdiag_profile(OperatorFamily::heat(), 2.0, {}, geometry),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)offdiag_profile(OperatorFamily::heat(), 2.0, probes, {}),
                    std::invalid_argument);
}

TEST_CASE("cell-set restriction keeps exactly the named cells") {
    const Box box(1, 1.0, 16);
    const GridFn f = random_fn(box, 157);
    const std::vector<long> keep = {2, 5, 11};
    const GridFn masked = mask_cells(f, keep);
    for (long i = 0; i < f.size(); ++i) {
        const bool kept = std::find(keep.begin(), keep.end(), i) != keep.end();
        CHECK(masked[i] == (kept ? f[i] : 0.0));
    }
}
