#include "tentlab/tent.hpp"

#include <cmath>
#include <stdexcept>

namespace tentlab {

ConeQuadrature::ConeQuadrature(const Box& b, const TLevels& tl, double beta_)
    : box(b), tlevels(tl), beta(beta_) {
    if (!(beta > 0.0)) throw std::invalid_argument("ConeQuadrature: aperture must be positive");
    shapes.reserve(static_cast<size_t>(tl.count()));
    for (int k = 0; k < tl.count(); ++k) shapes.push_back(make_ball_shape(box, beta * tl.level(k)));
}

std::vector<long> ConeQuadrature::members(long cell, int k) const {
    return DiscreteBall::at_cell(box, cell, beta * tlevels.level(k)).members;
}

double ConeQuadrature::measure(long cell, int k) const {
    const BallShape& s = shape(k);
    long count = 0;
    const long n = box.cells_per_axis();
    if (box.dim() == 1) {
        const long lo = std::max<long>(0, cell - s.hw(0));
        const long hi = std::min<long>(n - 1, cell + s.hw(0));
        count = hi - lo + 1;
    } else {
        const long ix = box.ix_of(cell), iy = box.iy_of(cell);
        for (int dy = -s.reach; dy <= s.reach; ++dy) {
            const long y = iy + dy;
            if (y < 0 || y >= n || s.hw(dy) < 0) continue;
            const long lo = std::max<long>(0, ix - s.hw(dy));
            const long hi = std::min<long>(n - 1, ix + s.hw(dy));
            count += hi - lo + 1;
        }
    }
    return static_cast<double>(count) * box.cell_volume();
}

GridFn cone_functional(const HalfSpaceFn& F, double r, double beta, ConeMode mode) {
    if (!(r > 0.0)) throw std::invalid_argument("cone_functional: r must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("cone_functional: aperture must be positive");
    const Box& box = F.box();
    const TLevels& tl = F.tlevels();
    const long total = box.num_cells();
    const int dim = box.dim();
    const double delta = tl.log_step();
    const double hn = box.cell_volume();
    const double vn_bn = unit_ball_volume(dim) * std::pow(beta, dim);

    std::vector<double> acc(static_cast<size_t>(total), 0.0);
    std::vector<double> slice_r(static_cast<size_t>(total));
    for (int k = 0; k < tl.count(); ++k) {
        const double t = tl.level(k);
        const BallShape shape = make_ball_shape(box, beta * t);
        const std::span<const double> sl = F.slice(k);
        for (long i = 0; i < total; ++i)
            slice_r[static_cast<size_t>(i)] = std::pow(std::abs(sl[static_cast<size_t>(i)]), r);
        const PrefixGrid pg(GridFn(box, slice_r));
        if (mode == ConeMode::FubiniExact) {
            const double scale = delta * hn / std::pow(t, dim);
#pragma omp parallel for schedule(static)
            for (long i = 0; i < total; ++i)
                acc[static_cast<size_t>(i)] += scale * pg.ball_sum(i, shape);
        } else {
            const double scale = delta * vn_bn;
#pragma omp parallel for schedule(static)
            for (long i = 0; i < total; ++i) {
                double s = 0.0;
                long c = 0;
                pg.ball_sum_count(i, shape, s, c);
                acc[static_cast<size_t>(i)] += scale * s / static_cast<double>(c);
            }
        }
    }
    const double inv_r = 1.0 / r;
    for (long i = 0; i < total; ++i)
        acc[static_cast<size_t>(i)] = std::pow(acc[static_cast<size_t>(i)], inv_r);
    return GridFn(box, std::move(acc));
}

double tent_norm(const HalfSpaceFn& F, double r, double p, const Weight& w) {
    return lp_norm(cone_functional(F, r, 1.0), p, w);
}

double tent_lorentz_norm(const HalfSpaceFn& F, double r, double p, double s, const Weight& w) {
    return lorentz_quasinorm(cone_functional(F, r, 1.0), p, s, w);
}

FubiniResidual fubini_identity_residual(const HalfSpaceFn& F, double r, const Weight& w) {
    if (!(r > 0.0)) throw std::invalid_argument("fubini_identity_residual: r must be positive");
    const Box& box = F.box();
    if (!(box == w.box()))
        throw std::invalid_argument("fubini_identity_residual: weight box mismatch");
    const TLevels& tl = F.tlevels();
    const long total = box.num_cells();
    const double delta = tl.log_step();
    const double hn = box.cell_volume();

    FubiniResidual res;
    res.lhs = std::pow(tent_norm(F, r, r, w), r);

    // Right-hand side: per level, the slice norm against the ball-averaged
    // weight times the discrete ball measure over t^n.
    const PrefixGrid counts(GridFn(box, 1.0));
    double rhs = 0.0;
    for (int k = 0; k < tl.count(); ++k) {
        const double t = tl.level(k);
        const BallShape shape = make_ball_shape(box, t);
        const Weight wt = averaged_weight(w, t);
        const double tn = std::pow(t, box.dim());
        std::vector<double> mod(static_cast<size_t>(total));
        for (long i = 0; i < total; ++i) {
            const double count = static_cast<double>(counts.ball_count(i, shape));
            mod[static_cast<size_t>(i)] = wt.value(i) * (count * hn / tn);
        }
        const double term = lp_norm(F.slice_fn(k), r, GridFn(box, std::move(mod)));
        rhs += delta * std::pow(term, r);
    }
    res.rhs = rhs;
    constexpr double kTiny = 1e-300;
    res.rel_error = std::abs(res.lhs - res.rhs) / std::max(res.lhs, kTiny);
    return res;
}

double change_of_aperture_ratio(const HalfSpaceFn& G, double r, const Weight& w) {
    const double denom = lp_norm(cone_functional(G, r, 1.0), 1.0, w);
    if (denom == 0.0)
        throw std::runtime_error("change_of_aperture_ratio: degenerate input (zero aperture-1 norm)");
    const double numer = lp_norm(cone_functional(G, r, 2.0), 1.0, w);
    return numer / denom;
}

}  // namespace tentlab
