#include "tentlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tentlab/numfmt.hpp"

namespace tentlab {

// ---------------------------------------------------------------------------
// Maximal operators
// ---------------------------------------------------------------------------

namespace {

double avg_over_members(const DiscreteBall& b, const GridFn& arr) {
    double s = 0.0;
    for (long m : b.members) s += arr[m];
    return s / static_cast<double>(b.members.size());
}

// Shared kernel: out(x) = max over family balls containing x of
// scale(radius) * avg_B |f|.
template <typename Scale>
GridFn scaled_maximal(const GridFn& f, const BallFamily& family, Scale scale) {
    if (!(f.box() == family.box)) throw std::invalid_argument("maximal: family box mismatch");
    if (family.groups.empty()) throw std::invalid_argument("maximal: empty ball family");
    const Box& box = f.box();
    const GridFn fa = f.abs();
    std::vector<double> out(static_cast<size_t>(box.num_cells()), 0.0);
    for (const auto& grp : family.groups) {
        const double c = scale(grp.radius);
        if (grp.all_cells) {
            // Because the membership predicate is symmetric, "balls containing
            // x" are exactly the balls centered in B(x, t): take the ball
            // average field and dilate it with the same footprint.
            GridFn avg = ball_average_all(fa, grp.radius);
            if (c != 1.0)
                for (long i = 0; i < avg.size(); ++i) avg[i] *= c;
            const GridFn dil = ball_max_all(avg, grp.radius);
            for (long i = 0; i < dil.size(); ++i)
                out[static_cast<size_t>(i)] = std::max(out[static_cast<size_t>(i)], dil[i]);
            continue;
        }
        for (long cell : grp.center_cells) {
            const DiscreteBall b = DiscreteBall::at_cell(box, cell, grp.radius);
            const double a = c * avg_over_members(b, fa);
            for (long m : b.members)
                out[static_cast<size_t>(m)] = std::max(out[static_cast<size_t>(m)], a);
        }
        for (const auto& pt : grp.center_points) {
            const DiscreteBall b = DiscreteBall::at_point(box, pt[0], pt[1], grp.radius);
            if (b.members.empty()) continue;
            const double a = c * avg_over_members(b, fa);
            for (long m : b.members)
                out[static_cast<size_t>(m)] = std::max(out[static_cast<size_t>(m)], a);
        }
    }
    return GridFn(box, std::move(out));
}

}  // namespace

GridFn maximal(const GridFn& f, const BallFamily& family) {
    return scaled_maximal(f, family, [](double) { return 1.0; });
}

GridFn frac_maximal(const GridFn& f, double alpha, const BallFamily& family) {
    if (!(alpha >= 0.0) || alpha >= static_cast<double>(f.box().dim()))
        throw std::invalid_argument("frac_maximal: need 0 <= alpha < n");
    return scaled_maximal(f, family, [alpha](double t) { return std::pow(t, alpha); });
}

double maximal_opnorm_estimate(const Weight& w, double p, const std::vector<GridFn>& probes,
                               const BallFamily& family) {
    if (probes.empty()) throw std::invalid_argument("maximal_opnorm_estimate: no probes");
    double best = 0.0;
    bool any = false;
    for (const GridFn& f : probes) {
        const double denom = lp_norm(f, p, w);
        if (denom == 0.0) continue;
        any = true;
        best = std::max(best, lp_norm(maximal(f, family), p, w) / denom);
    }
    if (!any) throw std::invalid_argument("maximal_opnorm_estimate: all probes vanish");
    return 2.0 * best;
}

// ---------------------------------------------------------------------------
// Singular / fractional integrals
// ---------------------------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iterations on
// the Legendre recurrence; deterministic to machine precision.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<size_t>(i)] = x;
        weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

// integral over one square cell of |z|^(alpha-2), divided by h^2:
// (8/alpha) (h/2)^alpha Int_0^{pi/4} sec^alpha  / h^2, angular part by quadrature.
double riesz_self_cell_2d(double h, double alpha) {
    std::vector<double> xs, ws;
    gauss_legendre(32, xs, ws);
    const double a = 0.0, b = std::numbers::pi / 4.0;
    double integral = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double theta = 0.5 * (b - a) * xs[i] + 0.5 * (b + a);
        integral += ws[i] * std::pow(std::cos(theta), -alpha);
    }
    integral *= 0.5 * (b - a);
    return (8.0 / alpha) * std::pow(0.5 * h, alpha) * integral / (h * h);
}

}  // namespace

GridFn riesz_potential(const GridFn& f, double alpha) {
    const Box& box = f.box();
    const int n = box.dim();
    if (!(alpha > 0.0) || !(alpha < static_cast<double>(n)))
        throw std::invalid_argument("riesz_potential: need 0 < alpha < n");
    const double h = box.cell_width();
    const long nc = box.cells_per_axis();

    if (n == 1) {
        std::vector<double> kern(static_cast<size_t>(nc));
        kern[0] = 2.0 * std::pow(0.5 * h, alpha) / (alpha * h);  // exact cell average of |z|^(a-1)
        for (long d = 1; d < nc; ++d)
            kern[static_cast<size_t>(d)] = std::pow(static_cast<double>(d) * h, alpha - 1.0);
        std::vector<double> out(static_cast<size_t>(nc), 0.0);
#pragma omp parallel for schedule(static)
        for (long i = 0; i < nc; ++i) {
            double acc = 0.0;
            for (long j = 0; j < nc; ++j) acc += kern[static_cast<size_t>(std::labs(i - j))] * f[j];
            out[static_cast<size_t>(i)] = acc * h;
        }
        return GridFn(box, std::move(out));
    }

    std::vector<double> kern(static_cast<size_t>(nc) * static_cast<size_t>(nc));
    kern[0] = riesz_self_cell_2d(h, alpha);
    for (long dy = 0; dy < nc; ++dy)
        for (long dx = 0; dx < nc; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double ddx = static_cast<double>(dx) * h, ddy = static_cast<double>(dy) * h;
            kern[static_cast<size_t>(dy) * static_cast<size_t>(nc) + static_cast<size_t>(dx)] =
                std::pow(std::sqrt(ddx * ddx + ddy * ddy), alpha - 2.0);
        }
    const long total = box.num_cells();
    std::vector<double> out(static_cast<size_t>(total), 0.0);
    const double vol = box.cell_volume();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) {
        const long ix = box.ix_of(i), iy = box.iy_of(i);
        double acc = 0.0;
        for (long jy = 0; jy < nc; ++jy) {
            const size_t krow = static_cast<size_t>(std::labs(iy - jy)) * static_cast<size_t>(nc);
            const long frow = jy * nc;
            for (long jx = 0; jx < nc; ++jx)
                acc += kern[krow + static_cast<size_t>(std::labs(ix - jx))] * f[frow + jx];
        }
        out[static_cast<size_t>(i)] = acc * vol;
    }
    return GridFn(box, std::move(out));
}

GridFn hilbert(const GridFn& f) {
    const Box& box = f.box();
    if (box.dim() != 1) throw std::invalid_argument("hilbert: 1D only");
    const long nc = box.cells_per_axis();
    std::vector<double> out(static_cast<size_t>(nc), 0.0);
    // h * sum_{j != i} f(j) / ((i-j) h) = sum_{j != i} f(j) / (i-j): exact
    // antisymmetry of the kernel survives in floating point.
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nc; ++i) {
        double acc = 0.0;
        for (long j = 0; j < nc; ++j) {
            if (j == i) continue;
            acc += f[j] / static_cast<double>(i - j);
        }
        out[static_cast<size_t>(i)] = acc;
    }
    return GridFn(box, std::move(out));
}

// ---------------------------------------------------------------------------
// OperatorFamily
// ---------------------------------------------------------------------------

OperatorFamily OperatorFamily::averaging() {
    return OperatorFamily(Kind::Averaging, BaseOp::None, 0.0, nullptr);
}
OperatorFamily OperatorFamily::heat() { return OperatorFamily(Kind::Heat, BaseOp::None, 0.0, nullptr); }
OperatorFamily OperatorFamily::identity() {
    return OperatorFamily(Kind::Identity, BaseOp::None, 0.0, nullptr);
}
OperatorFamily OperatorFamily::constant_maximal(BallFamily family) {
    return OperatorFamily(Kind::Constant, BaseOp::Maximal, 0.0,
                          std::make_shared<const BallFamily>(std::move(family)));
}
OperatorFamily OperatorFamily::constant_hilbert() {
    return OperatorFamily(Kind::Constant, BaseOp::Hilbert, 0.0, nullptr);
}
OperatorFamily OperatorFamily::constant_riesz(double alpha) {
    return OperatorFamily(Kind::Constant, BaseOp::RieszPotential, alpha, nullptr);
}

const BallFamily& OperatorFamily::family() const {
    if (!family_) throw std::logic_error("OperatorFamily: no ball family attached");
    return *family_;
}

std::string OperatorFamily::name() const {
    switch (kind_) {
        case Kind::Averaging: return "averaging";
        case Kind::Heat: return "heat";
        case Kind::Identity: return "identity";
        case Kind::Constant:
            switch (base_) {
                case BaseOp::Maximal: return "maximal";
                case BaseOp::Hilbert: return "hilbert";
                case BaseOp::RieszPotential: return "riesz(" + fmt_g17(alpha_) + ")";
                default: break;
            }
    }
    return "unknown";
}

GridFn heat_apply(const GridFn& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_apply: need t > 0");
    const Box& box = f.box();
    const long nc = box.cells_per_axis();
    const double h = box.cell_width();
    std::vector<double> kern(static_cast<size_t>(nc));
    for (long d = 0; d < nc; ++d) {
        const double z = static_cast<double>(d) * h;
        kern[static_cast<size_t>(d)] = std::exp(-z * z / (4.0 * t * t));
    }
    auto pass = [&](const std::vector<double>& in, std::vector<double>& res, long rows, long stride,
                    long row_stride) {
        // Convolve along one axis with per-position renormalization so the
        // clipped kernel keeps unit mass on the box.
#pragma omp parallel for schedule(static)
        for (long r = 0; r < rows; ++r) {
            const long base = r * row_stride;
            for (long i = 0; i < nc; ++i) {
                double acc = 0.0, norm = 0.0;
                for (long j = 0; j < nc; ++j) {
                    const double k = kern[static_cast<size_t>(std::labs(i - j))];
                    acc += k * in[static_cast<size_t>(base + j * stride)];
                    norm += k;
                }
                res[static_cast<size_t>(base + i * stride)] = acc / norm;
            }
        }
    };
    if (box.dim() == 1) {
        std::vector<double> out(static_cast<size_t>(nc));
        pass(f.values(), out, 1, 1, 0);
        return GridFn(box, std::move(out));
    }
    std::vector<double> mid(static_cast<size_t>(box.num_cells()));
    std::vector<double> out(static_cast<size_t>(box.num_cells()));
    pass(f.values(), mid, nc, 1, nc);  // along x, row by row
    pass(mid, out, nc, nc, 1);         // along y, column by column
    return GridFn(box, std::move(out));
}

GridFn family_apply(const OperatorFamily& fam, double t, const GridFn& f) {
    switch (fam.kind()) {
        case OperatorFamily::Kind::Averaging: return ball_average_all(f, t);
        case OperatorFamily::Kind::Heat: return heat_apply(f, t);
        case OperatorFamily::Kind::Identity: return f;
        case OperatorFamily::Kind::Constant:
            switch (fam.base()) {
                case OperatorFamily::BaseOp::Maximal: return maximal(f, fam.family());
                case OperatorFamily::BaseOp::Hilbert: return hilbert(f);
                case OperatorFamily::BaseOp::RieszPotential: return riesz_potential(f, fam.alpha());
                default: break;
            }
    }
    throw std::logic_error("family_apply: unhandled operator family");
}

HalfSpaceFn extend_slicewise(const OperatorFamily& fam, const HalfSpaceFn& F) {
    HalfSpaceFn out(F.box(), F.tlevels(), 0.0);
    for (int k = 0; k < F.tlevels().count(); ++k)
        out.set_slice(k, family_apply(fam, F.tlevels().level(k), F.slice_fn(k)));
    return out;
}

// ---------------------------------------------------------------------------
// Off-diagonal decay
// ---------------------------------------------------------------------------

GridFn mask_cells(const GridFn& f, const std::vector<long>& cells) {
    std::vector<double> v(static_cast<size_t>(f.size()), 0.0);
    for (long c : cells) v[static_cast<size_t>(c)] = f[c];
    return GridFn(f.box(), std::move(v));
}

namespace {

std::vector<long> x_strip(const Box& box, long ix_lo, long ix_hi) {
    std::vector<long> cells;
    const long n = box.cells_per_axis();
    if (box.dim() == 1) {
        for (long i = ix_lo; i <= ix_hi; ++i) cells.push_back(i);
        return cells;
    }
    for (long y = 0; y < n; ++y)
        for (long i = ix_lo; i <= ix_hi; ++i) cells.push_back(box.index_of(i, y));
    return cells;
}

}  // namespace

std::vector<OffDiagCase> strip_cases(const Box& box, const std::vector<double>& d_over_t, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("strip_cases: need t > 0");
    const long n = box.cells_per_axis();
    const double h = box.cell_width();
    std::vector<OffDiagCase> out;
    for (double ratio : d_over_t) {
        if (ratio < 0.0) throw std::invalid_argument("strip_cases: separations must be >= 0");
        OffDiagCase c;
        c.t = t;
        if (ratio == 0.0) {
            c.F = x_strip(box, 0, n / 2 - 1);
            c.E = c.F;
            c.d = 0.0;
        } else {
            // gap of g empty cells => exact center-set distance (g+1) h
            long gap = std::lround(ratio * t / h) - 1;
            if (gap < 0) gap = 0;
            const long fe = (n - gap) / 2 - 1;        // last cell of F
            const long es = fe + gap + 1;             // first cell of E
            if (fe < 0 || es > n - 1)
                throw std::invalid_argument("strip_cases: separation does not fit in the box");
            c.F = x_strip(box, 0, fe);
            c.E = x_strip(box, es, n - 1);
            c.d = static_cast<double>(es - fe) * h;
        }
        out.push_back(std::move(c));
    }
    return out;
}

OffDiagProfile offdiag_profile(const OperatorFamily& fam, double r, const std::vector<GridFn>& probes,
                               const std::vector<OffDiagCase>& geometry) {
    if (!fam.linear())
        throw std::invalid_argument("offdiag_profile: unsupported family (must be linear)");
    if (!(r >= 1.0)) throw std::invalid_argument("offdiag_profile: need r >= 1");
    if (probes.empty()) throw std::invalid_argument("offdiag_profile: no probes");
    if (geometry.empty()) throw std::invalid_argument("offdiag_profile: no geometry");

    constexpr double kZero = 1e-14;
    OffDiagProfile prof;
    prof.r = r;
    for (const auto& g : geometry) {
        bool any = false;
        double ratio = 0.0;
        for (const GridFn& f : probes) {
            const GridFn fF = mask_cells(f, g.F);
            const double denom = lp_norm(fF, r);
            if (denom == 0.0) continue;
            any = true;
            const GridFn Tf = family_apply(fam, g.t, fF);
            ratio = std::max(ratio, lp_norm(mask_cells(Tf, g.E), r) / denom);
        }
        if (!any) continue;  // no probe charges F: geometry point is unusable
        prof.points.push_back({g.t, g.d, ratio});
        if (g.d > 0.0) {
            if (ratio > kZero)
                prof.has_near_positive = true;
            else
                prof.has_cutoff_zero = true;
        }
    }
    if (prof.points.empty()) throw std::invalid_argument("offdiag_profile: no usable geometry");

    // least squares of log(ratio) = intercept + M * (-log(1 + d/t))
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : prof.points)
        if (p.ratio > kZero) pts.emplace_back(-std::log1p(p.d / p.t), std::log(p.ratio));
    double umin = kInfinity, umax = -kInfinity;
    for (const auto& [u, y] : pts) {
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    prof.fit_valid = pts.size() >= 2 && umax > umin;
    if (!prof.fit_valid) {
        prof.m_fit = kInfinity;  // marker: no decay information in the positive ratios
        return prof;
    }
    double su = 0.0, sy = 0.0, suu = 0.0, suy = 0.0;
    const double m = static_cast<double>(pts.size());
    for (const auto& [u, y] : pts) {
        su += u;
        sy += y;
        suu += u * u;
        suy += u * y;
    }
    const double slope = (m * suy - su * sy) / (m * suu - su * su);
    const double intercept = (sy - slope * su) / m;
    double rss = 0.0;
    for (const auto& [u, y] : pts) {
        const double e = y - (intercept + slope * u);
        rss += e * e;
    }
    prof.m_fit = slope;
    prof.residual = std::sqrt(rss / m);
    return prof;
}

// ---------------------------------------------------------------------------
// Iterated-maximal smoothing (declared in weights.hpp)
// ---------------------------------------------------------------------------

RdfResult rdf_iterate(const GridFn& h, const Weight& w, double p, int depth, double norm_bound,
                      const BallFamily& family) {
    if (depth < 0) throw std::invalid_argument("rdf_iterate: depth must be >= 0");
    if (!(norm_bound > 0.0)) throw std::invalid_argument("rdf_iterate: norm_bound must be positive");
    for (long i = 0; i < h.size(); ++i)
        if (h[i] < 0.0) throw std::invalid_argument("rdf_iterate: h must be nonnegative");

    const double decay = 1.0 / (2.0 * norm_bound);
    GridFn term = h;
    GridFn sum = h;
    double factor = 1.0;
    for (int k = 1; k <= depth; ++k) {
        term = maximal(term, family);
        factor *= decay;
        for (long i = 0; i < sum.size(); ++i) sum[i] += factor * term[i];
    }
    RdfResult res{std::move(sum), 0.0, 0.0, depth};
    const double tail_scale = std::pow(0.5, depth);
    res.tail_sup = tail_scale * h.max_abs();
    res.tail_lp = tail_scale * lp_norm(h, p, w);
    return res;
}

}  // namespace tentlab
