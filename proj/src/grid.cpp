#include "tentlab/grid.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace tentlab {

double unit_ball_volume(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return std::numbers::pi;
    throw std::invalid_argument("unit_ball_volume: dim must be 1 or 2");
}

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

Box::Box(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), n_(cells_per_axis) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Box: dim must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("Box: half_width must be positive and finite");
    if (cells_per_axis < 2) throw std::invalid_argument("Box: need at least 2 cells per axis");
    h_ = 2.0 * half_width_ / static_cast<double>(n_);
    vol_ = (dim_ == 1) ? h_ : h_ * h_;
    total_ = (dim_ == 1) ? n_ : static_cast<long>(n_) * n_;
}

long Box::axis_cell_at(double x) const {
    const double u = (x + half_width_) / h_;
    long i = static_cast<long>(std::floor(u));
    if (i < 0) i = 0;
    if (i >= n_) i = n_ - 1;
    return i;
}

long Box::cell_at(double x, double y) const {
    if (dim_ == 1) return axis_cell_at(x);
    return index_of(axis_cell_at(x), axis_cell_at(y));
}

// ---------------------------------------------------------------------------
// BallShape
// ---------------------------------------------------------------------------

namespace {

// Largest k >= 0 with sqrt((k h)^2 + (dy h)^2) < t under the canonical
// predicate, or -1 if even k = 0 fails. Estimate then fix up so the result
// agrees exactly with offset_within.
int max_axis_offset(const Box& box, long dy, double t, int cap) {
    const double h = box.cell_width();
    const double ddy = static_cast<double>(dy) * h;
    const double rem = t * t - ddy * ddy;
    if (rem <= 0.0) {
        return offset_within(box, 0, dy, t) ? 0 : -1;
    }
    int k = static_cast<int>(std::floor(std::sqrt(rem) / h));
    if (k > cap) k = cap;
    while (k > 0 && !offset_within(box, k, dy, t)) --k;
    if (k == 0 && !offset_within(box, 0, dy, t)) return -1;
    while (k < cap && offset_within(box, k + 1, dy, t)) ++k;
    return k;
}

}  // namespace

BallShape make_ball_shape(const Box& box, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("make_ball_shape: radius must be positive");
    BallShape s;
    s.radius = t;
    const int cap = box.cells_per_axis() - 1;
    if (box.dim() == 1) {
        s.reach = 0;
        const int a = max_axis_offset(box, 0, t, cap);
        s.half_width.assign(1, a);  // a >= 0 always: the center cell is a member
        s.unclipped_count = 2L * a + 1L;
        return s;
    }
    int reach = max_axis_offset(box, 0, t, cap);
    // reach along y equals reach along x by symmetry of the predicate
    s.reach = reach;
    s.half_width.assign(static_cast<size_t>(2 * reach + 1), -1);
    s.unclipped_count = 0;
    for (int dy = -reach; dy <= reach; ++dy) {
        const int w = max_axis_offset(box, dy, t, cap);
        s.half_width[static_cast<size_t>(dy + reach)] = w;
        if (w >= 0) s.unclipped_count += 2L * w + 1L;
    }
    return s;
}

// ---------------------------------------------------------------------------
// GridFn
// ---------------------------------------------------------------------------

GridFn::GridFn(const Box& box, std::vector<double> values) : box_(box), v_(std::move(values)) {
    if (static_cast<long>(v_.size()) != box_.num_cells())
        throw std::invalid_argument("GridFn: value count does not match the box");
    for (double x : v_)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFn: samples must be finite");
}

GridFn::GridFn(const Box& box, double constant) : box_(box) {
    if (!std::isfinite(constant)) throw std::invalid_argument("GridFn: samples must be finite");
    v_.assign(static_cast<size_t>(box_.num_cells()), constant);
}

double GridFn::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

GridFn GridFn::abs() const {
    std::vector<double> out(v_.size());
    for (size_t i = 0; i < v_.size(); ++i) out[i] = std::abs(v_[i]);
    return GridFn(box_, std::move(out));
}

GridFn indicator_interval(const Box& box, double a, double b) {
    if (box.dim() != 1) throw std::invalid_argument("indicator_interval: 1D only");
    std::vector<double> v(static_cast<size_t>(box.num_cells()), 0.0);
    for (long i = 0; i < box.num_cells(); ++i) {
        const double c = box.axis_center(i);
        if (c >= a && c < b) v[static_cast<size_t>(i)] = 1.0;
    }
    return GridFn(box, std::move(v));
}

GridFn indicator_rect(const Box& box, double ax, double bx, double ay, double by) {
    if (box.dim() != 2) throw std::invalid_argument("indicator_rect: 2D only");
    std::vector<double> v(static_cast<size_t>(box.num_cells()), 0.0);
    for (long idx = 0; idx < box.num_cells(); ++idx) {
        const auto c = box.center_of(idx);
        if (c[0] >= ax && c[0] < bx && c[1] >= ay && c[1] < by) v[static_cast<size_t>(idx)] = 1.0;
    }
    return GridFn(box, std::move(v));
}

// ---------------------------------------------------------------------------
// TLevels
// ---------------------------------------------------------------------------

TLevels::TLevels(double t_min, double t_max, int count) : t_min_(t_min), t_max_(t_max), k_(count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
        throw std::invalid_argument("TLevels: need 0 < t_min < t_max < inf");
    if (count < 1) throw std::invalid_argument("TLevels: need at least one level");
    delta_ = std::log(t_max_ / t_min_) / static_cast<double>(k_);
    levels_.resize(static_cast<size_t>(k_));
    for (int k = 0; k < k_; ++k) {
        levels_[static_cast<size_t>(k)] =
            t_min_ * std::pow(t_max_ / t_min_, (static_cast<double>(k) + 0.5) / static_cast<double>(k_));
    }
    for (int k = 1; k < k_; ++k)
        if (!(levels_[static_cast<size_t>(k)] > levels_[static_cast<size_t>(k - 1)]))
            throw std::invalid_argument("TLevels: levels must be strictly increasing");
}

// ---------------------------------------------------------------------------
// HalfSpaceFn
// ---------------------------------------------------------------------------

HalfSpaceFn::HalfSpaceFn(const Box& box, const TLevels& tlevels, std::vector<double> values)
    : box_(box), tl_(tlevels), v_(std::move(values)) {
    const size_t expect = static_cast<size_t>(box_.num_cells()) * static_cast<size_t>(tl_.count());
    if (v_.size() != expect) throw std::invalid_argument("HalfSpaceFn: value count mismatch");
    for (double x : v_)
        if (!std::isfinite(x)) throw std::invalid_argument("HalfSpaceFn: samples must be finite");
}

HalfSpaceFn::HalfSpaceFn(const Box& box, const TLevels& tlevels, double constant)
    : box_(box), tl_(tlevels) {
    if (!std::isfinite(constant)) throw std::invalid_argument("HalfSpaceFn: samples must be finite");
    v_.assign(static_cast<size_t>(box_.num_cells()) * static_cast<size_t>(tl_.count()), constant);
}

GridFn HalfSpaceFn::slice_fn(int k) const {
    auto s = slice(k);
    return GridFn(box_, std::vector<double>(s.begin(), s.end()));
}

void HalfSpaceFn::set_slice(int k, const GridFn& g) {
    if (!(g.box() == box_)) throw std::invalid_argument("set_slice: box mismatch");
    const size_t off = static_cast<size_t>(k) * static_cast<size_t>(box_.num_cells());
    std::copy(g.values().begin(), g.values().end(), v_.begin() + static_cast<long>(off));
}

// ---------------------------------------------------------------------------
// DiscreteBall
// ---------------------------------------------------------------------------

DiscreteBall DiscreteBall::at_cell(const Box& box, long cell, double t) {
    if (cell < 0 || cell >= box.num_cells()) throw std::invalid_argument("DiscreteBall: bad cell");
    const BallShape shape = make_ball_shape(box, t);
    DiscreteBall b;
    b.center_cell = cell;
    b.center = box.center_of(cell);
    b.radius = t;
    const long n = box.cells_per_axis();
    if (box.dim() == 1) {
        const int a = shape.hw(0);
        const long lo = std::max<long>(0, cell - a);
        const long hi = std::min<long>(n - 1, cell + a);
        for (long i = lo; i <= hi; ++i) b.members.push_back(i);
    } else {
        const long cx = box.ix_of(cell), cy = box.iy_of(cell);
        for (int dy = -shape.reach; dy <= shape.reach; ++dy) {
            const long y = cy + dy;
            if (y < 0 || y >= n) continue;
            const int w = shape.hw(dy);
            if (w < 0) continue;
            const long lo = std::max<long>(0, cx - w);
            const long hi = std::min<long>(n - 1, cx + w);
            for (long x = lo; x <= hi; ++x) b.members.push_back(box.index_of(x, y));
        }
    }
    b.measure = static_cast<double>(b.members.size()) * box.cell_volume();
    b.clipped = static_cast<long>(b.members.size()) != shape.unclipped_count;
    return b;
}

DiscreteBall DiscreteBall::at_point(const Box& box, double x, double y, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("DiscreteBall: radius must be positive");
    DiscreteBall b;
    b.center = {x, y};
    b.radius = t;
    // Scan the index window that could possibly intersect; membership decided
    // by the canonical point predicate.
    const long n = box.cells_per_axis();
    const double h = box.cell_width();
    const long span = static_cast<long>(std::ceil(t / h)) + 1;
    if (box.dim() == 1) {
        const long c = box.axis_cell_at(x);
        for (long i = std::max<long>(0, c - span); i <= std::min<long>(n - 1, c + span); ++i)
            if (point_within(box, i, x, 0.0, t)) b.members.push_back(i);
    } else {
        const long cx = box.axis_cell_at(x), cy = box.axis_cell_at(y);
        for (long iy = std::max<long>(0, cy - span); iy <= std::min<long>(n - 1, cy + span); ++iy)
            for (long ix = std::max<long>(0, cx - span); ix <= std::min<long>(n - 1, cx + span); ++ix) {
                const long idx = box.index_of(ix, iy);
                if (point_within(box, idx, x, y, t)) b.members.push_back(idx);
            }
    }
    b.measure = static_cast<double>(b.members.size()) * box.cell_volume();
    b.clipped = true;  // unknown footprint; callers that care use at_cell
    return b;
}

// ---------------------------------------------------------------------------
// PrefixGrid
// ---------------------------------------------------------------------------

PrefixGrid::PrefixGrid(const GridFn& f) : box_(f.box()), n_(f.box().cells_per_axis()) {
    const long rows = (box_.dim() == 1) ? 1 : n_;
    pref_.assign(static_cast<size_t>(rows) * static_cast<size_t>(n_ + 1), 0.0);
    for (long r = 0; r < rows; ++r) {
        double acc = 0.0;
        const size_t base = static_cast<size_t>(r) * static_cast<size_t>(n_ + 1);
        for (long i = 0; i < n_; ++i) {
            acc += f[r * n_ + i];
            pref_[base + static_cast<size_t>(i) + 1] = acc;
        }
    }
}

double PrefixGrid::ball_sum(long cell, const BallShape& shape) const {
    double s;
    long c;
    ball_sum_count(cell, shape, s, c);
    return s;
}

long PrefixGrid::ball_count(long cell, const BallShape& shape) const {
    const long n = n_;
    if (box_.dim() == 1) {
        const int a = shape.hw(0);
        return std::min<long>(n - 1, cell + a) - std::max<long>(0, cell - a) + 1;
    }
    const long cx = box_.ix_of(cell), cy = box_.iy_of(cell);
    long count = 0;
    for (int dy = -shape.reach; dy <= shape.reach; ++dy) {
        const long y = cy + dy;
        if (y < 0 || y >= n) continue;
        const int w = shape.hw(dy);
        if (w < 0) continue;
        count += std::min<long>(n - 1, cx + w) - std::max<long>(0, cx - w) + 1;
    }
    return count;
}

void PrefixGrid::ball_sum_count(long cell, const BallShape& shape, double& sum, long& count) const {
    const long n = n_;
    sum = 0.0;
    count = 0;
    if (box_.dim() == 1) {
        const int a = shape.hw(0);
        const long lo = std::max<long>(0, cell - a);
        const long hi = std::min<long>(n - 1, cell + a);
        sum = pref_[static_cast<size_t>(hi + 1)] - pref_[static_cast<size_t>(lo)];
        count = hi - lo + 1;
        return;
    }
    const long cx = box_.ix_of(cell), cy = box_.iy_of(cell);
    for (int dy = -shape.reach; dy <= shape.reach; ++dy) {
        const long y = cy + dy;
        if (y < 0 || y >= n) continue;
        const int w = shape.hw(dy);
        if (w < 0) continue;
        const long lo = std::max<long>(0, cx - w);
        const long hi = std::min<long>(n - 1, cx + w);
        const size_t base = static_cast<size_t>(y) * static_cast<size_t>(n + 1);
        sum += pref_[base + static_cast<size_t>(hi + 1)] - pref_[base + static_cast<size_t>(lo)];
        count += hi - lo + 1;
    }
}

// ---------------------------------------------------------------------------
// Base-space operations
// ---------------------------------------------------------------------------

double ball_average(const GridFn& f, long cell, double t) {
    if (cell < 0 || cell >= f.box().num_cells()) throw std::invalid_argument("ball_average: bad cell");
    const Box& box = f.box();
    const BallShape shape = make_ball_shape(box, t);
    const long n = box.cells_per_axis();
    double sum = 0.0;
    long count = 0;
    if (box.dim() == 1) {
        const int a = shape.hw(0);
        const long lo = std::max<long>(0, cell - a);
        const long hi = std::min<long>(n - 1, cell + a);
        for (long i = lo; i <= hi; ++i) sum += f[i];
        count = hi - lo + 1;
    } else {
        const long cx = box.ix_of(cell), cy = box.iy_of(cell);
        for (int dy = -shape.reach; dy <= shape.reach; ++dy) {
            const long y = cy + dy;
            if (y < 0 || y >= n) continue;
            const int w = shape.hw(dy);
            if (w < 0) continue;
            const long lo = std::max<long>(0, cx - w);
            const long hi = std::min<long>(n - 1, cx + w);
            for (long x = lo; x <= hi; ++x) sum += f[box.index_of(x, y)];
            count += hi - lo + 1;
        }
    }
    return sum / static_cast<double>(count);
}

GridFn ball_average_all(const GridFn& f, double t) {
    const Box& box = f.box();
    const BallShape shape = make_ball_shape(box, t);
    const PrefixGrid pg(f);
    std::vector<double> out(static_cast<size_t>(box.num_cells()));
    const long total = box.num_cells();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < total; ++i) {
        double s;
        long c;
        pg.ball_sum_count(i, shape, s, c);
        out[static_cast<size_t>(i)] = s / static_cast<double>(c);
    }
    return GridFn(box, std::move(out));
}

namespace {

// Sliding-window extremum over one row: out[i] = extreme of v[max(0,i-a) .. min(n-1,i+a)].
// Monotone-deque scan; exact and order-independent.
template <typename Better>
void sliding_extreme(const double* v, long n, int a, Better better, double* out) {
    std::vector<long> dq(static_cast<size_t>(n));
    long head = 0, tail = 0;  // dq[head..tail) holds candidate indices
    long added = 0;
    for (long i = 0; i < n; ++i) {
        const long upto = std::min<long>(n - 1, i + a);
        for (; added <= upto; ++added) {
            while (tail > head && !better(v[dq[static_cast<size_t>(tail - 1)]], v[added]))
                --tail;
            dq[static_cast<size_t>(tail++)] = added;
        }
        while (dq[static_cast<size_t>(head)] < i - a) ++head;
        out[i] = v[dq[static_cast<size_t>(head)]];
    }
}

template <typename Better>
GridFn ball_extreme_all(const GridFn& f, double t, Better better, double init) {
    const Box& box = f.box();
    const BallShape shape = make_ball_shape(box, t);
    const long n = box.cells_per_axis();
    std::vector<double> out(static_cast<size_t>(box.num_cells()), init);
    if (box.dim() == 1) {
        sliding_extreme(f.values().data(), n, shape.hw(0), better, out.data());
        return GridFn(box, std::move(out));
    }
#pragma omp parallel
    {
        std::vector<double> scratch(static_cast<size_t>(n));
#pragma omp for schedule(static)
        for (long y = 0; y < n; ++y) {
            double* orow = out.data() + y * n;
            for (int dy = -shape.reach; dy <= shape.reach; ++dy) {
                const long sy = y + dy;
                if (sy < 0 || sy >= n) continue;
                const int w = shape.hw(dy);
                if (w < 0) continue;
                sliding_extreme(f.values().data() + sy * n, n, w, better, scratch.data());
                for (long x = 0; x < n; ++x)
                    if (better(scratch[static_cast<size_t>(x)], orow[x])) orow[x] = scratch[static_cast<size_t>(x)];
            }
        }
    }
    return GridFn(box, std::move(out));
}

}  // namespace

GridFn ball_min_all(const GridFn& f, double t) {
    return ball_extreme_all(f, t, [](double a, double b) { return a < b; }, kInfinity);
}

GridFn ball_max_all(const GridFn& f, double t) {
    return ball_extreme_all(f, t, [](double a, double b) { return a > b; }, -kInfinity);
}

double lp_norm(const GridFn& f, double p, const GridFn& w) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    if (!(f.box() == w.box())) throw std::invalid_argument("lp_norm: box mismatch");
    double acc = 0.0;
    for (long i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p) * w[i];
    return std::pow(acc * f.box().cell_volume(), 1.0 / p);
}

double lp_norm(const GridFn& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    double acc = 0.0;
    for (long i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p);
    return std::pow(acc * f.box().cell_volume(), 1.0 / p);
}

double lorentz_quasinorm(const GridFn& f, double p, double s, const GridFn& w) {
    if (!(p > 0.0)) throw std::invalid_argument("lorentz_quasinorm: p must be positive");
    if (!(s > 0.0)) throw std::invalid_argument("lorentz_quasinorm: s must be positive");
    if (!(f.box() == w.box())) throw std::invalid_argument("lorentz_quasinorm: box mismatch");

    // Collect (|f|, cell weight) pairs sorted by decreasing value and grouped
    // by exactly equal values; the rearrangement of a step function is then a
    // step function and both branches below are exact.
    std::vector<std::pair<double, double>> lev;
    lev.reserve(static_cast<size_t>(f.size()));
    const double vol = f.box().cell_volume();
    for (long i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a > 0.0) lev.emplace_back(a, w[i] * vol);
    }
    if (lev.empty()) return 0.0;
    std::sort(lev.begin(), lev.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    if (std::isinf(s)) {
        double best = 0.0;
        double cum = 0.0;
        size_t i = 0;
        while (i < lev.size()) {
            const double a = lev[i].first;
            while (i < lev.size() && lev[i].first == a) {
                cum += lev[i].second;
                ++i;
            }
            best = std::max(best, a * std::pow(cum, 1.0 / p));
        }
        return best;
    }

    double acc = 0.0;
    double t_prev_pow = 0.0;  // T_{m-1}^{s/p}
    double cum = 0.0;
    size_t i = 0;
    while (i < lev.size()) {
        const double a = lev[i].first;
        while (i < lev.size() && lev[i].first == a) {
            cum += lev[i].second;
            ++i;
        }
        const double t_pow = std::pow(cum, s / p);
        acc += std::pow(a, s) * (p / s) * (t_pow - t_prev_pow);
        t_prev_pow = t_pow;
    }
    return std::pow(acc, 1.0 / s);
}

double weighted_measure(std::span<const long> cells, const GridFn& w) {
    double acc = 0.0;
    for (long c : cells) {
        if (c < 0 || c >= w.size()) throw std::invalid_argument("weighted_measure: bad cell index");
        acc += w[c];
    }
    return acc * w.box().cell_volume();
}

}  // namespace tentlab
