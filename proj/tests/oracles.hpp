#pragma once

// Independent brute-force reference implementations used only by the tests.
// Each oracle re-derives ball membership from the raw defining formula and
// sums in plain loop order, so it shares no code path (prefix tables, sliding
// windows, cached footprints) with the library kernels it cross-checks.
//
// Membership conventions (the same two rules the library documents):
//   - cell-centered balls: cell at integer offset (dx, dy) from the center
//     cell belongs iff (dx*h)^2 + (dy*h)^2 < t^2;
//   - point-centered balls: a cell belongs iff its center is strictly within
//     t of the point.
// Both are re-evaluated inline here, never by calling the library predicates.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tentlab/grid.hpp"
#include "tentlab/operators.hpp"
#include "tentlab/tent.hpp"
#include "tentlab/weights.hpp"

namespace oracle {

// Cell centers recomputed from scratch: -L + (i + 1/2) h on each axis.
inline double axis_center(const tentlab::Box& box, long i) {
    return -box.half_width() + (static_cast<double>(i) + 0.5) * box.cell_width();
}

inline void cell_center(const tentlab::Box& box, long cell, double& x, double& y) {
    const long n = box.cells_per_axis();
    if (box.dim() == 1) {
        x = axis_center(box, cell);
        y = 0.0;
    } else {
        x = axis_center(box, cell % n);
        y = axis_center(box, cell / n);
    }
}

// Integer axis offsets between two cells.
inline void cell_offset(const tentlab::Box& box, long from, long to, long& dx, long& dy) {
    const long n = box.cells_per_axis();
    if (box.dim() == 1) {
        dx = to - from;
        dy = 0;
    } else {
        dx = to % n - from % n;
        dy = to / n - from / n;
    }
}

// Cell-centered membership: strict squared comparison on offset * h.
inline bool offset_member(const tentlab::Box& box, long center_cell, long cell, double t) {
    long dx = 0;
    long dy = 0;
    cell_offset(box, center_cell, cell, dx, dy);
    const double ddx = static_cast<double>(dx) * box.cell_width();
    const double ddy = static_cast<double>(dy) * box.cell_width();
    return ddx * ddx + ddy * ddy < t * t;
}

// Point-centered membership: strict squared comparison on center - point.
inline bool point_member(const tentlab::Box& box, long cell, double cx, double cy, double t) {
    double x = 0.0;
    double y = 0.0;
    cell_center(box, cell, x, y);
    const double dx = x - cx;
    const double dy = y - cy;
    return dx * dx + dy * dy < t * t;
}

// Member cells of the ball about an arbitrary point, scanning every cell.
inline std::vector<long> ball_members(const tentlab::Box& box, double cx, double cy, double t) {
    std::vector<long> out;
    for (long cell = 0; cell < box.num_cells(); ++cell)
        if (point_member(box, cell, cx, cy, t)) out.push_back(cell);
    return out;
}

// Member cells of the cell-centered ball, scanning every cell.
inline std::vector<long> ball_members_at_cell(const tentlab::Box& box, long cell, double t) {
    std::vector<long> out;
    for (long other = 0; other < box.num_cells(); ++other)
        if (offset_member(box, cell, other, t)) out.push_back(other);
    return out;
}

inline double ball_average(const tentlab::GridFn& f, long cell, double t) {
    const auto members = ball_members_at_cell(f.box(), cell, t);
    if (members.empty()) throw std::runtime_error("oracle: empty ball");
    double sum = 0.0;
    for (long m : members) sum += f[m];
    return sum / static_cast<double>(members.size());
}

// One ball of a family, materialized the slow way. Cell-centered entries keep
// their center cell (cell >= 0); point-centered entries carry coordinates.
struct FlatBall {
    long cell = -1;
    double cx = 0.0, cy = 0.0;
    double t = 0.0;
};

inline std::vector<FlatBall> flatten(const tentlab::BallFamily& fam) {
    std::vector<FlatBall> out;
    for (const auto& g : fam.groups) {
        if (g.all_cells) {
            for (long cell = 0; cell < fam.box.num_cells(); ++cell) {
                FlatBall b;
                b.cell = cell;
                b.t = g.radius;
                out.push_back(b);
            }
        }
        for (long cell : g.center_cells) {
            FlatBall b;
            b.cell = cell;
            b.t = g.radius;
            out.push_back(b);
        }
        for (const auto& pt : g.center_points) {
            out.push_back({-1, pt[0], pt[1], g.radius});
        }
    }
    return out;
}

inline bool member_of(const tentlab::Box& box, const FlatBall& b, long cell) {
    if (b.cell >= 0) return offset_member(box, b.cell, cell, b.t);
    return point_member(box, cell, b.cx, b.cy, b.t);
}

inline std::vector<long> members_of(const tentlab::Box& box, const FlatBall& b) {
    std::vector<long> out;
    for (long cell = 0; cell < box.num_cells(); ++cell)
        if (member_of(box, b, cell)) out.push_back(cell);
    return out;
}

// Uncentered maximal function: per output cell, scan every family ball, test
// membership of the output cell, and average |f| over the ball's members.
inline tentlab::GridFn maximal(const tentlab::GridFn& f, const tentlab::BallFamily& fam) {
    const auto& box = f.box();
    const auto balls = flatten(fam);
    tentlab::GridFn out(box, 0.0);
    for (long cell = 0; cell < box.num_cells(); ++cell) {
        double best = 0.0;
        for (const auto& b : balls) {
            if (!member_of(box, b, cell)) continue;
            const auto members = members_of(box, b);
            if (members.empty()) continue;
            double sum = 0.0;
            for (long m : members) sum += std::fabs(f[m]);
            best = std::max(best, sum / static_cast<double>(members.size()));
        }
        out[cell] = best;
    }
    return out;
}

// Muckenhoupt constant: p > 1 uses (avg w)(avg w^{1-p'})^{p-1} per ball,
// p = 1 uses (avg w) * max(1/w) per ball; sup over the family.
inline double ap_constant(const tentlab::Weight& w, double p, const tentlab::BallFamily& fam) {
    const auto& box = w.box();
    const auto balls = flatten(fam);
    double worst = 0.0;
    for (const auto& b : balls) {
        const auto members = members_of(box, b);
        if (members.empty()) continue;
        double avg_w = 0.0;
        for (long m : members) avg_w += w.value(m);
        avg_w /= static_cast<double>(members.size());
        double factor = 0.0;
        if (p > 1.0) {
            const double dual = 1.0 - p / (p - 1.0);  // 1 - p'
            double avg_sigma = 0.0;
            for (long m : members) avg_sigma += std::pow(w.value(m), dual);
            avg_sigma /= static_cast<double>(members.size());
            factor = avg_w * std::pow(avg_sigma, p - 1.0);
        } else {
            double inv = 0.0;
            for (long m : members) inv = std::max(inv, 1.0 / w.value(m));
            factor = avg_w * inv;
        }
        worst = std::max(worst, factor);
    }
    return worst;
}

// Cone functional, written directly from the defining level sum with fresh
// cell-centered membership scans per (cell, level). FubiniExact uses the
// factor |B_d| / t^n together with the ball average (equivalently
// h^n sum / t^n); Continuum uses v_n beta^n times the ball average.
inline tentlab::GridFn cone_functional(const tentlab::HalfSpaceFn& F, double r, double beta,
                                       tentlab::ConeMode mode) {
    const auto& box = F.box();
    const auto& tl = F.tlevels();
    const double h = box.cell_width();
    const double hn = box.dim() == 1 ? h : h * h;
    const double vn = box.dim() == 1 ? 2.0 : 3.14159265358979323846;
    tentlab::GridFn out(box, 0.0);
    for (long cell = 0; cell < box.num_cells(); ++cell) {
        double acc = 0.0;
        for (int k = 0; k < tl.count(); ++k) {
            const double t = tl.level(k);
            const auto members = ball_members_at_cell(box, cell, beta * t);
            if (members.empty()) continue;
            double sum = 0.0;
            for (long m : members) sum += std::pow(std::fabs(F.at(m, k)), r);
            const double avg = sum / static_cast<double>(members.size());
            const double tn = box.dim() == 1 ? t : t * t;
            double factor = 0.0;
            if (mode == tentlab::ConeMode::FubiniExact) {
                factor = static_cast<double>(members.size()) * hn / tn;
            } else {
                factor = vn * (box.dim() == 1 ? beta : beta * beta);
            }
            acc += tl.log_step() * factor * avg;
        }
        out[cell] = std::pow(acc, 1.0 / r);
    }
    return out;
}

}  // namespace oracle
