#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace tentlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Volume of the Euclidean unit ball in dimension n (n = 1 or 2).
[[nodiscard]] double unit_ball_volume(int dim);

// ============================================================================
// Box: a cube [-L, L]^n split into N uniform cells per axis. Cell centers sit
// at -L + (i + 1/2) h with h = 2L/N. All functions live on the box; balls are
// clipped to it.
// ============================================================================

class Box {
public:
    Box(int dim, double half_width, int cells_per_axis);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] double half_width() const { return half_width_; }
    [[nodiscard]] int cells_per_axis() const { return n_; }
    [[nodiscard]] double cell_width() const { return h_; }
    [[nodiscard]] double cell_volume() const { return vol_; }
    [[nodiscard]] long num_cells() const { return total_; }

    [[nodiscard]] double axis_center(long i) const {
        return -half_width_ + (static_cast<double>(i) + 0.5) * h_;
    }
    [[nodiscard]] long index_of(long ix, long iy = 0) const { return iy * n_ + ix; }
    [[nodiscard]] long ix_of(long idx) const { return idx % n_; }
    [[nodiscard]] long iy_of(long idx) const { return idx / n_; }
    [[nodiscard]] std::array<double, 2> center_of(long idx) const {
        if (dim_ == 1) return {axis_center(idx), 0.0};
        return {axis_center(ix_of(idx)), axis_center(iy_of(idx))};
    }
    /// Index of the cell whose axis interval contains x (clamped to the box).
    [[nodiscard]] long axis_cell_at(double x) const;
    [[nodiscard]] long cell_at(double x, double y = 0.0) const;

    bool operator==(const Box& o) const {
        return dim_ == o.dim_ && half_width_ == o.half_width_ && n_ == o.n_;
    }

private:
    int dim_;
    double half_width_;
    int n_;
    double h_;
    double vol_;
    long total_;
};

// Canonical ball-membership predicate for cell-centered balls: a cell at
// offset (dx, dy) from the center cell belongs to the ball of radius t iff
// |offset * h| < t, evaluated as a squared comparison. Every kernel and every
// oracle must use this exact rule so that memberships never disagree.
[[nodiscard]] inline bool offset_within(const Box& box, long dx, long dy, double t) {
    const double h = box.cell_width();
    const double ddx = static_cast<double>(dx) * h;
    const double ddy = static_cast<double>(dy) * h;
    return ddx * ddx + ddy * ddy < t * t;
}

// Point-centered variant used by custom ball families: cell j belongs iff its
// center is strictly within t of the given point.
[[nodiscard]] inline bool point_within(const Box& box, long cell, double cx, double cy, double t) {
    const auto c = box.center_of(cell);
    const double dx = c[0] - cx;
    const double dy = c[1] - cy;
    return dx * dx + dy * dy < t * t;
}

// ============================================================================
// BallShape: translation-invariant index footprint of a cell-centered ball.
// ============================================================================

struct BallShape {
    double radius = 0.0;
    int reach = 0;                    // max |dy| (0 in 1D)
    std::vector<int> half_width;      // per dy in [-reach, reach]; 1D: size 1
    long unclipped_count = 0;

    [[nodiscard]] int hw(int dy) const { return half_width[static_cast<size_t>(dy + reach)]; }
};

[[nodiscard]] BallShape make_ball_shape(const Box& box, double t);

// ============================================================================
// GridFn: piecewise-constant sampled function on a Box.
// ============================================================================

class GridFn {
public:
    GridFn(const Box& box, std::vector<double> values);
    GridFn(const Box& box, double constant);

    [[nodiscard]] const Box& box() const { return box_; }
    [[nodiscard]] long size() const { return static_cast<long>(v_.size()); }
    [[nodiscard]] double operator[](long i) const { return v_[static_cast<size_t>(i)]; }
    [[nodiscard]] double& operator[](long i) { return v_[static_cast<size_t>(i)]; }
    [[nodiscard]] const std::vector<double>& values() const { return v_; }
    [[nodiscard]] std::vector<double>& values() { return v_; }

    [[nodiscard]] double max_abs() const;
    [[nodiscard]] GridFn abs() const;

private:
    Box box_;
    std::vector<double> v_;
};

/// Indicator of the axis interval [a, b) (n = 1), by cell-center membership.
[[nodiscard]] GridFn indicator_interval(const Box& box, double a, double b);
/// Indicator of [ax, bx) x [ay, by) (n = 2).
[[nodiscard]] GridFn indicator_rect(const Box& box, double ax, double bx, double ay, double by);

// ============================================================================
// TLevels: log-spaced heights t_k = t_min (t_max/t_min)^((k+1/2)/K); the band
// around each level has exact log-width delta = ln(t_max/t_min)/K, so dt/t
// sums over band-constant integrands are exact.
// ============================================================================

class TLevels {
public:
    TLevels(double t_min, double t_max, int count);

    [[nodiscard]] double t_min() const { return t_min_; }
    [[nodiscard]] double t_max() const { return t_max_; }
    [[nodiscard]] int count() const { return k_; }
    [[nodiscard]] double level(int k) const { return levels_[static_cast<size_t>(k)]; }
    [[nodiscard]] double log_step() const { return delta_; }
    [[nodiscard]] const std::vector<double>& levels() const { return levels_; }

    bool operator==(const TLevels& o) const {
        return t_min_ == o.t_min_ && t_max_ == o.t_max_ && k_ == o.k_;
    }

private:
    double t_min_, t_max_;
    int k_;
    double delta_;
    std::vector<double> levels_;
};

// ============================================================================
// HalfSpaceFn: samples F(y, t) on grid cells x log-spaced t-levels.
// Layout is level-major so each slice F(., t_k) is contiguous.
// ============================================================================

class HalfSpaceFn {
public:
    HalfSpaceFn(const Box& box, const TLevels& tlevels, std::vector<double> values);
    HalfSpaceFn(const Box& box, const TLevels& tlevels, double constant = 0.0);

    [[nodiscard]] const Box& box() const { return box_; }
    [[nodiscard]] const TLevels& tlevels() const { return tl_; }
    [[nodiscard]] double at(long cell, int k) const {
        return v_[static_cast<size_t>(k) * static_cast<size_t>(box_.num_cells()) + static_cast<size_t>(cell)];
    }
    [[nodiscard]] double& at(long cell, int k) {
        return v_[static_cast<size_t>(k) * static_cast<size_t>(box_.num_cells()) + static_cast<size_t>(cell)];
    }
    [[nodiscard]] std::span<const double> slice(int k) const {
        return {v_.data() + static_cast<size_t>(k) * static_cast<size_t>(box_.num_cells()),
                static_cast<size_t>(box_.num_cells())};
    }
    [[nodiscard]] GridFn slice_fn(int k) const;
    void set_slice(int k, const GridFn& g);
    [[nodiscard]] const std::vector<double>& values() const { return v_; }

private:
    Box box_;
    TLevels tl_;
    std::vector<double> v_;
};

// ============================================================================
// DiscreteBall: materialized member set. The center is either a cell or an
// arbitrary point (custom families need e.g. origin-symmetric balls, which on
// an even grid have no center cell). Members are in-box cells only.
// ============================================================================

struct DiscreteBall {
    long center_cell = -1;            // -1 for point-centered balls
    std::array<double, 2> center{{0.0, 0.0}};
    double radius = 0.0;
    std::vector<long> members;
    double measure = 0.0;             // member count * h^n
    bool clipped = false;

    [[nodiscard]] static DiscreteBall at_cell(const Box& box, long cell, double t);
    [[nodiscard]] static DiscreteBall at_point(const Box& box, double x, double y, double t);
};

// ============================================================================
// PrefixGrid: per-row prefix sums of a GridFn; ball sums in O(rows) per query
// (O(1) in 1D). This is the workhorse behind every averaging kernel.
// ============================================================================

class PrefixGrid {
public:
    explicit PrefixGrid(const GridFn& f);

    /// Sum of samples over the cell-centered ball with the given footprint.
    [[nodiscard]] double ball_sum(long cell, const BallShape& shape) const;
    /// Number of in-box member cells of the same ball.
    [[nodiscard]] long ball_count(long cell, const BallShape& shape) const;
    void ball_sum_count(long cell, const BallShape& shape, double& sum, long& count) const;

private:
    const Box box_;
    int n_;
    std::vector<double> pref_;        // (rows) x (N+1)
};

// ============================================================================
// Base-space operations
// ============================================================================

/// Average of f over the discrete ball B(x, t): sum of member samples divided
/// by the member count (equivalently integral / discrete measure).
[[nodiscard]] double ball_average(const GridFn& f, long cell, double t);

/// Averages over B(x, t) at every cell x at once.
[[nodiscard]] GridFn ball_average_all(const GridFn& f, double t);

/// Minimum / maximum of f over B(x, t) at every cell x (sliding-window scan).
[[nodiscard]] GridFn ball_min_all(const GridFn& f, double t);
[[nodiscard]] GridFn ball_max_all(const GridFn& f, double t);

/// ( sum |f|^p w h^n )^(1/p).
[[nodiscard]] double lp_norm(const GridFn& f, double p, const GridFn& w);
/// Unweighted variant (w = 1).
[[nodiscard]] double lp_norm(const GridFn& f, double p);

/// Weighted Lorentz quasinorm L^{p,s}(w). Pass s = kInfinity for the weak
/// norm sup_lambda lambda w({|f| >= lambda})^{1/p}, which for step functions
/// equals the classical sup over lambda > 0 with strict inequality. Finite s
/// uses the weighted decreasing rearrangement, exact for step functions.
[[nodiscard]] double lorentz_quasinorm(const GridFn& f, double p, double s, const GridFn& w);

/// sum_{E} w h^n.
[[nodiscard]] double weighted_measure(std::span<const long> cells, const GridFn& w);

}  // namespace tentlab
