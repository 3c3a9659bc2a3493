#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

// ============================================================================
// Weight: strictly positive sampled density with a descriptor string used in
// reports and configs. Closed-form kinds can be resampled on a finer box,
// which refinement sweeps rely on.
//
// Descriptor grammar: "const:<c>", "power:<a>", "step:<left>:<right>".
// ============================================================================

class Weight {
public:
    [[nodiscard]] static Weight constant(const Box& box, double c);
    /// w(x) = max(|x|, h/2)^a  (the origin cell is mollified at scale h/2).
    [[nodiscard]] static Weight power(const Box& box, double a);
    /// 1D/2D step in the first coordinate: `left` for x < 0, `right` for x >= 0.
    [[nodiscard]] static Weight step(const Box& box, double left, double right);
    [[nodiscard]] static Weight sampled(GridFn samples, std::string descriptor = "sampled");
    [[nodiscard]] static Weight from_descriptor(const std::string& descriptor, const Box& box);

    [[nodiscard]] const Box& box() const { return samples_.box(); }
    [[nodiscard]] const GridFn& samples() const { return samples_; }
    [[nodiscard]] double value(long cell) const { return samples_[cell]; }
    [[nodiscard]] const std::string& descriptor() const { return desc_; }

    /// Pointwise power w^e (descriptor records the exponent).
    [[nodiscard]] Weight pow(double e) const;

private:
    Weight(GridFn samples, std::string desc);
    GridFn samples_;
    std::string desc_;
};

[[nodiscard]] inline double lp_norm(const GridFn& f, double p, const Weight& w) {
    return lp_norm(f, p, w.samples());
}
[[nodiscard]] inline double lorentz_quasinorm(const GridFn& f, double p, double s, const Weight& w) {
    return lorentz_quasinorm(f, p, s, w.samples());
}

// ============================================================================
// BallFamily: finite collection of balls over which suprema are taken,
// grouped by radius. Center lists are either "every cell" (the fast scanning
// path), explicit cell lists, or explicit points (e.g. origin-symmetric
// balls, which an even grid cannot center on a cell).
// ============================================================================

struct BallFamily {
    struct Group {
        double radius = 0.0;
        bool all_cells = false;
        std::vector<long> center_cells;                  // used when !all_cells
        std::vector<std::array<double, 2>> center_points;  // point-centered extras
    };

    Box box;
    std::vector<Group> groups;
    std::string descriptor;

    /// Default family: every cell center x dyadic radii {h, 2h, 4h, ..., <= 2L}.
    [[nodiscard]] static BallFamily dyadic(const Box& box);
    /// Balls of the given radii all centered at one point.
    [[nodiscard]] static BallFamily at_point(const Box& box, double x, double y,
                                             const std::vector<double>& radii);
    /// Explicit cell-centered balls.
    [[nodiscard]] static BallFamily from_balls(const Box& box,
                                               const std::vector<std::pair<long, double>>& balls);

    [[nodiscard]] long ball_count() const;
};

/// Dyadic-family balls B(x, s) such that the padded ball B(x, s + pad) is
/// entirely inside the box, and the matching family of padded balls. Used to
/// compare a weight class before and after mollification at scale pad.
[[nodiscard]] BallFamily dyadic_interior(const Box& box, double pad);
[[nodiscard]] BallFamily padded_family(const BallFamily& fam, double pad);

// ============================================================================
// WeightConstants: the measured class constant of a weight over a family.
// ============================================================================

struct WeightConstants {
    double value = 1.0;
    bool divergent = false;      // set by refinement sweeps, never by a single estimate
    std::string cls;             // "A_p", "A_1", "A_inf", "RH_s", "RH_inf", "A_pq"
    double p = 0.0;
    double q = 0.0;
    double s = 0.0;
    std::string family;
    long family_balls = 0;
};

/// Muckenhoupt constant over the family: p > 1 uses
/// sup_B (avg_B w)(avg_B w^{1-p'})^{p-1}; p = 1 uses (avg_B w) * sup_B (1/w).
[[nodiscard]] WeightConstants ap_constant(const Weight& w, double p, const BallFamily& family);

/// min over a grid of p of the A_p estimate (records the argmin p).
[[nodiscard]] WeightConstants ainfty_constant(const Weight& w, const BallFamily& family,
                                              const std::vector<double>& p_grid);

/// Reverse-Hoelder constant, s in (1, inf) or kInfinity for the sup variant.
[[nodiscard]] WeightConstants rh_constant(const Weight& w, double s, const BallFamily& family);

/// Off-diagonal class constant sup_B (avg_B w^q)(avg_B w^{-p'})^{q/p'}
/// for 1 < p < infinity, 1 <= q < infinity.
[[nodiscard]] WeightConstants apq_constant(const Weight& w, double p, double q,
                                           const BallFamily& family);

/// W_t(x) = avg_{B(x,t)} w, as a sampled Weight.
[[nodiscard]] Weight averaged_weight(const Weight& w, double t);

[[nodiscard]] Weight power_weight(double a, const Box& box);

/// Refinement sweep for closed-form weights: estimates the class constant on
/// grids with N, 2N and 4N cells per axis and flags the weight divergent when
/// both doublings grow the estimate by more than 20%. (Estimates that merely
/// converge from below move by O(h) per doubling; genuinely divergent powers
/// grow by a fixed factor > 1 per doubling.) Returns the finest estimate.
[[nodiscard]] WeightConstants ap_constant_refined(const std::string& weight_descriptor, int dim,
                                                  double half_width, int base_cells, double p);

// ============================================================================
// PairFamily: nonnegative (F, G) pairs sharing one box and one set of levels;
// the raw material of the extrapolation checks.
// ============================================================================

struct PairFamily {
    std::vector<std::pair<HalfSpaceFn, HalfSpaceFn>> pairs;

    void add(HalfSpaceFn f, HalfSpaceFn g);  // validates shape match and nonnegativity
};

// ============================================================================
// Iterated-maximal smoothing: R h = sum_{k=0}^{depth} M^k h / (2 norm_bound)^k
// where M is the uncentered maximal operator over `family`. Defined here,
// implemented with the operator kernels.
// ============================================================================

struct RdfResult {
    GridFn r;
    double tail_sup = 0.0;  // 2^-depth * sup|h|, bounds the dropped tail pointwise
    double tail_lp = 0.0;   // 2^-depth * ||h||_{L^p(w)}
    int depth = 0;
};

[[nodiscard]] RdfResult rdf_iterate(const GridFn& h, const Weight& w, double p, int depth,
                                    double norm_bound, const BallFamily& family);

}  // namespace tentlab
