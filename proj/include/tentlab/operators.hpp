#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tentlab/grid.hpp"
#include "tentlab/weights.hpp"

namespace tentlab {

// ============================================================================
// Pointwise operators on GridFn
// ============================================================================

/// Uncentered maximal function restricted to a ball family: at each cell x,
/// the largest average of |f| over a family ball containing x.
[[nodiscard]] GridFn maximal(const GridFn& f, const BallFamily& family);

/// Fractional variant: sup over containing balls of t^alpha avg_B |f|,
/// 0 <= alpha < n.
[[nodiscard]] GridFn frac_maximal(const GridFn& f, double alpha, const BallFamily& family);

/// Safety-factor-2 empirical estimate of the L^p(w) operator norm of the
/// maximal operator over the probe set.
[[nodiscard]] double maximal_opnorm_estimate(const Weight& w, double p,
                                             const std::vector<GridFn>& probes,
                                             const BallFamily& family);

/// Discrete fractional integral: kernel |x-y|^{alpha-n} (no Gamma-function
/// normalization); the singular self-cell entry is the exact cell average of
/// the kernel (in 2D the angular factor is integrated to machine precision).
[[nodiscard]] GridFn riesz_potential(const GridFn& f, double alpha);

/// Discrete Hilbert transform (n = 1 only, no 1/pi): principal value realized
/// by skipping the self cell.
[[nodiscard]] GridFn hilbert(const GridFn& f);

// ============================================================================
// OperatorFamily: a scale-indexed family {T_t} acting on slices.
//   averaging  T_t f = avg_{B(.,t)} f
//   heat       T_t f = renormalized Gaussian smoothing at width t
//   identity   T_t f = f
//   constant   T_t f = T f for a fixed base operator (maximal / hilbert / riesz)
// ============================================================================

class OperatorFamily {
public:
    enum class Kind { Averaging, Heat, Identity, Constant };
    enum class BaseOp { None, Maximal, Hilbert, RieszPotential };

    [[nodiscard]] static OperatorFamily averaging();
    [[nodiscard]] static OperatorFamily heat();
    [[nodiscard]] static OperatorFamily identity();
    [[nodiscard]] static OperatorFamily constant_maximal(BallFamily family);
    [[nodiscard]] static OperatorFamily constant_hilbert();
    [[nodiscard]] static OperatorFamily constant_riesz(double alpha);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] BaseOp base() const { return base_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] const BallFamily& family() const;
    [[nodiscard]] bool linear() const { return !(kind_ == Kind::Constant && base_ == BaseOp::Maximal); }
    [[nodiscard]] bool scale_dependent() const {
        return kind_ == Kind::Averaging || kind_ == Kind::Heat;
    }
    [[nodiscard]] std::string name() const;

private:
    OperatorFamily(Kind k, BaseOp b, double a, std::shared_ptr<const BallFamily> fam)
        : kind_(k), base_(b), alpha_(a), family_(std::move(fam)) {}
    Kind kind_;
    BaseOp base_;
    double alpha_;
    std::shared_ptr<const BallFamily> family_;
};

/// Apply the family member at scale t to a single slice.
[[nodiscard]] GridFn family_apply(const OperatorFamily& fam, double t, const GridFn& f);

/// Apply slicewise over all levels: (T F)(., t_k) = T_{t_k} F(., t_k).
[[nodiscard]] HalfSpaceFn extend_slicewise(const OperatorFamily& fam, const HalfSpaceFn& F);

/// Gaussian smoothing at width t with the discretized kernel renormalized to
/// unit mass on the box (exactly reproduces constants).
[[nodiscard]] GridFn heat_apply(const GridFn& f, double t);

// ============================================================================
// Off-diagonal decay measurement
// ============================================================================

struct OffDiagCase {
    std::vector<long> E;
    std::vector<long> F;
    double t = 0.0;
    double d = 0.0;  // exact separation of the two cell sets (center distance)
};

/// Disjoint half-box strips (in the first coordinate) separated by the grid
/// distance closest to ratio*t for each requested ratio; ratio 0 gives E = F.
[[nodiscard]] std::vector<OffDiagCase> strip_cases(const Box& box,
                                                   const std::vector<double>& d_over_t,
                                                   double t);

struct OffDiagPoint {
    double t = 0.0;
    double d = 0.0;
    double ratio = 0.0;  // max over probes of ||1_E T_t (1_F f)||_r / ||1_F f||_r
};

struct OffDiagProfile {
    double r = 0.0;
    std::vector<OffDiagPoint> points;
    double m_fit = 0.0;       // least-squares order; +inf marker when the fit is impossible
    bool fit_valid = false;   // at least two distinct abscissae with positive ratio
    double residual = 0.0;    // rms residual of the log fit
    bool has_cutoff_zero = false;    // some d > 0 ratio is exactly (<= 1e-14) zero
    bool has_near_positive = false;  // some d > 0 ratio is positive
};

/// Measures decay ratios over the given geometry and fits log(ratio) against
/// -log(1 + d/t) on the points with ratio > 1e-14. Requires a linear family.
[[nodiscard]] OffDiagProfile offdiag_profile(const OperatorFamily& fam, double r,
                                             const std::vector<GridFn>& probes,
                                             const std::vector<OffDiagCase>& geometry);

/// Restriction of f to a cell set (zero elsewhere).
[[nodiscard]] GridFn mask_cells(const GridFn& f, const std::vector<long>& cells);

}  // namespace tentlab
