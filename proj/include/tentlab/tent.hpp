#pragma once

#include <vector>

#include "tentlab/grid.hpp"
#include "tentlab/weights.hpp"

namespace tentlab {

// ============================================================================
// Cone functionals over the upper half-space sampling, and the tent norms
// built from them. The cone over x with aperture beta collects the values
// F(y, t_k) with y in the discrete ball B_d(x, beta t_k), t_k running over the
// truncation window of the level grid; cross-sections are clipped to the box
// like every other ball.
// ============================================================================

// Two conventions for the cross-section factor:
//  - FubiniExact (default): |B_d(x, beta t_k)| / t_k^n times the ball average,
//    i.e. h^n * (sum over the ball) / t_k^n. With this convention the L^r(w)
//    norm of the cone functional is an exact reassociation of a double sum,
//    so the averaging identity below holds to rounding error.
//  - Continuum: v_n beta^n times the ball average, where v_n is the unit-ball
//    volume. Matches closed-form t-integrals for unclipped interior cones.
enum class ConeMode { FubiniExact, Continuum };

// Per-level ball footprints of the cone: for each level k the translation-
// invariant shape of B_d(., beta t_k). Member sets and measures for a given
// center cell are materialized on demand; they agree with DiscreteBall by
// construction (same membership predicate).
struct ConeQuadrature {
    Box box;
    TLevels tlevels;
    double beta = 1.0;
    std::vector<BallShape> shapes;  // one per level

    ConeQuadrature(const Box& box, const TLevels& tlevels, double beta);

    [[nodiscard]] const BallShape& shape(int k) const {
        return shapes[static_cast<size_t>(k)];
    }
    [[nodiscard]] std::vector<long> members(long cell, int k) const;
    [[nodiscard]] double measure(long cell, int k) const;  // member count * h^n
};

/// A_r^beta F (pointwise): the r-th root of the level sum
///   sum_k delta * factor_k(x) * avg_{B_d(x, beta t_k)} |F(., t_k)|^r,
/// with factor_k per ConeMode above.
[[nodiscard]] GridFn cone_functional(const HalfSpaceFn& F, double r, double beta,
                                     ConeMode mode = ConeMode::FubiniExact);

/// || A_r F ||_{L^p(w)} at aperture 1.
[[nodiscard]] double tent_norm(const HalfSpaceFn& F, double r, double p, const Weight& w);

/// || A_r F ||_{L^{p,s}(w)} at aperture 1 (s = kInfinity for the weak norm).
[[nodiscard]] double tent_lorentz_norm(const HalfSpaceFn& F, double r, double p, double s,
                                       const Weight& w);

// Both sides of the averaging identity
//   ||A_r F||_{L^r(w)}^r = sum_k delta * ||F(., t_k)||_{L^r(W_k)}^r,
// where W_k is the ball-averaged weight at scale t_k carrying the discrete
// |B_d(y, t_k)| / t_k^n factor. In the discrete model the two sides are the
// same finite sum reassociated, so rel_error is pure rounding.
struct FubiniResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_error = 0.0;
};

[[nodiscard]] FubiniResidual fubini_identity_residual(const HalfSpaceFn& F, double r,
                                                      const Weight& w);

/// || A_r^2 G ||_{L^1(w)} / || A_r^1 G ||_{L^1(w)}; always >= 1 (cones nest).
/// Throws on a vanishing denominator.
[[nodiscard]] double change_of_aperture_ratio(const HalfSpaceFn& G, double r, const Weight& w);

}  // namespace tentlab
