#pragma once

#include "progeny/laws.hpp"

namespace gw::tilt {

// Exponential tilting within the natural exponential family of a law:
// offspring side p -> p^{(r)} with mass p_n r^n / f_p(r), progeny side
// q -> q^{(rho)} with mass q_n rho^n / f_q(rho).  The tilted pair stays a
// consistent offspring/progeny pair when rho solves f_q(rho) = r (then
// f_p(r) = r / rho); tilted_pair_residual checks the tilted fixed-point
// equation exactly.

struct MeanReport {
    Rational value; // exact value or lower bound
    bool exact = false;
};

// Mean of the r-tilted offspring law, r * f_p'(r) / f_p(r); exact for tagged
// families and tail-free laws.
MeanReport tilted_mean(const OffspringLaw& p, const Rational& r);

// Throws TiltOutOfRange for r <= 0 or beyond the radius, SupercriticalTilt
// when the tilted mean (provably) exceeds 1.  Untagged laws are restricted
// to 0 < r <= 1 and tilt their stored truncation.
OffspringLaw tilt_offspring(const OffspringLaw& p, const Rational& r);

// Throws TiltOutOfRange for rho outside (0, 1].
ProgenyLaw tilt_progeny(const ProgenyLaw& q, const Rational& rho);

struct RhoResult {
    Rational value;
    bool exact = false;
};

struct BisectOptions {
    Rational tol = default_tol(); // 2^-40
    int max_iter = 200;
    static Rational default_tol();
};

// Solve f_q(rho) = r for rho in (0, 1]: closed form for tagged families,
// bisection on the exact truncation otherwise (exact if the midpoint lands
// on the root).  Throws OutOfRange when r is outside (0, f_q(1)].
RhoResult solve_rho(const ProgenyLaw& q, const Rational& r, const BisectOptions& opts = {});

// Exact residual f_{q^{(rho)}} - z f_{p^{(r)}}(f_{q^{(rho)}}) with
// rho = solve_rho(q, r); identically zero to its order when (p, q) is a
// consistent pair and the tilt is admissible.  Uses the pair relations
// f_q(rho) = r and f_p(r) = r/rho for the normalizers, which follow from
// the fixed-point equation at z = rho.
series::PowerSeries tilted_pair_residual(const OffspringLaw& p, const ProgenyLaw& q, const Rational& r,
                                   int order);

} // namespace gw::tilt
