#pragma once

#include <optional>

#include "progeny/laws.hpp"

namespace gw {

// The correspondence between an offspring law p (mean <= 1) and the law q of
// the total population of the branching process it drives: the generating
// functions satisfy f_q(z) = z * f_p(f_q(z)), and conversely
// f_p(u) = u / g(u) with g the compositional inverse of f_q.

// q_1..q_order via the coefficient-extraction route
// q_n = (1/n) [u^{n-1}] f_p(u)^n; needs p stored to order-1 at least.
// Throws SupercriticalOffspring when the (lower bound of the) mean exceeds 1.
ProgenyLaw progeny_of(const OffspringLaw& p, int order);

// Same law by Newton iteration on the fixed-point equation; independent
// route kept for cross-validation.
ProgenyLaw progeny_of_newton(const OffspringLaw& p, int order);

// Raw inverse map: coefficients of u / g(u), g = comp_inverse(f_q); the
// candidate offspring coefficients whether or not they form a law.  Needs q
// stored to order+1.
series::PowerSeries offspring_series(const ProgenyLaw& q, int order);

// offspring_series as a validated law; InvalidParams when q is not a progeny
// (negative candidate coefficient or prefix mass above 1).
OffspringLaw offspring_of(const ProgenyLaw& q, int order);

struct ProgenyCheckReport {
    bool admissible = false;
    std::optional<int> first_negative;       // first n with candidate p_n < 0
    std::optional<int> first_mass_violation; // first n with sum_{k<=n} p_k > 1
    std::vector<Rational> offspring_prefix;  // candidate p_0..p_order
};

// Does q admit an offspring law (up to the inspected order)?
ProgenyCheckReport check_is_progeny(const ProgenyLaw& q, int order);

// f_q - z * f_p(f_q) as an exact series; identically zero to its order when
// (p, q) is a consistent pair.
series::PowerSeries progeny_residual(const OffspringLaw& p, const ProgenyLaw& q, int order);

} // namespace gw
