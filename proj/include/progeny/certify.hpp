#pragma once

#include <optional>
#include <vector>

#include "progeny/power_series.hpp"
#include "progeny/rational.hpp"

namespace gw::cert {

// Machinery around the candidate offspring generating function
//
//     h_b(u) = u / (1 - (1-u)^b),   b > 1,
//
// whose progeny is the heavy-tailed law with generating function
// 1 - (1-z)^(1/b).  h_b is a probability generating function exactly when
// its Taylor coefficients are nonnegative; these routines compute the
// coefficients exactly and certify or refute nonnegativity.
//
// Factorization used throughout: (1 - (1-u)^b) = b*u*psi(u) with
// psi_n = (1-b)_n / (n+1)!, so  b*h_b = 1/psi =: P  and the coefficient of
// u^n in h_b is P_n / b.

// psi_0..psi_{n_max}
std::vector<Rational> psi_coeffs(const Rational& b, int n_max);

// P_0..P_{n_max}, the reciprocal of psi (P_0 = 1).
std::vector<Rational> reciprocal_coeffs(const Rational& b, int n_max);

// h_b as a series, coefficients P_n / b.
series::PowerSeries hb_gf(const Rational& b, int order);

// H_n = (b-1)(2-b)_n / (n+2)!; for 1 < b <= 2 these are nonnegative and
// P * (1 - u*H(u)) == 1, which certifies positivity of P structurally.
std::vector<Rational> h_factor_coeffs(const Rational& b, int n_max);

// P * (1 - u*H) == 1 checked exactly to the given order.
bool product_identity_holds(const Rational& b, int order);

struct CertificateReport {
    Rational b;
    int n_max = 0;
    std::optional<int> first_negative; // smallest n with P_n < 0
    std::optional<Rational> value;     // P at that index
    bool structural = false;           // 1 < b <= 2 certificate verified
    double elapsed_ms = 0.0;
};

// Scan P_0..P_{n_max} for a sign change (early exit at the first negative);
// when none is found and 1 < b <= 2, verify the structural certificate to
// n_max as well.  Requires b > 1.
CertificateReport certify(const Rational& b, int n_max);

// certify() over a grid, fanned out across threads (0 = hardware choice),
// results in input order.
std::vector<CertificateReport> certify_interval(const std::vector<Rational>& grid, int n_max,
                                                int threads = 0);

// Scaled tail sequences: A_n = P_n * (2/(b-1))^n and a_n = psi_n * (2/(b-1))^n.
struct ScaledSeriesPair {
    Rational b;
    std::vector<Rational> A;
    std::vector<Rational> a;
};

ScaledSeriesPair scaled_pair(const Rational& b, int n_max);

// The scaled sequences satisfy, for n >= 4,
//   a_n + a_{n-1} + sum_{k=2}^{n-2} A_{n-k} a_k = A_{n-1} - A_n.
struct RecurrenceCheck {
    bool ok = true;
    std::optional<int> first_failure;
};

RecurrenceCheck scaled_recurrence_check(const ScaledSeriesPair& pair, int n_from = 4);

// a_{n+1}/a_n against its limit 2/(b-1): returns the exact relative gap
// |ratio/limit - 1|.
struct RatioReport {
    int n = 0;
    Rational ratio;
    Rational limit;
    Rational rel_gap;
};

RatioReport scaled_ratio_report(const Rational& b, int n);

} // namespace gw::cert
