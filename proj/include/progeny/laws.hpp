#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "progeny/power_series.hpp"
#include "progeny/rational.hpp"

namespace gw {

// Exact probability mass function on {support_start, support_start+1, ...}:
// mass[i] = P(X = support_start + i), plus the exact mass beyond the stored
// prefix. All entries nonnegative, sum + tail == 1.
struct Pmf {
    int support_start = 0;
    std::vector<Rational> mass;
    Rational tail{0};
};

// Closed-form family tags. A tagged law still stores its exact prefix; the
// tag adds exact evaluation of the generating function, its derivative, and
// the mean beyond the stored order.

// p_n = (1-alpha) alpha^n, f_p(z) = (1-alpha)/(1-alpha z)
struct GeometricFamily {
    Rational alpha;
};

// f_p(u) = u / (1 - (1-u)^b), the critical law whose progeny is the
// heavy-tailed family with generating function 1 - (1-z)^(1/b); 1 < b <= 2.
struct HbFamily {
    Rational b;
};

// progeny-side: generating function (1 - (1 - rho*z)^a) / (1 - (1-rho)^a)
struct SibuyaFamily {
    Rational a;
    Rational rho{1};
};

// progeny of a geometric offspring law (closed forms from the quadratic
// fixed-point equation)
struct GeometricProgenyFamily {
    Rational alpha;
};

using OffspringFamily = std::variant<std::monostate, GeometricFamily, HbFamily>;
using ProgenyFamily = std::variant<std::monostate, SibuyaFamily, GeometricProgenyFamily>;

struct MeanBound {
    Rational lower;
    bool exact = false;
};

// Horner value of the stored prefix: the exact generating-function value of
// the truncated law (a lower bound of the full value for r >= 0).
Rational truncated_gf_value(const Pmf& pmf, const Rational& r);

// Offspring law: support {0, 1, 2, ...}.
class OffspringLaw {
  public:
    OffspringLaw(Pmf pmf, OffspringFamily family = {});

    static OffspringLaw geometric(const Rational& alpha, int order);
    static OffspringLaw sibuya_offspring(const Rational& b, int order); // h_b coefficients
    static OffspringLaw delta0(int order = 0);
    // tail defaults to 1 - sum(mass); must be >= 0 either way
    static OffspringLaw from_pmf(std::vector<Rational> mass, std::optional<Rational> tail = {});

    const Pmf& pmf() const { return pmf_; }
    const OffspringFamily& family() const { return family_; }
    int order() const { return static_cast<int>(pmf_.mass.size()) - 1; }
    Rational mass(std::uint64_t n) const;

    // Generating function truncation; order must not exceed the stored
    // prefix (InsufficientOrder).
    series::PowerSeries gf(int order) const;

    // Mean: exact for tagged families and tail-free laws, otherwise the
    // exact prefix lower bound.
    MeanBound mean() const;

    // f_p(r), exact: closed form for tagged families (TiltOutOfRange beyond
    // the radius), truncated evaluation otherwise (restricted to 0 <= r <= 1,
    // exact when tail == 0).
    Rational gf_value(const Rational& r) const;
    Rational gf_derivative_value(const Rational& r) const;

  private:
    Pmf pmf_;
    OffspringFamily family_;
};

// Progeny (total-population) law: support {1, 2, ...}.
class ProgenyLaw {
  public:
    ProgenyLaw(Pmf pmf, ProgenyFamily family = {});

    static ProgenyLaw sibuya(const Rational& a, int order);
    static ProgenyLaw sibuya_tilted(const Rational& a, const Rational& rho, int order);
    static ProgenyLaw delta1(int order = 1);
    static ProgenyLaw from_pmf(std::vector<Rational> mass_from_1, std::optional<Rational> tail = {});

    const Pmf& pmf() const { return pmf_; }
    const ProgenyFamily& family() const { return family_; }
    // highest support point stored
    int order() const { return static_cast<int>(pmf_.mass.size()); }
    Rational mass(std::uint64_t n) const;

    // Generating function truncation (constant coefficient 0).
    series::PowerSeries gf(int order) const;

    // f_q(r) exact; closed form for tagged families when rational, truncated
    // evaluation otherwise.
    Rational gf_value(const Rational& r) const;

    ProgenyLaw with_family(ProgenyFamily family) const { return ProgenyLaw(pmf_, std::move(family)); }

  private:
    Pmf pmf_;
    ProgenyFamily family_;
};

} // namespace gw
