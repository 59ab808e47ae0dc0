#pragma once

#include <vector>

#include "progeny/rational.hpp"

namespace gw::series {

// Truncated formal power series over Q.  A series of order N carries exact
// coefficients c_0..c_N; everything above N is unknown, not zero.  Binary
// operations therefore return the minimum order of their operands, and no
// operation ever invents coefficients it cannot justify (derivative loses an
// order, division/composition keep the minimum, integration gains one).
class PowerSeries {
  public:
    // coeffs.size() >= 1; order() == coeffs.size() - 1.
    explicit PowerSeries(std::vector<Rational> coeffs);

    static PowerSeries zero(int order);
    static PowerSeries one(int order);
    static PowerSeries identity(int order); // u
    static PowerSeries constant(const Rational& c, int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
    Rational& at(int n) { return c_[static_cast<std::size_t>(n)]; }
    const std::vector<Rational>& coeffs() const { return c_; }

    // to a lower (or equal) order; raising would fabricate coefficients.
    PowerSeries truncated(int order) const;

    bool is_zero() const;

  private:
    std::vector<Rational> c_;
};

// Equality is coefficient-wise up to the common order.
bool operator==(const PowerSeries& x, const PowerSeries& y);
inline bool operator!=(const PowerSeries& x, const PowerSeries& y) { return !(x == y); }

PowerSeries add(const PowerSeries& x, const PowerSeries& y);
PowerSeries sub(const PowerSeries& x, const PowerSeries& y);
PowerSeries neg(const PowerSeries& x);
PowerSeries mul(const PowerSeries& x, const PowerSeries& y);
PowerSeries mul_scalar(const PowerSeries& x, const Rational& c);

// x / y; y must have y[0] != 0 (DivisionByNonUnit otherwise).
PowerSeries div(const PowerSeries& x, const PowerSeries& y);

inline PowerSeries operator+(const PowerSeries& x, const PowerSeries& y) { return add(x, y); }
inline PowerSeries operator-(const PowerSeries& x, const PowerSeries& y) { return sub(x, y); }
inline PowerSeries operator-(const PowerSeries& x) { return neg(x); }
inline PowerSeries operator*(const PowerSeries& x, const PowerSeries& y) { return mul(x, y); }
inline PowerSeries operator*(const PowerSeries& x, const Rational& c) { return mul_scalar(x, c); }
inline PowerSeries operator*(const Rational& c, const PowerSeries& x) { return mul_scalar(x, c); }

// outer(inner); inner must have zero constant term.  Horner for small
// orders, baby-step/giant-step block evaluation above a threshold.
PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner);

// Compositional inverse g with g(s(u)) == s(g(u)) == u; requires s[0] == 0
// and s[1] != 0 (NotInvertible otherwise).  Newton iteration with order
// doubling.
PowerSeries comp_inverse(const PowerSeries& s);

PowerSeries derivative(const PowerSeries& s); // order N-1; N == 0 -> InsufficientOrder
PowerSeries integrate(const PowerSeries& s);  // constant 0, order N+1

PowerSeries log_series(const PowerSeries& s); // requires s[0] == 1
PowerSeries exp_series(const PowerSeries& s); // requires s[0] == 0

// s^e for rational e; requires s[0] == 1.  exp(e*log s) in general, with an
// O(N) binomial recurrence when s is exactly 1 + c*u.
PowerSeries pow_rational(const PowerSeries& s, const Rational& e);

PowerSeries scale_argument(const PowerSeries& s, const Rational& c); // s(c*u)
PowerSeries shift_up(const PowerSeries& s);                          // u*s, order N+1
PowerSeries shift_down(const PowerSeries& s);                        // s/u; requires s[0] == 0

// Value of the truncation polynomial at x (Horner).
Rational eval(const PowerSeries& s, const Rational& x);

namespace detail {
// Direct Lagrange reversion, g_n = (1/n) [w^{n-1}] (w/s(w))^n.  Slower than
// the Newton route; kept as an independently-derived cross-check.
PowerSeries comp_inverse_lagrange(const PowerSeries& s);
} // namespace detail

} // namespace gw::series
