#pragma once

#include <cstdint>
#include <vector>

#include "progeny/power_series.hpp"
#include "progeny/rational.hpp"
#include "progeny/rng.hpp"

namespace gw::sibuya {

// Heavy-tailed discrete family with survival P(S > n) = prod_{j=1..n}
// (1 - a/(j+k)).  k = 0 is the base family, with generating function
// 1 - (1-z)^a and mass a*(1-a)(2-a)...(n-1-a)/n! at n.
//
// rho < 1 exponentially tilts the law (mass ~ rho^n, renormalized); tilting
// is exact only when (1-rho)^a is rational, enforced at evaluation time.
// lambda < 1 mixes in an atom at zero: (1-lambda) delta_0 + lambda * (rest).
struct SibuyaParams {
    Rational a;
    unsigned k = 0;
    Rational rho{1};
    Rational lambda{1};
};

// 0 < a < k+1; 0 < rho <= 1; 0 < lambda <= 1.  Throws InvalidParams.
void validate(const SibuyaParams& params);

// Generating function sum_n P(S=n) z^n to the given order.
series::PowerSeries gf(const SibuyaParams& params, int order);

// P(S = n); exact.  n == 0 carries the atom (1 - lambda).
Rational pmf(const SibuyaParams& params, std::uint64_t n);

// P(S = n) for n = 0..n_max in one pass.
std::vector<Rational> pmf_prefix(const SibuyaParams& params, std::uint64_t n_max);

// P(S > n); product form when rho == 1 and lambda == 1, cumulative otherwise.
Rational survival(const SibuyaParams& params, std::uint64_t n);

// Exact-law sampler for the untilted family (rho == 1, lambda == 1).
// Draws the first success of the event chain P(success at n) = a/(n+k):
// a bounded sequential scan, then one uniform inverted through the exact
// conditional survival located by galloping + bisection, so heavy-tail
// draws cost O(log S) instead of O(S).  Draws above `cap` throw
// SamplerOverflow.
class Sampler {
  public:
    explicit Sampler(const SibuyaParams& params, std::uint64_t cap = 1'000'000'000,
                     std::uint64_t bulk = 64);

    std::uint64_t draw(rng::StreamRng& rng) const;

    std::uint64_t cap() const { return cap_; }

  private:
    long double a_;
    unsigned k_;
    std::uint64_t cap_;
    std::uint64_t bulk_;
};

} // namespace gw::sibuya
