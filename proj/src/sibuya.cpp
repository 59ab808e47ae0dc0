#include "progeny/sibuya.hpp"

#include <cmath>
#include <limits>

namespace gw::sibuya {

using series::PowerSeries;

namespace {

constexpr std::uint64_t kMaxExactIndex = 1u << 22;

// Taylor coefficients of (1-u)^a up to the given order.
PowerSeries binomial_series(const Rational& a, int order) {
    std::vector<Rational> lin(static_cast<std::size_t>(order) + 1, Rational(0));
    lin[0] = 1;
    if (order >= 1)
        lin[1] = -1;
    return series::pow_rational(PowerSeries(std::move(lin)), a);
}

// P_k(1) = (1-a)_k / k!  (value at 1 of the degree-(k-1) Taylor prefix).
Rational prefix_poly_at_one(const Rational& a, unsigned k) {
    return pochhammer(Rational(1) - a, k) / factorial(k);
}

bool is_positive_integer(const Rational& x) {
    return x > 0 && x.get_den() == 1;
}

} // namespace

void validate(const SibuyaParams& params) {
    if (!(params.a > 0) || !(params.a < Rational(params.k) + 1))
        throw InvalidParams("need 0 < a < k+1 (got a = " + to_string(params.a) +
                            ", k = " + std::to_string(params.k) + ")");
    if (params.k >= 1 && is_positive_integer(params.a))
        throw InvalidParams("integer a lies outside the exact generating-function family for k >= 1");
    if (!(params.rho > 0) || params.rho > 1)
        throw InvalidParams("need 0 < rho <= 1");
    if (!(params.lambda > 0) || params.lambda > 1)
        throw InvalidParams("need 0 < lambda <= 1");
}

series::PowerSeries gf(const SibuyaParams& params, int order) {
    validate(params);
    if (order < 0)
        throw Error("negative series order");
    const unsigned k = params.k;

    PowerSeries b = binomial_series(params.a, order + static_cast<int>(k));
    std::vector<Rational> base(static_cast<std::size_t>(order) + 1, Rational(0));
    if (k == 0) {
        for (int n = 1; n <= order; ++n)
            base[static_cast<std::size_t>(n)] = -b[n];
    } else {
        Rational pk1 = prefix_poly_at_one(params.a, k);
        for (int n = 1; n <= order; ++n)
            base[static_cast<std::size_t>(n)] = -b[n + static_cast<int>(k)] / pk1;
    }
    PowerSeries f{std::move(base)};

    if (params.rho != 1) {
        auto pow_r = rational_pow(Rational(1) - params.rho, params.a);
        if (!pow_r)
            throw InvalidParams("(1-rho)^a is irrational for rho = " + to_string(params.rho) +
                                ", a = " + to_string(params.a) +
                                "; exact tilting needs a rational value");
        Rational norm;
        if (k == 0) {
            norm = Rational(1) - *pow_r;
        } else {
            // value of the generating function at rho, in closed form
            Rational pk_rho(0);
            Rational p(1);
            for (unsigned i = 0; i < k; ++i) {
                pk_rho += b[static_cast<int>(i)] * p;
                p *= params.rho;
            }
            norm = (pk_rho - *pow_r) / (pow_int(params.rho, static_cast<long>(k)) *
                                        prefix_poly_at_one(params.a, k));
        }
        f = series::mul_scalar(series::scale_argument(f, params.rho), Rational(1) / norm);
    }

    if (params.lambda != 1) {
        f = series::mul_scalar(f, params.lambda);
        f.at(0) = Rational(1) - params.lambda;
    }
    return f;
}

Rational pmf(const SibuyaParams& params, std::uint64_t n) {
    validate(params);
    if (n == 0)
        return Rational(1) - params.lambda;
    if (n > kMaxExactIndex)
        throw OutOfRange("pmf index too large for exact evaluation");
    return gf(params, static_cast<int>(n))[static_cast<int>(n)];
}

std::vector<Rational> pmf_prefix(const SibuyaParams& params, std::uint64_t n_max) {
    if (n_max > kMaxExactIndex)
        throw OutOfRange("pmf index too large for exact evaluation");
    return gf(params, static_cast<int>(n_max)).coeffs();
}

Rational survival(const SibuyaParams& params, std::uint64_t n) {
    validate(params);
    if (params.rho == 1 && params.lambda == 1) {
        // prod_{j=1..n} (j+k-a)/(j+k)
        Rational kk(params.k);
        return pochhammer(kk + 1 - params.a, static_cast<unsigned long>(n)) /
               pochhammer(kk + 1, static_cast<unsigned long>(n));
    }
    auto prefix = pmf_prefix(params, n);
    Rational acc(1);
    for (const Rational& m : prefix)
        acc -= m;
    return acc;
}

Sampler::Sampler(const SibuyaParams& params, std::uint64_t cap, std::uint64_t bulk)
    : a_(0), k_(params.k), cap_(cap), bulk_(bulk == 0 ? 1 : bulk) {
    validate(params);
    if (params.rho != 1 || params.lambda != 1)
        throw InvalidParams("sampling is implemented for the untilted family (rho == lambda == 1)");
    a_ = static_cast<long double>(mpq_get_d(params.a.get_mpq_t()));
}

std::uint64_t Sampler::draw(rng::StreamRng& rng) const {
    // event chain: success at n with probability a/(n+k)
    for (std::uint64_t n = 1; n <= bulk_; ++n) {
        if (static_cast<long double>(rng.u01()) * static_cast<long double>(n + k_) < a_) {
            if (n > cap_)
                throw SamplerOverflow("draw exceeded cap");
            return n;
        }
    }

    // S > m: invert the conditional survival with a single uniform.
    // log P(S > n) - log P(S > m) = L(n) - L(m),
    // L(n) = lgamma(n+1+k-a) - lgamma(n+1+k), strictly decreasing.
    const auto L = [this](std::uint64_t n) -> long double {
        long double x = static_cast<long double>(n) + 1.0L + static_cast<long double>(k_);
        return lgammal(x - a_) - lgammal(x);
    };
    const std::uint64_t m = bulk_;
    const long double lm = L(m);
    const long double lv = logl(static_cast<long double>(rng.u01_open()));

    // smallest n > m with L(n) - L(m) <= log V
    std::uint64_t lo = m;
    std::uint64_t hi = m + 1;
    std::uint64_t step = 1;
    while (L(hi) - lm > lv) {
        lo = hi;
        if (hi >= cap_)
            throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
        step *= 2;
        hi = (cap_ - hi < step) ? cap_ : hi + step;
    }
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (L(mid) - lm <= lv)
            hi = mid;
        else
            lo = mid;
    }
    if (hi > cap_)
        throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
    return hi;
}

} // namespace gw::sibuya
