#include "progeny/laws.hpp"

#include "progeny/certify.hpp"
#include "progeny/sibuya.hpp"

namespace gw {

using series::PowerSeries;

namespace {

void validate_pmf(const Pmf& pmf, int expected_start) {
    if (pmf.support_start != expected_start)
        throw InvalidParams("support must start at " + std::to_string(expected_start));
    Rational sum(0);
    for (const Rational& m : pmf.mass) {
        if (sgn(m) < 0)
            throw InvalidParams("negative probability mass");
        sum += m;
    }
    if (sgn(pmf.tail) < 0)
        throw InvalidParams("negative tail mass");
    if (sum + pmf.tail != 1)
        throw InvalidParams("masses plus tail must sum to 1 exactly (off by " +
                            to_string(Rational(1) - sum - pmf.tail) + ")");
}

Rational complement(const std::vector<Rational>& mass) {
    Rational sum(0);
    for (const Rational& m : mass)
        sum += m;
    return Rational(1) - sum;
}

Rational prefix_derivative_value(const Pmf& pmf, const Rational& r) {
    Rational acc(0);
    int n = pmf.support_start + static_cast<int>(pmf.mass.size()) - 1;
    for (auto it = pmf.mass.rbegin(); it != pmf.mass.rend(); --n, ++it) {
        if (n == 0)
            break;
        acc = acc * r + *it * n;
    }
    return acc * pow_int(r, std::max(0, pmf.support_start == 0 ? 0 : pmf.support_start - 1));
}

} // namespace

Rational truncated_gf_value(const Pmf& pmf, const Rational& r) {
    Rational acc(0);
    for (auto it = pmf.mass.rbegin(); it != pmf.mass.rend(); ++it)
        acc = acc * r + *it;
    return acc * pow_int(r, pmf.support_start);
}

OffspringLaw::OffspringLaw(Pmf pmf, OffspringFamily family)
    : pmf_(std::move(pmf)), family_(std::move(family)) {
    if (pmf_.mass.empty())
        throw InvalidParams("offspring law needs at least the mass at 0");
    validate_pmf(pmf_, 0);
}

OffspringLaw OffspringLaw::geometric(const Rational& alpha, int order) {
    if (sgn(alpha) < 0 || alpha >= 1)
        throw InvalidParams("geometric law needs 0 <= alpha < 1");
    if (order < 0)
        throw Error("negative order");
    Pmf pmf;
    pmf.mass.reserve(static_cast<std::size_t>(order) + 1);
    Rational p = Rational(1) - alpha;
    for (int n = 0; n <= order; ++n) {
        pmf.mass.push_back(p);
        p *= alpha;
    }
    pmf.tail = pow_int(alpha, order + 1);
    return OffspringLaw(std::move(pmf), GeometricFamily{alpha});
}

OffspringLaw OffspringLaw::sibuya_offspring(const Rational& b, int order) {
    if (!(b > 1) || b > 2)
        throw InvalidParams("offspring coefficients are a probability law only for 1 < b <= 2 "
                            "(run certify outside that range)");
    PowerSeries h = cert::hb_gf(b, order);
    Pmf pmf;
    pmf.mass = h.coeffs();
    pmf.tail = complement(pmf.mass);
    return OffspringLaw(std::move(pmf), HbFamily{b});
}

OffspringLaw OffspringLaw::delta0(int order) {
    Pmf pmf;
    pmf.mass.assign(static_cast<std::size_t>(order) + 1, Rational(0));
    pmf.mass[0] = 1;
    return OffspringLaw(std::move(pmf));
}

OffspringLaw OffspringLaw::from_pmf(std::vector<Rational> mass, std::optional<Rational> tail) {
    Pmf pmf;
    pmf.mass = std::move(mass);
    pmf.tail = tail ? *tail : complement(pmf.mass);
    return OffspringLaw(std::move(pmf));
}

Rational OffspringLaw::mass(std::uint64_t n) const {
    if (n >= pmf_.mass.size())
        throw InsufficientOrder("mass at " + std::to_string(n) + " is beyond the stored prefix");
    return pmf_.mass[static_cast<std::size_t>(n)];
}

series::PowerSeries OffspringLaw::gf(int order) const {
    if (order < 0)
        throw Error("negative order");
    if (order > this->order())
        throw InsufficientOrder("law stores coefficients to order " + std::to_string(this->order()) +
                                ", asked for " + std::to_string(order));
    return PowerSeries(
        std::vector<Rational>(pmf_.mass.begin(), pmf_.mass.begin() + order + 1));
}

MeanBound OffspringLaw::mean() const {
    if (const auto* geo = std::get_if<GeometricFamily>(&family_))
        return {geo->alpha / (Rational(1) - geo->alpha), true};
    if (std::holds_alternative<HbFamily>(family_))
        return {Rational(1), true}; // critical by construction
    Rational acc(0);
    for (std::size_t n = 1; n < pmf_.mass.size(); ++n)
        acc += Rational(static_cast<unsigned long>(n)) * pmf_.mass[n];
    return {acc, sgn(pmf_.tail) == 0};
}

Rational OffspringLaw::gf_value(const Rational& r) const {
    if (const auto* geo = std::get_if<GeometricFamily>(&family_)) {
        if (abs(geo->alpha * r) >= 1)
            throw TiltOutOfRange("geometric generating function diverges at " + to_string(r) +
                                 " (radius " + to_string(Rational(1) / geo->alpha) + ")");
        return (Rational(1) - geo->alpha) / (Rational(1) - geo->alpha * r);
    }
    if (const auto* hb = std::get_if<HbFamily>(&family_)) {
        if (sgn(r) < 0 || r > 1)
            throw TiltOutOfRange("generating function evaluated outside [0, 1]");
        if (sgn(r) == 0)
            return Rational(1) / hb->b;
        if (r == 1)
            return Rational(1);
        auto pw = rational_pow(Rational(1) - r, hb->b);
        if (!pw)
            throw InvalidParams("(1-r)^b is irrational for r = " + to_string(r) +
                                "; exact evaluation needs a rational value");
        return r / (Rational(1) - *pw);
    }
    if (sgn(r) < 0 || r > 1)
        throw TiltOutOfRange("untagged laws evaluate only on [0, 1]");
    return truncated_gf_value(pmf_, r);
}

Rational OffspringLaw::gf_derivative_value(const Rational& r) const {
    if (const auto* geo = std::get_if<GeometricFamily>(&family_)) {
        if (abs(geo->alpha * r) >= 1)
            throw TiltOutOfRange("geometric generating function diverges at " + to_string(r));
        Rational d = Rational(1) - geo->alpha * r;
        return geo->alpha * (Rational(1) - geo->alpha) / (d * d);
    }
    if (const auto* hb = std::get_if<HbFamily>(&family_)) {
        if (sgn(r) < 0 || r > 1)
            throw TiltOutOfRange("generating function evaluated outside [0, 1]");
        if (sgn(r) == 0)
            return (hb->b - 1) / (2 * hb->b);
        if (r == 1)
            return Rational(1);
        auto pw = rational_pow(Rational(1) - r, hb->b);
        if (!pw)
            throw InvalidParams("(1-r)^b is irrational for r = " + to_string(r));
        Rational d = Rational(1) - *pw;                      // 1 - (1-r)^b
        Rational dp = hb->b * *pw / (Rational(1) - r);       // b (1-r)^{b-1}
        return (d - r * dp) / (d * d);
    }
    if (sgn(r) < 0 || r > 1)
        throw TiltOutOfRange("untagged laws evaluate only on [0, 1]");
    return prefix_derivative_value(pmf_, r);
}

ProgenyLaw::ProgenyLaw(Pmf pmf, ProgenyFamily family)
    : pmf_(std::move(pmf)), family_(std::move(family)) {
    validate_pmf(pmf_, 1);
}

ProgenyLaw ProgenyLaw::sibuya(const Rational& a, int order) {
    return sibuya_tilted(a, Rational(1), order);
}

ProgenyLaw ProgenyLaw::sibuya_tilted(const Rational& a, const Rational& rho, int order) {
    if (order < 1)
        throw Error("progeny law needs order >= 1");
    sibuya::SibuyaParams params;
    params.a = a;
    params.rho = rho;
    auto prefix = sibuya::pmf_prefix(params, static_cast<std::uint64_t>(order));
    Pmf pmf;
    pmf.support_start = 1;
    pmf.mass.assign(prefix.begin() + 1, prefix.end());
    pmf.tail = complement(pmf.mass);
    return ProgenyLaw(std::move(pmf), SibuyaFamily{a, rho});
}

ProgenyLaw ProgenyLaw::delta1(int order) {
    if (order < 1)
        throw Error("progeny law needs order >= 1");
    Pmf pmf;
    pmf.support_start = 1;
    pmf.mass.assign(static_cast<std::size_t>(order), Rational(0));
    pmf.mass[0] = 1;
    return ProgenyLaw(std::move(pmf));
}

ProgenyLaw ProgenyLaw::from_pmf(std::vector<Rational> mass_from_1, std::optional<Rational> tail) {
    if (mass_from_1.empty())
        throw InvalidParams("progeny law needs at least the mass at 1");
    Pmf pmf;
    pmf.support_start = 1;
    pmf.mass = std::move(mass_from_1);
    pmf.tail = tail ? *tail : complement(pmf.mass);
    return ProgenyLaw(std::move(pmf));
}

Rational ProgenyLaw::mass(std::uint64_t n) const {
    if (n < 1 || n > pmf_.mass.size())
        throw InsufficientOrder("mass at " + std::to_string(n) + " is beyond the stored prefix");
    return pmf_.mass[static_cast<std::size_t>(n - 1)];
}

series::PowerSeries ProgenyLaw::gf(int order) const {
    if (order < 1)
        throw Error("progeny generating function needs order >= 1");
    if (order > this->order())
        throw InsufficientOrder("law stores coefficients to order " + std::to_string(this->order()) +
                                ", asked for " + std::to_string(order));
    std::vector<Rational> c(static_cast<std::size_t>(order) + 1, Rational(0));
    for (int n = 1; n <= order; ++n)
        c[static_cast<std::size_t>(n)] = pmf_.mass[static_cast<std::size_t>(n - 1)];
    return PowerSeries(std::move(c));
}

Rational ProgenyLaw::gf_value(const Rational& r) const {
    if (const auto* sib = std::get_if<SibuyaFamily>(&family_)) {
        if (sgn(r) < 0 || r * sib->rho > 1)
            throw TiltOutOfRange("generating function evaluated outside [0, 1/rho]");
        auto num = rational_pow(Rational(1) - sib->rho * r, sib->a);
        auto den = rational_pow(Rational(1) - sib->rho, sib->a);
        if (!num || !den)
            throw InvalidParams("tilted evaluation is irrational at r = " + to_string(r));
        return (Rational(1) - *num) / (Rational(1) - *den);
    }
    if (const auto* geo = std::get_if<GeometricProgenyFamily>(&family_)) {
        if (sgn(geo->alpha) == 0)
            return r; // progeny of delta_0 is delta_1
        Rational sigma = 4 * geo->alpha * (Rational(1) - geo->alpha);
        if (sgn(r) < 0 || sigma * r > 1)
            throw TiltOutOfRange("generating function evaluated beyond the branch point");
        auto root = rational_root(Rational(1) - sigma * r, 2);
        if (!root)
            throw InvalidParams("sqrt(1 - 4a(1-a)r) is irrational at r = " + to_string(r));
        return (Rational(1) - *root) / (2 * geo->alpha);
    }
    if (sgn(r) < 0 || r > 1)
        throw TiltOutOfRange("untagged laws evaluate only on [0, 1]");
    return truncated_gf_value(pmf_, r);
}

} // namespace gw
