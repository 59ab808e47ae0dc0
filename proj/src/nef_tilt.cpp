#include "progeny/nef_tilt.hpp"

namespace gw::tilt {

using series::PowerSeries;

Rational BisectOptions::default_tol() {
    return make_rational(Integer(1), Integer(1) << 40);
}

MeanReport tilted_mean(const OffspringLaw& p, const Rational& r) {
    if (sgn(r) <= 0)
        throw TiltOutOfRange("tilt parameter must be positive");
    if (std::holds_alternative<std::monostate>(p.family()) && sgn(p.pmf().tail) != 0) {
        // truncated law: the exact prefix ratio is the mean of the tilted
        // truncation
        if (r > 1)
            throw TiltOutOfRange("untagged laws tilt only on (0, 1]");
        Rational num(0), den(0), pw(1);
        for (std::size_t n = 0; n < p.pmf().mass.size(); ++n) {
            den += p.pmf().mass[n] * pw;
            if (n >= 1)
                num += Rational(static_cast<unsigned long>(n)) * p.pmf().mass[n] * pw;
            pw *= r;
        }
        if (sgn(den) == 0)
            throw InvalidParams("law has no mass on its stored support");
        return {num / den, false};
    }
    Rational c = p.gf_value(r);
    return {r * p.gf_derivative_value(r) / c, true};
}

OffspringLaw tilt_offspring(const OffspringLaw& p, const Rational& r) {
    if (sgn(r) <= 0)
        throw TiltOutOfRange("tilt parameter must be positive");

    MeanReport m = tilted_mean(p, r);
    if (m.value > 1)
        throw SupercriticalTilt("tilted mean " + std::string(m.exact ? "" : ">= ") +
                                to_string(m.value) + " exceeds 1");

    Rational c = p.gf_value(r); // also validates the radius
    Pmf pmf;
    pmf.mass.reserve(p.pmf().mass.size());
    Rational pw(1);
    for (const Rational& mass : p.pmf().mass) {
        pmf.mass.push_back(mass * pw / c);
        pw *= r;
    }
    Rational sum(0);
    for (const Rational& mass : pmf.mass)
        sum += mass;
    pmf.tail = Rational(1) - sum;

    OffspringFamily family;
    if (const auto* geo = std::get_if<GeometricFamily>(&p.family()))
        family = GeometricFamily{geo->alpha * r};
    return OffspringLaw(std::move(pmf), std::move(family));
}

ProgenyLaw tilt_progeny(const ProgenyLaw& q, const Rational& rho) {
    if (sgn(rho) <= 0 || rho > 1)
        throw TiltOutOfRange("progeny tilt needs rho in (0, 1]");
    Rational c = q.gf_value(rho);
    if (sgn(c) <= 0)
        throw TiltOutOfRange("law has no mass on its stored support");

    Pmf pmf;
    pmf.support_start = 1;
    pmf.mass.reserve(q.pmf().mass.size());
    Rational pw(1);
    for (const Rational& mass : q.pmf().mass) {
        pw *= rho;
        pmf.mass.push_back(mass * pw / c);
    }
    Rational sum(0);
    for (const Rational& mass : pmf.mass)
        sum += mass;
    pmf.tail = Rational(1) - sum;

    ProgenyFamily family;
    if (const auto* sib = std::get_if<SibuyaFamily>(&q.family()))
        family = SibuyaFamily{sib->a, sib->rho * rho};
    else if (const auto* geo = std::get_if<GeometricProgenyFamily>(&q.family())) {
        if (sgn(geo->alpha) != 0)
            family = SibuyaFamily{make_rational(1, 2),
                                  4 * geo->alpha * (Rational(1) - geo->alpha) * rho};
    }
    return ProgenyLaw(std::move(pmf), std::move(family));
}

RhoResult solve_rho(const ProgenyLaw& q, const Rational& r, const BisectOptions& opts) {
    if (sgn(r) <= 0)
        throw OutOfRange("need r > 0");

    if (const auto* sib = std::get_if<SibuyaFamily>(&q.family())) {
        // f(rho0 * rho) = r * norm0 for the base family: rho0*rho =
        // 1 - (1 - r*norm0)^(1/a)
        auto norm_pow = rational_pow(Rational(1) - sib->rho, sib->a);
        if (norm_pow) {
            Rational target = r * (Rational(1) - *norm_pow); // value of 1-(1-rho0 rho z)^a at solution
            if (target > 1)
                throw OutOfRange("r exceeds f_q(1)");
            auto inner = rational_pow(Rational(1) - target, Rational(1) / sib->a);
            if (inner) {
                Rational rho = (Rational(1) - *inner) / sib->rho;
                if (rho > 1)
                    throw OutOfRange("r exceeds f_q(1)");
                return {rho, true};
            }
        }
    } else if (const auto* geo = std::get_if<GeometricProgenyFamily>(&q.family())) {
        if (sgn(geo->alpha) == 0) {
            if (r > 1)
                throw OutOfRange("r exceeds f_q(1)");
            return {r, true}; // delta_1: f_q(rho) = rho
        }
        Rational ext = geo->alpha <= make_rational(1, 2)
                           ? Rational(1)
                           : (Rational(1) - geo->alpha) / geo->alpha; // f_q(1)
        if (r > ext)
            throw OutOfRange("r exceeds f_q(1) = " + to_string(ext));
        Rational rho = r * (Rational(1) - geo->alpha * r) / (Rational(1) - geo->alpha);
        return {rho, true};
    }

    // bisection on the exact truncated evaluation (closed forms can land on
    // irrational values at dyadic midpoints, the truncation never does)
    const bool tail_free = sgn(q.pmf().tail) == 0;
    Rational top = truncated_gf_value(q.pmf(), Rational(1));
    if (r > top)
        throw OutOfRange("r exceeds the reachable value " + to_string(top) +
                         " of the stored truncation at rho = 1");
    if (r == top)
        return {Rational(1), tail_free};
    Rational lo(0), hi(1);
    for (int it = 0; it < opts.max_iter && hi - lo > opts.tol; ++it) {
        Rational mid = (lo + hi) / 2;
        Rational v = truncated_gf_value(q.pmf(), mid);
        if (v == r)
            return {mid, tail_free};
        (v < r ? lo : hi) = mid;
    }
    return {(lo + hi) / 2, false};
}

series::PowerSeries tilted_pair_residual(const OffspringLaw& p, const ProgenyLaw& q, const Rational& r,
                                   int order) {
    if (order < 1)
        throw Error("residual needs order >= 1");
    MeanReport m = tilted_mean(p, r);
    if (m.value > 1)
        throw SupercriticalTilt("tilted mean " + std::string(m.exact ? "" : ">= ") +
                                to_string(m.value) + " exceeds 1");

    Rational rho = solve_rho(q, r).value;
    PowerSeries fq_t = series::mul_scalar(series::scale_argument(q.gf(order), rho), Rational(1) / r);
    PowerSeries fp_t =
        series::mul_scalar(series::scale_argument(p.gf(order - 1), r), rho / r);
    PowerSeries inner = fq_t.truncated(order - 1);
    return series::sub(fq_t, series::shift_up(series::compose(fp_t, inner)));
}

} // namespace gw::tilt
