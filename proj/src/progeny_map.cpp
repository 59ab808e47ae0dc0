#include "progeny/progeny_map.hpp"

namespace gw {

using series::PowerSeries;

namespace {

void reject_supercritical(const OffspringLaw& p) {
    MeanBound m = p.mean();
    if (m.lower > 1)
        throw SupercriticalOffspring("offspring mean " + std::string(m.exact ? "" : ">= ") +
                                     to_string(m.lower) + " exceeds 1");
}

ProgenyFamily progeny_family_of(const OffspringLaw& p) {
    if (const auto* geo = std::get_if<GeometricFamily>(&p.family()))
        return GeometricProgenyFamily{geo->alpha};
    if (const auto* hb = std::get_if<HbFamily>(&p.family()))
        return SibuyaFamily{Rational(1) / hb->b, Rational(1)};
    return std::monostate{};
}

ProgenyLaw wrap_progeny(std::vector<Rational> mass_from_1, const OffspringLaw& p) {
    Rational sum(0);
    for (const Rational& m : mass_from_1)
        sum += m;
    Pmf pmf;
    pmf.support_start = 1;
    pmf.mass = std::move(mass_from_1);
    pmf.tail = Rational(1) - sum;
    return ProgenyLaw(std::move(pmf), progeny_family_of(p));
}

} // namespace

ProgenyLaw progeny_of(const OffspringLaw& p, int order) {
    if (order < 1)
        throw Error("progeny needs order >= 1");
    reject_supercritical(p);
    if (p.order() < order - 1)
        throw InsufficientOrder("offspring law stores order " + std::to_string(p.order()) +
                                "; progeny to " + std::to_string(order) + " needs " +
                                std::to_string(order - 1));
    PowerSeries fp = p.gf(order - 1);
    std::vector<Rational> q(static_cast<std::size_t>(order), Rational(0));
    q[0] = fp[0];
    PowerSeries pw = fp; // f_p^n
    for (int n = 2; n <= order; ++n) {
        pw = series::mul(pw, fp);
        if (n - 1 <= pw.order())
            q[static_cast<std::size_t>(n - 1)] = pw[n - 1] / n;
    }
    return wrap_progeny(std::move(q), p);
}

ProgenyLaw progeny_of_newton(const OffspringLaw& p, int order) {
    if (order < 1)
        throw Error("progeny needs order >= 1");
    reject_supercritical(p);
    if (p.order() < order - 1)
        throw InsufficientOrder("offspring law stores order " + std::to_string(p.order()) +
                                "; progeny to " + std::to_string(order) + " needs " +
                                std::to_string(order - 1));

    std::vector<Rational> f0(2, Rational(0));
    f0[1] = p.mass(0);
    PowerSeries f(std::move(f0));
    int correct = 1;
    while (correct < order) {
        int work = std::min(2 * correct + 1, order);
        std::vector<Rational> fc = f.coeffs();
        fc.resize(static_cast<std::size_t>(work) + 1, Rational(0));
        PowerSeries fw(std::move(fc));

        PowerSeries fp = p.gf(work - 1);
        PowerSeries g =
            series::sub(fw, series::shift_up(series::compose(fp, fw.truncated(work - 1))));
        // g vanishes to order `correct`
        int v = correct + 1;
        std::vector<Rational> g_sh(g.coeffs().begin() + v, g.coeffs().end());
        if (g_sh.empty())
            g_sh.emplace_back(0);

        int dn = work - v; // order needed for the Jacobian 1 - z f_p'(f)
        PowerSeries den = PowerSeries::one(dn);
        if (dn >= 1) {
            PowerSeries dfp = series::derivative(p.gf(std::min(p.order(), work - 1)));
            PowerSeries inner = fw.truncated(std::max(dn - 1, 0));
            PowerSeries zJ = series::shift_up(series::compose(dfp.truncated(dn - 1), inner));
            den = series::sub(PowerSeries::one(dn), zJ);
        }
        PowerSeries upd = series::div(PowerSeries(std::move(g_sh)), den);

        std::vector<Rational> next = fw.coeffs();
        for (int i = 0; i + v <= work && i <= upd.order(); ++i)
            next[static_cast<std::size_t>(i + v)] -= upd[i];
        f = PowerSeries(std::move(next));
        correct = work;
    }

    std::vector<Rational> mass(f.coeffs().begin() + 1, f.coeffs().end());
    return wrap_progeny(std::move(mass), p);
}

series::PowerSeries offspring_series(const ProgenyLaw& q, int order) {
    if (order < 0)
        throw Error("negative order");
    if (q.order() < order + 1)
        throw InsufficientOrder("progeny law stores order " + std::to_string(q.order()) +
                                "; inverting to " + std::to_string(order) + " needs " +
                                std::to_string(order + 1));
    PowerSeries fq = q.gf(order + 1);
    PowerSeries g = series::comp_inverse(fq);
    return series::div(PowerSeries::one(order), series::shift_down(g));
}

OffspringLaw offspring_of(const ProgenyLaw& q, int order) {
    PowerSeries cand = offspring_series(q, order);
    Rational sum(0);
    for (int n = 0; n <= cand.order(); ++n) {
        if (sgn(cand[n]) < 0)
            throw InvalidParams("not a progeny law: candidate offspring coefficient at " +
                                std::to_string(n) + " is " + to_string(cand[n]));
        sum += cand[n];
        if (sum > 1)
            throw InvalidParams("not a progeny law: candidate offspring mass exceeds 1 by index " +
                                std::to_string(n));
    }
    Pmf pmf;
    pmf.mass = cand.coeffs();
    pmf.tail = Rational(1) - sum;
    OffspringFamily family;
    if (const auto* sib = std::get_if<SibuyaFamily>(&q.family());
        sib != nullptr && sib->rho == 1)
        family = HbFamily{Rational(1) / sib->a};
    return OffspringLaw(std::move(pmf), std::move(family));
}

ProgenyCheckReport check_is_progeny(const ProgenyLaw& q, int order) {
    PowerSeries cand = offspring_series(q, order);
    ProgenyCheckReport report;
    Rational sum(0);
    for (int n = 0; n <= cand.order(); ++n) {
        if (!report.first_negative && sgn(cand[n]) < 0)
            report.first_negative = n;
        sum += cand[n];
        if (!report.first_mass_violation && sum > 1)
            report.first_mass_violation = n;
    }
    report.admissible = !report.first_negative && !report.first_mass_violation;
    report.offspring_prefix = cand.coeffs();
    return report;
}

series::PowerSeries progeny_residual(const OffspringLaw& p, const ProgenyLaw& q, int order) {
    if (order < 1)
        throw Error("residual needs order >= 1");
    PowerSeries fq = q.gf(order);
    PowerSeries fp = p.gf(std::min(p.order(), order - 1));
    PowerSeries inner = fq.truncated(std::min(order - 1, fq.order()));
    return series::sub(fq, series::shift_up(series::compose(fp, inner)));
}

} // namespace gw
