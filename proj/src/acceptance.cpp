#include "progeny/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "progeny/certify.hpp"
#include "progeny/errors.hpp"
#include "progeny/gw_sim.hpp"
#include "progeny/laws.hpp"
#include "progeny/nef_tilt.hpp"
#include "progeny/power_series.hpp"
#include "progeny/progeny_map.hpp"
#include "progeny/rational.hpp"
#include "progeny/sibuya.hpp"

namespace gw::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// --- criterion bodies; each returns pass + detail --------------------------

struct Outcome {
    bool pass = false;
    std::string detail;
};

// first negative coefficient of b*h_b at n=45 for b just above 2, under 10 s
Outcome crit_first_negative_near_two() {
    const Rational b = make_rational(2000000001, 1000000000);
    cert::CertificateReport rep = cert::certify(b, 60);
    bool index_ok = rep.first_negative && *rep.first_negative == 45;
    bool time_ok = rep.elapsed_ms < 10'000.0;
    std::string at = rep.first_negative ? std::to_string(*rep.first_negative) : "none";
    return {index_ok && time_ok,
            fmt("first_negative=%s (want 45), scan %.1f ms (budget 10000)", at.c_str(),
                rep.elapsed_ms)};
}

// b=2 makes the reciprocal geometric: P_n = 2^-n for n <= 200
Outcome crit_b2_geometric() {
    auto P = cert::reciprocal_coeffs(Rational(2), 200);
    for (int n = 0; n <= 200; ++n)
        if (P[static_cast<std::size_t>(n)] != pow_int(make_rational(1, 2), n))
            return {false, fmt("P_%d != 2^-%d", n, n)};
    return {true, "P_n == 2^-n exactly for n = 0..200"};
}

// b=3: P_5 = 0, P_6 = -1/27, first negative at 6, and the trigonometric
// closed form 3^(-n/2) sin((n+1)pi/6)/sin(pi/6) matches to 1e-12
Outcome crit_b3() {
    auto P = cert::reciprocal_coeffs(Rational(3), 30);
    if (P[5] != 0)
        return {false, "P_5(3) != 0"};
    if (P[6] != make_rational(-1, 27))
        return {false, "P_6(3) != -1/27"};
    cert::CertificateReport rep = cert::certify(Rational(3), 30);
    if (!rep.first_negative || *rep.first_negative != 6)
        return {false, "first_negative(3) != 6"};
    const long double pi = acosl(-1.0L);
    long double worst = 0;
    for (int n = 0; n <= 30; ++n) {
        long double closed =
            powl(3.0L, -static_cast<long double>(n) / 2.0L) *
            sinl(static_cast<long double>(n + 1) * pi / 6.0L) / sinl(pi / 6.0L);
        long double diff = fabsl(closed - static_cast<long double>(
                                              to_double(P[static_cast<std::size_t>(n)])));
        if (diff > worst)
            worst = diff;
    }
    if (worst >= 1e-12L)
        return {false, fmt("trig form max |diff| = %.3Le >= 1e-12", worst)};
    return {true, fmt("P_5=0, P_6=-1/27, first_negative=6, trig form max |diff| = %.2Le", worst)};
}

// a negative coefficient appears by n=5 once b > 3
Outcome crit_negative_by_five() {
    for (long bv : {4L, 5L, 10L}) {
        cert::CertificateReport rep = cert::certify(Rational(bv), 10);
        if (!rep.first_negative || *rep.first_negative > 5)
            return {false, fmt("b=%ld: no negative by n=5", bv)};
    }
    return {true, "first_negative <= 5 for b in {4, 5, 10}"};
}

// grid over (1,2] with step 1/20: nonnegative to order 500 and the exact
// factorization certificate P * (1 - u*H) == 1 verified at order 500
Outcome crit_positivity_window() {
    std::vector<Rational> grid;
    for (long k = 21; k <= 40; ++k)
        grid.push_back(make_rational(k, 20));
    auto reports = cert::certify_interval(grid, 500);
    for (const auto& rep : reports) {
        if (rep.first_negative)
            return {false, fmt("b=%s: negative coefficient at n=%d",
                               to_string(rep.b).c_str(), *rep.first_negative)};
        if (!rep.structural)
            return {false, fmt("b=%s: factorization certificate failed",
                               to_string(rep.b).c_str())};
    }
    return {true, fmt("%zu grid points, order 500: all nonnegative, certificate exact",
                      reports.size())};
}

// pinned first-negative regressions in the (2,3) window
Outcome crit_failure_window() {
    cert::CertificateReport r1 = cert::certify(make_rational(5, 2), 20);
    if (!r1.first_negative || *r1.first_negative != 7 || !r1.value ||
        *r1.value != make_rational(-25, 4096))
        return {false, "b=5/2: expected first negative P_7 = -25/4096"};
    cert::CertificateReport r2 = cert::certify(make_rational(29, 10), 20);
    if (!r2.first_negative || *r2.first_negative != 6 || !r2.value ||
        *r2.value != make_rational(-4214561, 160000000))
        return {false, "b=29/10: expected first negative P_6 = -4214561/160000000"};
    return {true, "b=5/2: P_7 = -25/4096; b=29/10: P_6 = -4214561/160000000"};
}

// scaled-tail recurrence a_n + a_{n-1} + sum A_{n-k} a_k = A_{n-1} - A_n
Outcome crit_recurrence() {
    for (auto [num, den] : {std::pair<long, long>{5, 2}, {7, 3}}) {
        auto pair = cert::scaled_pair(make_rational(num, den), 100);
        auto check = cert::scaled_recurrence_check(pair, 4);
        if (!check.ok)
            return {false, fmt("b=%ld/%ld: recurrence fails first at n=%d", num, den,
                               check.first_failure ? *check.first_failure : -1)};
    }
    return {true, "recurrence exact for 4 <= n <= 100 at b = 5/2 and 7/3"};
}

// ratio a_{n+1}/a_n against its limit 2/(b-1) at n=100; the exact relative
// gap is (b+1)/(n+2) ~= 3.4% and 3.3%, so the 1% bar is not met at n=100
Outcome crit_ratio_convergence() {
    bool pass = true;
    std::string detail;
    for (auto [num, den] : {std::pair<long, long>{5, 2}, {7, 3}}) {
        cert::RatioReport rep = cert::scaled_ratio_report(make_rational(num, den), 100);
        double gap = to_double(rep.rel_gap);
        if (!(rep.rel_gap < make_rational(1, 100)))
            pass = false;
        if (!detail.empty())
            detail += "; ";
        detail += fmt("b=%ld/%ld: |ratio/limit - 1| = %.4f%%", num, den, gap * 100.0);
    }
    return {pass, detail + " (bar: 1%)"};
}

// offspring -> progeny -> offspring is the identity to order 50, and the
// coefficient-extraction and Newton routes agree exactly
Outcome crit_round_trip() {
    auto run = [](const OffspringLaw& p, const char* name) -> std::string {
        ProgenyLaw q = progeny_of(p, 51);
        ProgenyLaw q2 = progeny_of_newton(p, 51);
        if (q.pmf().mass != q2.pmf().mass)
            return fmt("%s: Lagrange and Newton progeny disagree", name);
        OffspringLaw back = offspring_of(q, 50);
        for (int n = 0; n <= 50; ++n)
            if (back.mass(static_cast<std::uint64_t>(n)) != p.mass(static_cast<std::uint64_t>(n)))
                return fmt("%s: round trip differs at n=%d", name, n);
        return {};
    };
    OffspringLaw geo = OffspringLaw::geometric(make_rational(3, 10), 51);
    if (auto err = run(geo, "geometric(3/10)"); !err.empty())
        return {false, err};
    OffspringLaw hb = OffspringLaw::sibuya_offspring(make_rational(3, 2), 51);
    if (auto err = run(hb, "hb(3/2)"); !err.empty())
        return {false, err};
    return {true, "round trip exact to order 50; Lagrange == Newton (geometric 3/10, hb 3/2)"};
}

// the progeny of geometric(alpha) is the rho-tilted heavy-tail law with
// a = 1/2 and rho = 4 alpha (1-alpha)
Outcome crit_geometric_progeny_closed_form() {
    for (auto [num, den] : {std::pair<long, long>{1, 2}, {3, 10}}) {
        Rational alpha = make_rational(num, den);
        Rational rho = Rational(4) * alpha * (1 - alpha);
        ProgenyLaw q = progeny_of(OffspringLaw::geometric(alpha, 31), 30);
        ProgenyLaw closed = ProgenyLaw::sibuya_tilted(make_rational(1, 2), rho, 30);
        if (q.pmf().mass != closed.pmf().mass)
            return {false, fmt("alpha=%ld/%ld: progeny differs from tilted law", num, den)};
    }
    // frozen spot values for alpha = 3/10
    ProgenyLaw q = progeny_of(OffspringLaw::geometric(make_rational(3, 10), 6), 5);
    if (q.mass(1) != make_rational(7, 10) || q.mass(2) != make_rational(147, 1000) ||
        q.mass(3) != make_rational(3087, 50000) || q.mass(4) != make_rational(64827, 2000000))
        return {false, "alpha=3/10: frozen prefix values changed"};
    return {true, "progeny(geometric a) == tilted heavy-tail, order 30, a in {1/2, 3/10}"};
}

// tilted pair stays a consistent pair: fixed-point residual vanishes
Outcome crit_tilt_residual() {
    OffspringLaw geo = OffspringLaw::geometric(make_rational(1, 2), 45);
    ProgenyLaw geo_q = progeny_of(geo, 45);
    tilt::RhoResult rho1 = tilt::solve_rho(geo_q, make_rational(3, 4));
    if (!rho1.exact || rho1.value != make_rational(15, 16))
        return {false, "geometric: rho(3/4) != 15/16"};
    if (!tilt::tilted_pair_residual(geo, geo_q, make_rational(3, 4), 40).is_zero())
        return {false, "geometric: tilted fixed-point residual != 0"};

    OffspringLaw hb = OffspringLaw::sibuya_offspring(Rational(2), 45);
    ProgenyLaw sib = ProgenyLaw::sibuya(make_rational(1, 2), 45);
    tilt::RhoResult rho2 = tilt::solve_rho(sib, make_rational(1, 2));
    if (!rho2.exact || rho2.value != make_rational(3, 4))
        return {false, "heavy-tail: rho(1/2) != 3/4"};
    if (!tilt::tilted_pair_residual(hb, sib, make_rational(1, 2), 40).is_zero())
        return {false, "heavy-tail: tilted fixed-point residual != 0"};
    return {true, "residual == 0 to order 40; rho = 15/16 and 3/4 exact"};
}

// composing the a and a' generating functions gives the a*a' one
Outcome crit_semigroup() {
    auto gf = [](long num, long den) {
        sibuya::SibuyaParams params;
        params.a = make_rational(num, den);
        return sibuya::gf(params, 100);
    };
    series::PowerSeries lhs = series::compose(gf(7, 10), gf(4, 5));
    if (!(lhs == gf(14, 25)))
        return {false, "compose(f_{7/10}, f_{4/5}) != f_{14/25}"};
    return {true, "compose(f_{7/10}, f_{4/5}) == f_{14/25} exactly to order 100"};
}

// Monte Carlo halves: total progeny under geometric(2/5) and direct
// heavy-tail draws, 1e6 each, TV < 0.005 over {1..20}+tail, bit-identical
// on rerun, both inside 60 s
Outcome crit_monte_carlo() {
    auto t0 = Clock::now();
    const std::uint64_t k_max = 20;

    OffspringLaw p = OffspringLaw::geometric(make_rational(2, 5), 25);
    ProgenyLaw q = progeny_of(p, static_cast<int>(k_max));
    std::vector<Rational> mass = q.pmf().mass;
    Rational tail(1);
    for (const Rational& m : mass)
        tail -= m;

    sim::GWConfig cfg;
    cfg.seed = 20260818;
    cfg.replicas = 1'000'000;
    cfg.max_total = 100'000;
    cfg.record_trajectories = false;
    sim::Histogram h1 = sim::total_progeny_histogram(p, cfg, k_max);
    sim::Histogram h1again = sim::total_progeny_histogram(p, cfg, k_max);
    bool det1 = h1.counts == h1again.counts && h1.tail == h1again.tail;
    sim::CompareReport rep1 = sim::compare(h1, mass, tail, 0.005);

    sibuya::SibuyaParams sp;
    sp.a = make_rational(1, 2);
    sim::Histogram h2 = sim::sample_histogram(sp, 1'000'000, 757, k_max);
    sim::Histogram h2again = sim::sample_histogram(sp, 1'000'000, 757, k_max);
    bool det2 = h2.counts == h2again.counts && h2.tail == h2again.tail;
    auto exact = sibuya::pmf_prefix(sp, k_max);
    std::vector<Rational> mass2(exact.begin() + 1, exact.end());
    Rational tail2(1);
    for (const Rational& m : mass2)
        tail2 -= m;
    sim::CompareReport rep2 = sim::compare(h2, mass2, tail2, 0.005);

    double elapsed_s =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - t0).count();
    bool pass = rep1.pass && rep2.pass && det1 && det2 && elapsed_s < 60.0;
    return {pass, fmt("progeny TV=%.5f, direct TV=%.5f (bar 0.005); rerun identical: %s/%s; "
                      "%.1f s (budget 60)",
                      rep1.tv, rep2.tv, det1 ? "yes" : "no", det2 ? "yes" : "no", elapsed_s)};
}

// documented comparison of quoted closed forms against direct expansion
Outcome crit_discrepancy_report() {
    io::Json rep = discrepancy_report();
    bool ok = rep.at("consistent").get<bool>() && rep.at("p2_at_b2_matches").get<bool>();
    return {ok, rep.dump()};
}

struct Entry {
    const char* id;
    const char* label;
    bool expected_fail;
    std::function<Outcome()> run;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {"1", "near-2 threshold: first negative at n=45 under 10 s", false,
         crit_first_negative_near_two},
        {"2", "b=2 reciprocal coefficients equal 2^-n to n=200", false, crit_b2_geometric},
        {"3", "b=3: P_5=0, P_6=-1/27, trig closed form to n=30", false, crit_b3},
        {"4", "first negative by n=5 for b in {4,5,10}", false, crit_negative_by_five},
        {"5", "positivity + factorization certificate on (1,2] grid, order 500", false,
         crit_positivity_window},
        {"6", "pinned first-negative regressions at b=5/2 and 29/10", false,
         crit_failure_window},
        {"7a", "scaled-tail recurrence exact for n=4..100", false, crit_recurrence},
        {"7b", "tail ratio within 1% of its limit at n=100", true, crit_ratio_convergence},
        {"8", "offspring/progeny round trip, order 50; Lagrange == Newton", false,
         crit_round_trip},
        {"9", "geometric progeny equals tilted heavy-tail law, order 30", false,
         crit_geometric_progeny_closed_form},
        {"10", "tilted-pair fixed-point residual vanishes, order 40", false, crit_tilt_residual},
        {"11", "heavy-tail composition semigroup, order 100", false, crit_semigroup},
        {"12", "Monte Carlo TV < 0.005 at 1e6 samples, deterministic, under 60 s", false,
         crit_monte_carlo},
        {"13", "closed-form discrepancy report (quoted forms vs expansion)", false,
         crit_discrepancy_report},
    };
    return entries;
}

} // namespace

io::Json discrepancy_report() {
    // quoted closed forms for the n=2..5 coefficients of b*u/(1-(1-u)^b);
    // each turns out to be exactly n! times the directly expanded
    // coefficient, so they are rejected in favor of the expansion
    auto rejected = [](int n, const Rational& b) -> Rational {
        Rational b2 = b * b;
        switch (n) {
        case 2: return (b2 - 1) / 6;
        case 3: return (b2 - 1) / 4;
        case 4: return (Rational(19) - b2) * (b2 - 1) / 30;
        case 5: return (Rational(9) - b2) * (b2 - 1) / 4;
        default: throw OutOfRange("no quoted form for n=" + std::to_string(n));
        }
    };
    const std::vector<Rational> sample_bs = {make_rational(3, 2), make_rational(5, 2),
                                             make_rational(7, 2)};
    io::Json samples = io::Json::array();
    bool consistent = true;
    for (const Rational& b : sample_bs) {
        auto P = cert::reciprocal_coeffs(b, 5);
        io::Json rows = io::Json::array();
        for (int n = 2; n <= 5; ++n) {
            Rational quoted = rejected(n, b);
            Rational series = P[static_cast<std::size_t>(n)];
            Rational ratio = quoted / series;
            if (ratio != factorial(static_cast<unsigned long>(n)) || quoted == series)
                consistent = false;
            rows.push_back(io::Json{{"n", n},
                                    {"rejected_form", to_string(quoted)},
                                    {"series_coefficient", to_string(series)},
                                    {"ratio", to_string(ratio)}});
        }
        samples.push_back(io::Json{{"b", to_string(b)}, {"rows", std::move(rows)}});
    }
    Rational p2_at_2 = cert::reciprocal_coeffs(Rational(2), 2)[2];
    io::Json report;
    report["note"] =
        "Quoted closed forms for the n=2..5 coefficients of b*u/(1-(1-u)^b) exceed the "
        "direct series expansion by exactly n!; the expansion is authoritative (at b=2 it "
        "reproduces 2^-n, forcing the n=2 coefficient to 1/4).";
    report["quoted_forms"] = io::Json{{"2", "(b^2-1)/6"},
                                      {"3", "(b^2-1)/4"},
                                      {"4", "(19-b^2)(b^2-1)/30"},
                                      {"5", "(9-b^2)(b^2-1)/4"}};
    report["samples"] = std::move(samples);
    report["expected_ratios"] = io::Json{{"2", "2"}, {"3", "6"}, {"4", "24"}, {"5", "120"}};
    report["consistent"] = consistent;
    report["p2_at_b2"] = to_string(p2_at_2);
    report["p2_at_b2_matches"] = (p2_at_2 == make_rational(1, 4));
    return report;
}

std::vector<CriterionResult> run_all(const Options& opts) {
    std::vector<CriterionResult> results;
    for (const Entry& entry : registry()) {
        if (!opts.only.empty()) {
            bool wanted = false;
            for (const std::string& id : opts.only)
                wanted = wanted || id == entry.id;
            if (!wanted)
                continue;
        } else if (opts.skip_expected_fail && entry.expected_fail) {
            continue;
        }
        CriterionResult r;
        r.id = entry.id;
        r.label = entry.label;
        r.expected_fail = entry.expected_fail;
        auto t0 = Clock::now();
        try {
            Outcome out = entry.run();
            r.pass = out.pass;
            r.detail = out.detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.elapsed_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() -
                                                                                   t0)
                .count();
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_line(const CriterionResult& r) {
    std::string status = r.pass ? "PASS" : (r.expected_fail ? "FAIL (expected)" : "FAIL");
    return fmt("[%s] %-3s %s  (%.1f ms)  %s", status.c_str(), r.id.c_str(), r.label.c_str(),
               r.elapsed_ms, r.detail.c_str());
}

} // namespace gw::acceptance
