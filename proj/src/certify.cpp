#include "progeny/certify.hpp"

#include <chrono>
#include <future>
#include <thread>

namespace gw::cert {

using series::PowerSeries;

namespace {

void validate_b(const Rational& b) {
    if (!(b > 1))
        throw InvalidParams("need b > 1 (got " + to_string(b) + ")");
}

} // namespace

std::vector<Rational> psi_coeffs(const Rational& b, int n_max) {
    validate_b(b);
    std::vector<Rational> psi;
    psi.reserve(static_cast<std::size_t>(n_max) + 1);
    psi.emplace_back(1);
    for (int n = 1; n <= n_max; ++n)
        psi.push_back(psi.back() * (n - b) / (n + 1));
    return psi;
}

std::vector<Rational> reciprocal_coeffs(const Rational& b, int n_max) {
    std::vector<Rational> psi = psi_coeffs(b, n_max);
    std::vector<Rational> p;
    p.reserve(psi.size());
    p.emplace_back(1);
    for (int n = 1; n <= n_max; ++n) {
        Rational acc(0);
        for (int k = 1; k <= n; ++k)
            acc -= psi[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(n - k)];
        p.push_back(std::move(acc));
    }
    return p;
}

series::PowerSeries hb_gf(const Rational& b, int order) {
    std::vector<Rational> p = reciprocal_coeffs(b, order);
    for (Rational& x : p)
        x /= b;
    return PowerSeries(std::move(p));
}

std::vector<Rational> h_factor_coeffs(const Rational& b, int n_max) {
    validate_b(b);
    std::vector<Rational> h;
    h.reserve(static_cast<std::size_t>(n_max) + 1);
    h.push_back((b - 1) / 2);
    for (int n = 1; n <= n_max; ++n)
        h.push_back(h.back() * (n + 1 - b) / (n + 2));
    return h;
}

bool product_identity_holds(const Rational& b, int order) {
    PowerSeries p{reciprocal_coeffs(b, order)};
    PowerSeries one_minus_uh = series::sub(
        PowerSeries::one(order), series::shift_up(PowerSeries(h_factor_coeffs(b, order - 1))));
    return series::mul(p, one_minus_uh) == PowerSeries::one(order);
}

CertificateReport certify(const Rational& b, int n_max) {
    validate_b(b);
    auto t0 = std::chrono::steady_clock::now();

    CertificateReport report;
    report.b = b;
    report.n_max = n_max;

    // online reciprocal so the scan can stop at the first sign change
    std::vector<Rational> psi = psi_coeffs(b, n_max);
    std::vector<Rational> p;
    p.reserve(psi.size());
    p.emplace_back(1);
    for (int n = 1; n <= n_max; ++n) {
        Rational acc(0);
        for (int k = 1; k <= n; ++k)
            acc -= psi[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(n - k)];
        if (sgn(acc) < 0) {
            report.first_negative = n;
            report.value = acc;
            break;
        }
        p.push_back(std::move(acc));
    }

    if (!report.first_negative && b > 1 && b <= 2) {
        bool h_nonneg = true;
        for (const Rational& h : h_factor_coeffs(b, n_max)) {
            if (sgn(h) < 0) {
                h_nonneg = false;
                break;
            }
        }
        report.structural = h_nonneg && (n_max < 1 || product_identity_holds(b, n_max));
    }

    auto t1 = std::chrono::steady_clock::now();
    report.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

std::vector<CertificateReport> certify_interval(const std::vector<Rational>& grid, int n_max,
                                                int threads) {
    if (threads <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        threads = hc == 0 ? 1 : static_cast<int>(hc);
    }
    if (threads == 1 || grid.size() <= 1) {
        std::vector<CertificateReport> out;
        out.reserve(grid.size());
        for (const Rational& b : grid)
            out.push_back(certify(b, n_max));
        return out;
    }
    std::vector<std::future<CertificateReport>> futs;
    futs.reserve(grid.size());
    for (const Rational& b : grid)
        futs.push_back(std::async(std::launch::async, [b, n_max] { return certify(b, n_max); }));
    std::vector<CertificateReport> out;
    out.reserve(grid.size());
    for (auto& f : futs)
        out.push_back(f.get());
    return out;
}

ScaledSeriesPair scaled_pair(const Rational& b, int n_max) {
    validate_b(b);
    if (b == 2)
        throw InvalidParams("scaled sequences need b != 2 (scale factor 2/(b-1) degenerates)");
    ScaledSeriesPair pair;
    pair.b = b;
    pair.A = reciprocal_coeffs(b, n_max);
    pair.a = psi_coeffs(b, n_max);
    const Rational s = Rational(2) / (b - 1);
    Rational p(1);
    for (int n = 1; n <= n_max; ++n) {
        p *= s;
        pair.A[static_cast<std::size_t>(n)] *= p;
        pair.a[static_cast<std::size_t>(n)] *= p;
    }
    return pair;
}

RecurrenceCheck scaled_recurrence_check(const ScaledSeriesPair& pair, int n_from) {
    RecurrenceCheck check;
    int n_max = static_cast<int>(std::min(pair.A.size(), pair.a.size())) - 1;
    for (int n = std::max(n_from, 2); n <= n_max; ++n) {
        Rational lhs = pair.a[static_cast<std::size_t>(n)] + pair.a[static_cast<std::size_t>(n - 1)];
        for (int k = 2; k <= n - 2; ++k)
            lhs += pair.A[static_cast<std::size_t>(n - k)] * pair.a[static_cast<std::size_t>(k)];
        Rational rhs =
            pair.A[static_cast<std::size_t>(n - 1)] - pair.A[static_cast<std::size_t>(n)];
        if (lhs != rhs) {
            check.ok = false;
            check.first_failure = n;
            break;
        }
    }
    return check;
}

RatioReport scaled_ratio_report(const Rational& b, int n) {
    validate_b(b);
    if (b == 2)
        throw InvalidParams("ratio limit needs b != 2");
    std::vector<Rational> psi = psi_coeffs(b, n + 1);
    const Rational s = Rational(2) / (b - 1);
    // common power of s cancels in the ratio except for one factor
    if (sgn(psi[static_cast<std::size_t>(n)]) == 0)
        throw InvalidParams("scaled sequence vanishes at n = " + std::to_string(n) +
                            " (integer b terminates the series)");
    RatioReport report;
    report.n = n;
    report.limit = s;
    report.ratio = psi[static_cast<std::size_t>(n + 1)] / psi[static_cast<std::size_t>(n)] * s;
    report.rel_gap = abs(report.ratio / report.limit - 1);
    return report;
}

} // namespace gw::cert
