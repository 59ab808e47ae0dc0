#include "progeny/power_series.hpp"

#include <algorithm>
#include <cmath>

namespace gw::series {

namespace {

const Rational kZero(0);

// acc[i] += s * x[i] for i <= n_max, skipping zero work.
void axpy(std::vector<Rational>& acc, const Rational& s, const PowerSeries& x, int n_max) {
    if (sgn(s) == 0)
        return;
    int top = std::min(n_max, x.order());
    for (int i = 0; i <= top; ++i) {
        if (sgn(x[i]) != 0)
            acc[static_cast<std::size_t>(i)] += s * x[i];
    }
}

} // namespace

PowerSeries::PowerSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty())
        throw Error("power series needs at least the constant coefficient");
}

PowerSeries PowerSeries::zero(int order) {
    return PowerSeries(std::vector<Rational>(static_cast<std::size_t>(order) + 1, kZero));
}

PowerSeries PowerSeries::one(int order) {
    return constant(Rational(1), order);
}

PowerSeries PowerSeries::constant(const Rational& c, int order) {
    std::vector<Rational> v(static_cast<std::size_t>(order) + 1, kZero);
    v[0] = c;
    return PowerSeries(std::move(v));
}

PowerSeries PowerSeries::identity(int order) {
    if (order < 1)
        throw InsufficientOrder("identity series needs order >= 1");
    std::vector<Rational> v(static_cast<std::size_t>(order) + 1, kZero);
    v[1] = 1;
    return PowerSeries(std::move(v));
}

PowerSeries PowerSeries::truncated(int order) const {
    if (order < 0)
        throw Error("negative truncation order");
    if (order > this->order())
        throw InsufficientOrder("cannot extend a series from order " + std::to_string(this->order()) +
                                " to " + std::to_string(order));
    return PowerSeries(std::vector<Rational>(c_.begin(), c_.begin() + order + 1));
}

bool PowerSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

bool operator==(const PowerSeries& x, const PowerSeries& y) {
    int n = std::min(x.order(), y.order());
    for (int i = 0; i <= n; ++i)
        if (x[i] != y[i])
            return false;
    return true;
}

PowerSeries add(const PowerSeries& x, const PowerSeries& y) {
    int n = std::min(x.order(), y.order());
    std::vector<Rational> r;
    r.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        r.push_back(x[i] + y[i]);
    return PowerSeries(std::move(r));
}

PowerSeries sub(const PowerSeries& x, const PowerSeries& y) {
    int n = std::min(x.order(), y.order());
    std::vector<Rational> r;
    r.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        r.push_back(x[i] - y[i]);
    return PowerSeries(std::move(r));
}

PowerSeries neg(const PowerSeries& x) {
    std::vector<Rational> r;
    r.reserve(x.coeffs().size());
    for (const Rational& c : x.coeffs())
        r.push_back(-c);
    return PowerSeries(std::move(r));
}

PowerSeries mul(const PowerSeries& x, const PowerSeries& y) {
    int n = std::min(x.order(), y.order());
    std::vector<Rational> r(static_cast<std::size_t>(n) + 1, kZero);
    for (int i = 0; i <= n; ++i) {
        if (sgn(x[i]) == 0)
            continue;
        for (int j = 0; i + j <= n; ++j) {
            if (sgn(y[j]) != 0)
                r[static_cast<std::size_t>(i + j)] += x[i] * y[j];
        }
    }
    return PowerSeries(std::move(r));
}

PowerSeries mul_scalar(const PowerSeries& x, const Rational& c) {
    std::vector<Rational> r;
    r.reserve(x.coeffs().size());
    for (const Rational& xi : x.coeffs())
        r.push_back(xi * c);
    return PowerSeries(std::move(r));
}

PowerSeries div(const PowerSeries& x, const PowerSeries& y) {
    if (sgn(y[0]) == 0)
        throw DivisionByNonUnit("series division needs a nonzero constant term in the divisor");
    int n = std::min(x.order(), y.order());
    std::vector<Rational> r(static_cast<std::size_t>(n) + 1, kZero);
    for (int i = 0; i <= n; ++i) {
        Rational acc = x[i];
        for (int k = 1; k <= i; ++k) {
            if (sgn(y[k]) != 0)
                acc -= y[k] * r[static_cast<std::size_t>(i - k)];
        }
        r[static_cast<std::size_t>(i)] = acc / y[0];
    }
    return PowerSeries(std::move(r));
}

namespace {

PowerSeries compose_horner(const PowerSeries& f, const PowerSeries& g, int n) {
    PowerSeries acc = PowerSeries::constant(f[n], n);
    for (int k = n - 1; k >= 0; --k) {
        acc = mul(acc, g);
        acc.at(0) += f[k];
    }
    return acc;
}

// Baby-step/giant-step: split f into blocks of m coefficients, evaluate each
// block as a linear combination of g^0..g^{m-1}, then Horner over g^m.
// ~2*sqrt(N) series multiplications instead of N.
PowerSeries compose_block(const PowerSeries& f, const PowerSeries& g, int n) {
    int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n) + 1.0)));
    std::vector<PowerSeries> pw;
    pw.reserve(static_cast<std::size_t>(m) + 1);
    pw.push_back(PowerSeries::one(n));
    for (int i = 1; i <= m; ++i)
        pw.push_back(mul(pw.back(), g));

    auto block = [&](int j) {
        std::vector<Rational> b(static_cast<std::size_t>(n) + 1, kZero);
        for (int i = 0; i < m; ++i) {
            int idx = j * m + i;
            if (idx > n)
                break;
            axpy(b, f[idx], pw[static_cast<std::size_t>(i)], n);
        }
        return PowerSeries(std::move(b));
    };

    int nb = (n + m) / m; // ceil((n+1)/m)
    PowerSeries acc = block(nb - 1);
    for (int j = nb - 2; j >= 0; --j)
        acc = add(mul(acc, pw[static_cast<std::size_t>(m)]), block(j));
    return acc;
}

} // namespace

PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner) {
    if (sgn(inner[0]) != 0)
        throw CompositionNeedsZeroConstant("composition needs inner(0) == 0");
    int n = std::min(outer.order(), inner.order());
    PowerSeries f = outer.truncated(n);
    PowerSeries g = inner.truncated(n);
    if (n == 0)
        return PowerSeries::constant(f[0], 0);
    return n < 64 ? compose_horner(f, g, n) : compose_block(f, g, n);
}

PowerSeries derivative(const PowerSeries& s) {
    if (s.order() == 0)
        throw InsufficientOrder("derivative of an order-0 series has no known coefficients");
    std::vector<Rational> r;
    r.reserve(static_cast<std::size_t>(s.order()));
    for (int i = 1; i <= s.order(); ++i)
        r.push_back(s[i] * i);
    return PowerSeries(std::move(r));
}

PowerSeries integrate(const PowerSeries& s) {
    std::vector<Rational> r;
    r.reserve(s.coeffs().size() + 1);
    r.push_back(kZero);
    for (int i = 0; i <= s.order(); ++i)
        r.push_back(s[i] / (i + 1));
    return PowerSeries(std::move(r));
}

PowerSeries log_series(const PowerSeries& s) {
    if (s[0] != 1)
        throw PowNeedsUnitConstant("log needs constant term 1");
    if (s.order() == 0)
        return PowerSeries::zero(0);
    PowerSeries d = derivative(s);
    return integrate(div(d, s.truncated(s.order() - 1)));
}

PowerSeries exp_series(const PowerSeries& s) {
    if (sgn(s[0]) != 0)
        throw ExpNeedsZeroConstant("exp needs constant term 0");
    int n = s.order();
    std::vector<Rational> e(static_cast<std::size_t>(n) + 1, kZero);
    e[0] = 1;
    for (int i = 1; i <= n; ++i) {
        Rational acc(0);
        for (int k = 1; k <= i; ++k) {
            if (sgn(s[k]) != 0)
                acc += k * s[k] * e[static_cast<std::size_t>(i - k)];
        }
        e[static_cast<std::size_t>(i)] = acc / i;
    }
    return PowerSeries(std::move(e));
}

PowerSeries pow_rational(const PowerSeries& s, const Rational& e) {
    if (s[0] != 1)
        throw PowNeedsUnitConstant("pow needs constant term 1");
    int n = s.order();
    if (sgn(e) == 0)
        return PowerSeries::one(n);

    bool linear = true;
    for (int i = 2; i <= n; ++i) {
        if (sgn(s[i]) != 0) {
            linear = false;
            break;
        }
    }
    if (linear) {
        // (1 + c*u)^e: t_i = t_{i-1} * c * (e - i + 1) / i
        std::vector<Rational> r(static_cast<std::size_t>(n) + 1, kZero);
        r[0] = 1;
        if (n >= 1) {
            const Rational& c = s[1];
            for (int i = 1; i <= n; ++i) {
                r[static_cast<std::size_t>(i)] =
                    r[static_cast<std::size_t>(i - 1)] * c * (e - (i - 1)) / i;
                if (sgn(r[static_cast<std::size_t>(i)]) == 0)
                    break; // integer exponent exhausted
            }
        }
        return PowerSeries(std::move(r));
    }
    return exp_series(mul_scalar(log_series(s), e));
}

PowerSeries scale_argument(const PowerSeries& s, const Rational& c) {
    std::vector<Rational> r;
    r.reserve(s.coeffs().size());
    Rational p(1);
    for (int i = 0; i <= s.order(); ++i) {
        r.push_back(s[i] * p);
        p *= c;
    }
    return PowerSeries(std::move(r));
}

PowerSeries shift_up(const PowerSeries& s) {
    std::vector<Rational> r;
    r.reserve(s.coeffs().size() + 1);
    r.push_back(kZero);
    r.insert(r.end(), s.coeffs().begin(), s.coeffs().end());
    return PowerSeries(std::move(r));
}

PowerSeries shift_down(const PowerSeries& s) {
    if (sgn(s[0]) != 0)
        throw Error("shift_down needs a zero constant term");
    if (s.order() == 0)
        throw InsufficientOrder("shift_down of an order-0 series");
    return PowerSeries(std::vector<Rational>(s.coeffs().begin() + 1, s.coeffs().end()));
}

Rational eval(const PowerSeries& s, const Rational& x) {
    Rational acc = s[s.order()];
    for (int i = s.order() - 1; i >= 0; --i)
        acc = acc * x + s[i];
    return acc;
}

PowerSeries comp_inverse(const PowerSeries& s) {
    if (sgn(s[0]) != 0)
        throw NotInvertible("compositional inverse needs a zero constant term");
    if (s.order() < 1 || sgn(s[1]) == 0)
        throw NotInvertible("compositional inverse needs a nonzero linear term");
    int n = s.order();

    std::vector<Rational> g0(2, kZero);
    g0[1] = Rational(1) / s[1];
    PowerSeries g(std::move(g0));
    int correct = 1;

    while (correct < n) {
        int work = std::min(2 * correct + 1, n);
        // extend current iterate with zero guesses up to the working order
        std::vector<Rational> gc = g.coeffs();
        gc.resize(static_cast<std::size_t>(work) + 1, kZero);
        PowerSeries gw(std::move(gc));

        PowerSeries sw = s.truncated(work);
        PowerSeries num = sub(compose(sw, gw), PowerSeries::identity(work));
        // num = s(g) - u vanishes to order `correct`; factor out u^{correct+1}
        // so the divisor only needs order work - correct - 1 <= n - 1.
        int v = correct + 1;
        std::vector<Rational> num_sh(num.coeffs().begin() + v, num.coeffs().end());
        if (num_sh.empty())
            num_sh.push_back(kZero);
        PowerSeries ds = derivative(s).truncated(work - v);
        PowerSeries den = compose(ds, gw.truncated(work - v < 1 ? 1 : work - v));
        PowerSeries upd = div(PowerSeries(std::move(num_sh)), den);

        std::vector<Rational> next = gw.coeffs();
        for (int i = 0; i + v <= work && i <= upd.order(); ++i)
            next[static_cast<std::size_t>(i + v)] -= upd[i];
        g = PowerSeries(std::move(next));
        correct = work;
    }
    return g;
}

namespace detail {

PowerSeries comp_inverse_lagrange(const PowerSeries& s) {
    if (sgn(s[0]) != 0)
        throw NotInvertible("compositional inverse needs a zero constant term");
    if (s.order() < 1 || sgn(s[1]) == 0)
        throw NotInvertible("compositional inverse needs a nonzero linear term");
    int n = s.order();
    std::vector<Rational> g(static_cast<std::size_t>(n) + 1, kZero);
    if (n >= 1) {
        PowerSeries sigma_inv = div(PowerSeries::one(n - 1), shift_down(s));
        PowerSeries pw = sigma_inv; // sigma^{-k}
        g[1] = pw[0];
        for (int k = 2; k <= n; ++k) {
            pw = mul(pw, sigma_inv);
            g[static_cast<std::size_t>(k)] = pw[k - 1] / k;
        }
    }
    return PowerSeries(std::move(g));
}

} // namespace detail

} // namespace gw::series
