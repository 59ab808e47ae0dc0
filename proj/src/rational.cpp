#include "progeny/rational.hpp"

#include <cctype>

namespace gw {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty())
        return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

// "0.3" -> "3/10", "-1.25" -> "-5/4"; empty if not a plain decimal literal.
std::string decimal_hint(std::string_view s) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos)
        return {};
    std::string_view head = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || !is_integer_literal(head.empty() ? std::string_view("0") : head))
        return {};
    for (char c : frac)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return {};
    try {
        Integer num(std::string(head.empty() ? "0" : head) + std::string(frac));
        Integer den(1);
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational q = make_rational(num, den);
        return to_string(q);
    } catch (const Error&) {
        return {};
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

Rational make_rational(long num, long den) {
    if (den == 0)
        throw ParseError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0)
        throw ParseError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty())
        throw ParseError("empty rational literal");

    std::string hint = decimal_hint(s);
    if (!hint.empty())
        throw ParseError("'" + std::string(s) + "' is not an exact rational literal; write " + hint);
    if (s.find('.') != std::string_view::npos || s.find('e') != std::string_view::npos ||
        s.find('E') != std::string_view::npos)
        throw ParseError("'" + std::string(s) + "' is not an exact rational literal; use num/den form");

    auto slash = s.find('/');
    std::string_view num_part = (slash == std::string_view::npos) ? s : s.substr(0, slash);
    std::string_view den_part = (slash == std::string_view::npos) ? std::string_view("1") : s.substr(slash + 1);
    num_part = trim(num_part);
    den_part = trim(den_part);
    if (!is_integer_literal(num_part) || !is_integer_literal(den_part))
        throw ParseError("'" + std::string(s) + "' is not a rational literal (expected num or num/den)");

    Integer num{std::string(num_part)};
    Integer den{std::string(den_part)};
    return make_rational(num, den);
}

std::string to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

double to_double(const Rational& x) {
    return x.get_d();
}

Rational pow_int(const Rational& x, long e) {
    if (e == 0)
        return Rational(1);
    if (x == 0) {
        if (e < 0)
            throw Error("0 raised to a negative power");
        return Rational(0);
    }
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), mag);
    return e > 0 ? make_rational(num, den) : make_rational(den, num);
}

Rational pochhammer(const Rational& x, unsigned long n) {
    Rational acc(1);
    Rational term(x);
    for (unsigned long i = 0; i < n; ++i) {
        acc *= term;
        term += 1;
    }
    return acc;
}

Rational factorial(unsigned long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

std::optional<Rational> rational_root(const Rational& x, unsigned long n) {
    if (n == 0)
        throw Error("zeroth root");
    if (n == 1)
        return x;
    if (x < 0 && n % 2 == 0)
        return std::nullopt;
    Integer num = x.get_num();
    Integer den = x.get_den();
    bool neg = num < 0;
    if (neg)
        num = -num;
    Integer rn, rd;
    bool exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n) != 0;
    bool exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n) != 0;
    if (!exact_n || !exact_d)
        return std::nullopt;
    if (neg)
        rn = -rn;
    return make_rational(rn, rd);
}

std::optional<Rational> rational_pow(const Rational& base, const Rational& e) {
    if (base == 0) {
        if (e > 0)
            return Rational(0);
        if (e == 0)
            return Rational(1);
        throw Error("0 raised to a negative power");
    }
    // e = s/t canonical, t >= 1: base^(s/t) = (base^(1/t))^s
    const Integer& s = e.get_num();
    const Integer& t = e.get_den();
    if (!t.fits_ulong_p() || !s.fits_slong_p())
        return std::nullopt;
    auto root = rational_root(base, t.get_ui());
    if (!root)
        return std::nullopt;
    return pow_int(*root, s.get_si());
}

} // namespace gw
