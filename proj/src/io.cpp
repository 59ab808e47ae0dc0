#include "progeny/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "progeny/errors.hpp"

namespace gw::io {

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const series::PowerSeries& s) {
    Json coeffs = Json::array();
    for (int n = 0; n <= s.order(); ++n)
        coeffs.push_back(to_string(s[n]));
    return Json{{"order", s.order()}, {"coeffs", std::move(coeffs)}};
}

Json to_json(const Pmf& pmf) {
    Json mass = Json::array();
    for (const Rational& m : pmf.mass)
        mass.push_back(to_string(m));
    return Json{{"support_start", pmf.support_start},
                {"mass", std::move(mass)},
                {"tail", to_string(pmf.tail)}};
}

Json to_json(const OffspringFamily& family) {
    if (const auto* g = std::get_if<GeometricFamily>(&family))
        return Json{{"type", "geometric"}, {"alpha", to_string(g->alpha)}};
    if (const auto* h = std::get_if<HbFamily>(&family))
        return Json{{"type", "hb"}, {"b", to_string(h->b)}};
    return Json{{"type", "none"}};
}

Json to_json(const ProgenyFamily& family) {
    if (const auto* s = std::get_if<SibuyaFamily>(&family))
        return Json{{"type", "sibuya"}, {"a", to_string(s->a)}, {"rho", to_string(s->rho)}};
    if (const auto* g = std::get_if<GeometricProgenyFamily>(&family))
        return Json{{"type", "geometric_progeny"}, {"alpha", to_string(g->alpha)}};
    return Json{{"type", "none"}};
}

Json to_json(const OffspringLaw& law) {
    return Json{{"kind", "offspring"},
                {"pmf", to_json(law.pmf())},
                {"family", to_json(law.family())}};
}

Json to_json(const ProgenyLaw& law) {
    return Json{{"kind", "progeny"},
                {"pmf", to_json(law.pmf())},
                {"family", to_json(law.family())}};
}

Json to_json(const cert::CertificateReport& report) {
    Json j{{"b", to_string(report.b)}, {"n_max", report.n_max}};
    j["first_negative"] = report.first_negative ? Json(*report.first_negative) : Json(nullptr);
    j["value"] = report.value ? Json(to_string(*report.value)) : Json(nullptr);
    j["structural_certificate"] = report.structural;
    j["elapsed_ms"] = report.elapsed_ms;
    return j;
}

Json to_json(const cert::RecurrenceCheck& check) {
    Json j{{"ok", check.ok}};
    j["first_failure"] = check.first_failure ? Json(*check.first_failure) : Json(nullptr);
    return j;
}

Json to_json(const cert::RatioReport& report) {
    return Json{{"n", report.n},
                {"ratio", to_string(report.ratio)},
                {"limit", to_string(report.limit)},
                {"rel_gap", to_string(report.rel_gap)},
                {"rel_gap_decimal", to_double(report.rel_gap)}};
}

Json to_json(const ProgenyCheckReport& report) {
    Json prefix = Json::array();
    for (const Rational& c : report.offspring_prefix)
        prefix.push_back(to_string(c));
    Json j{{"admissible", report.admissible}};
    j["first_negative"] = report.first_negative ? Json(*report.first_negative) : Json(nullptr);
    j["first_mass_violation"] =
        report.first_mass_violation ? Json(*report.first_mass_violation) : Json(nullptr);
    j["offspring_prefix"] = std::move(prefix);
    return j;
}

Json to_json(const tilt::MeanReport& report) {
    return Json{{"value", to_string(report.value)}, {"exact", report.exact}};
}

Json to_json(const tilt::RhoResult& result) {
    return Json{{"value", to_string(result.value)}, {"exact", result.exact}};
}

Json to_json(const sim::GWResult& result) {
    return Json{{"trajectory", result.trajectory},
                {"total", result.total},
                {"generations", result.generations},
                {"censored", result.censored}};
}

Json to_json(const sim::Histogram& hist) {
    return Json{{"support_start", hist.support_start},
                {"counts", hist.counts},
                {"tail", hist.tail},
                {"censored", hist.censored},
                {"total", hist.total}};
}

Json to_json(const sim::CompareReport& report) {
    return Json{{"tv", report.tv},
                {"chi_square", report.chi_square},
                {"samples", report.samples},
                {"threshold", report.threshold},
                {"pass", report.pass}};
}

Json to_json(const sim::GenerationCheckReport& report) {
    return Json{{"composition_exact", report.composition_exact},
                {"empirical", to_json(report.empirical)},
                {"censored", report.censored}};
}

Rational rational_from_json(const Json& j) {
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<long long>()));
    // floats route through the parser so the error carries the exact hint
    return parse_rational(j.dump());
}

series::PowerSeries series_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("coeffs"))
        throw ParseError("series JSON needs a \"coeffs\" array");
    std::vector<Rational> coeffs;
    for (const Json& c : j.at("coeffs"))
        coeffs.push_back(rational_from_json(c));
    if (coeffs.empty())
        throw ParseError("series JSON needs at least the constant coefficient");
    return series::PowerSeries(std::move(coeffs));
}

Pmf pmf_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("mass"))
        throw ParseError("pmf JSON needs a \"mass\" array");
    Pmf pmf;
    pmf.support_start = j.value("support_start", 0);
    for (const Json& m : j.at("mass"))
        pmf.mass.push_back(rational_from_json(m));
    if (j.contains("tail"))
        pmf.tail = rational_from_json(j.at("tail"));
    else {
        pmf.tail = Rational(1);
        for (const Rational& m : pmf.mass)
            pmf.tail -= m;
    }
    return pmf;
}

namespace {

OffspringFamily offspring_family_from_json(const Json& j) {
    const std::string type = j.value("type", "none");
    if (type == "none")
        return {};
    if (type == "geometric")
        return GeometricFamily{rational_from_json(j.at("alpha"))};
    if (type == "hb")
        return HbFamily{rational_from_json(j.at("b"))};
    throw ParseError("unknown offspring family type \"" + type + "\"");
}

ProgenyFamily progeny_family_from_json(const Json& j) {
    const std::string type = j.value("type", "none");
    if (type == "none")
        return {};
    if (type == "sibuya") {
        SibuyaFamily f{rational_from_json(j.at("a")), Rational(1)};
        if (j.contains("rho"))
            f.rho = rational_from_json(j.at("rho"));
        return f;
    }
    if (type == "geometric_progeny")
        return GeometricProgenyFamily{rational_from_json(j.at("alpha"))};
    throw ParseError("unknown progeny family type \"" + type + "\"");
}

void expect_kind(const Json& j, const std::string& kind) {
    if (j.contains("kind") && j.at("kind").get<std::string>() != kind)
        throw ParseError("law JSON has kind \"" + j.at("kind").get<std::string>() +
                         "\", expected \"" + kind + "\"");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t from = 0;
    while (true) {
        std::size_t at = s.find(sep, from);
        if (at == std::string::npos) {
            parts.push_back(s.substr(from));
            return parts;
        }
        parts.push_back(s.substr(from, at - from));
        from = at + 1;
    }
}

Json parse_law_file(const std::string& path) {
    Json j = Json::parse(read_text_file(path), nullptr, false);
    if (j.is_discarded())
        throw ParseError("file \"" + path + "\" is not valid JSON");
    return j;
}

// "@law.json" and a bare "law.json" both name a file
bool looks_like_file(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@')
        return true;
    return spec.size() > 5 && spec.substr(spec.size() - 5) == ".json";
}

std::string file_part(const std::string& spec) {
    return spec[0] == '@' ? spec.substr(1) : spec;
}

} // namespace

OffspringLaw offspring_law_from_json(const Json& j) {
    expect_kind(j, "offspring");
    Pmf pmf = pmf_from_json(j.at("pmf"));
    OffspringFamily family =
        j.contains("family") ? offspring_family_from_json(j.at("family")) : OffspringFamily{};
    return OffspringLaw(std::move(pmf), std::move(family));
}

ProgenyLaw progeny_law_from_json(const Json& j) {
    expect_kind(j, "progeny");
    Pmf pmf = pmf_from_json(j.at("pmf"));
    ProgenyFamily family =
        j.contains("family") ? progeny_family_from_json(j.at("family")) : ProgenyFamily{};
    return ProgenyLaw(std::move(pmf), std::move(family));
}

OffspringLaw offspring_from_spec(const std::string& spec, int order) {
    if (looks_like_file(spec))
        return offspring_law_from_json(parse_law_file(file_part(spec)));
    auto parts = split(spec, ':');
    if (parts[0] == "delta0" && parts.size() == 1)
        return OffspringLaw::delta0();
    if (parts[0] == "geometric" && parts.size() == 2)
        return OffspringLaw::geometric(parse_rational(parts[1]), order);
    if (parts[0] == "hb" && parts.size() == 2)
        return OffspringLaw::sibuya_offspring(parse_rational(parts[1]), order);
    throw ParseError("cannot read offspring law \"" + spec +
                     "\"; expected geometric:ALPHA, hb:B, delta0, or @FILE.json");
}

ProgenyLaw progeny_from_spec(const std::string& spec, int order) {
    if (looks_like_file(spec))
        return progeny_law_from_json(parse_law_file(file_part(spec)));
    auto parts = split(spec, ':');
    if (parts[0] == "delta1" && parts.size() == 1)
        return ProgenyLaw::delta1();
    if (parts[0] == "sibuya" && parts.size() == 2)
        return ProgenyLaw::sibuya(parse_rational(parts[1]), order);
    if (parts[0] == "sibuya" && parts.size() == 3)
        return ProgenyLaw::sibuya_tilted(parse_rational(parts[1]), parse_rational(parts[2]), order);
    throw ParseError("cannot read progeny law \"" + spec +
                     "\"; expected sibuya:A, sibuya:A:RHO, delta1, or @FILE.json");
}

namespace {

std::string format_ms(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", ms);
    return buf;
}

} // namespace

std::string certificate_csv(const std::vector<cert::CertificateReport>& reports) {
    std::ostringstream out;
    out << "b,first_negative,value,elapsed_ms\n";
    for (const auto& r : reports) {
        out << to_string(r.b) << ',';
        out << (r.first_negative ? std::to_string(*r.first_negative) : std::string("-1")) << ',';
        out << (r.value ? to_string(*r.value) : std::string()) << ',';
        out << format_ms(r.elapsed_ms) << '\n';
    }
    return out.str();
}

std::string series_csv(const series::PowerSeries& s) {
    std::ostringstream out;
    out << "n,coeff\n";
    for (int n = 0; n <= s.order(); ++n)
        out << n << ',' << to_string(s[n]) << '\n';
    return out.str();
}

std::string pmf_csv(const Pmf& pmf) {
    std::ostringstream out;
    out << "n,mass\n";
    for (std::size_t i = 0; i < pmf.mass.size(); ++i)
        out << pmf.support_start + static_cast<int>(i) << ',' << to_string(pmf.mass[i]) << '\n';
    out << "tail," << to_string(pmf.tail) << '\n';
    return out.str();
}

std::string histogram_csv(const sim::Histogram& hist) {
    std::ostringstream out;
    out << "value,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        out << hist.support_start + i << ',' << hist.counts[i] << '\n';
    out << "tail," << hist.tail << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open \"" + path + "\" for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("cannot open \"" + path + "\" for writing");
    out << content;
}

} // namespace gw::io
