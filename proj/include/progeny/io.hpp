#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "progeny/certify.hpp"
#include "progeny/gw_sim.hpp"
#include "progeny/laws.hpp"
#include "progeny/nef_tilt.hpp"
#include "progeny/power_series.hpp"
#include "progeny/progeny_map.hpp"
#include "progeny/rational.hpp"

namespace gw::io {

// Rationals travel as exact "num/den" strings; JSON numbers are accepted on
// input only when integral (decimal literals are rejected with the exact
// equivalent suggested, same as the CLI flags).
using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Json to_json(const series::PowerSeries& s);
Json to_json(const Pmf& pmf);
Json to_json(const OffspringFamily& family);
Json to_json(const ProgenyFamily& family);
Json to_json(const OffspringLaw& law);
Json to_json(const ProgenyLaw& law);
Json to_json(const cert::CertificateReport& report);
Json to_json(const cert::RecurrenceCheck& check);
Json to_json(const cert::RatioReport& report);
Json to_json(const ProgenyCheckReport& report);
Json to_json(const tilt::MeanReport& report);
Json to_json(const tilt::RhoResult& result);
Json to_json(const sim::GWResult& result);
Json to_json(const sim::Histogram& hist);
Json to_json(const sim::CompareReport& report);
Json to_json(const sim::GenerationCheckReport& report);

Rational rational_from_json(const Json& j);
series::PowerSeries series_from_json(const Json& j);
Pmf pmf_from_json(const Json& j);
OffspringLaw offspring_law_from_json(const Json& j);
ProgenyLaw progeny_law_from_json(const Json& j);

// Law specifications accepted by the command line:
//   offspring: "geometric:1/2", "hb:3/2", "delta0", "law.json" (or "@law.json")
//   progeny:   "sibuya:1/2", "sibuya:1/2:9/10", "delta1", "law.json"
// `order` bounds the stored prefix for the constructed families; a law read
// from a file keeps its stored prefix.
OffspringLaw offspring_from_spec(const std::string& spec, int order);
ProgenyLaw progeny_from_spec(const std::string& spec, int order);

// CSV renderings (exact rational columns; no quoting needed, rationals
// never contain commas).
std::string certificate_csv(const std::vector<cert::CertificateReport>& reports);
std::string series_csv(const series::PowerSeries& s);
std::string pmf_csv(const Pmf& pmf);
std::string histogram_csv(const sim::Histogram& hist);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace gw::io
