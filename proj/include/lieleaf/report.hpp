#pragma once

// Check reports and trace export.
//
// A report serializes as {"schema": 1, "name", "params", "defects", "pass"}
// plus optional "notes" and "data". A trace CSV starts with
//   # <spec-hash>, <seed>, <h>, <steps>
// then a column line and one row per point: x^1..x^n, xi_1..xi_m.

#include <lieleaf/leaves.hpp>
#include <lieleaf/spec_io.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lieleaf {

inline constexpr int kReportSchema = 1;

struct Report {
  Report() = default;
  Report(std::string n, json p) : name(std::move(n)), params(std::move(p)) {}

  std::string name;
  json params = json::object();
  json defects = json::object();
  bool pass = true;
  std::vector<std::string> notes;
  json data;  // optional payload, omitted when null
};

inline json toJson(const Report& r) {
  json j{{"schema", kReportSchema}, {"name", r.name}, {"params", r.params}, {"defects", r.defects}, {"pass", r.pass}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (!r.data.is_null()) j["data"] = r.data;
  return j;
}

/// %.17g, which round-trips every double.
inline std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void writeTraceCsv(std::ostream& out, const LeafTrace& trace, const AlgebroidSpec& spec) {
  const int steps = static_cast<int>(trace.points.size()) - 1;
  out << "# " << specHash(spec) << ", " << trace.seed << ", " << formatDouble(trace.stepSize) << ", " << steps << '\n';
  const int skip = spec.dummyBase() ? 1 : 0;
  const auto names = spec.dualCoords();
  for (std::size_t c = static_cast<std::size_t>(skip); c < names.size(); ++c)
    out << names[c] << (c + 1 < names.size() ? "," : "\n");
  for (const auto& p : trace.points) {
    const auto z = p.coords();
    for (std::size_t c = static_cast<std::size_t>(skip); c < z.size(); ++c)
      out << formatDouble(z[c]) << (c + 1 < z.size() ? "," : "\n");
  }
}

inline std::string traceCsv(const LeafTrace& trace, const AlgebroidSpec& spec) {
  std::ostringstream os;
  writeTraceCsv(os, trace, spec);
  return os.str();
}

}  // namespace lieleaf
