#pragma once

// JSON spec documents.
//
//   {
//     "name": "so3",                      optional
//     "n": 3, "m": 3,
//     "coords": ["x1", "x2", "x3"],
//     "fiberCoords": ["xi1", ...],        optional, default xi1..xim
//     "anchor": [["expr", ...m], ...n],   rho^a_i, row a column i
//     "structure": [{"i": 1, "j": 2, "k": 3, "expr": "1"}, ...],
//     "checks": { ... }                   optional inputs for the CLI
//   }
//
// Indices in "structure" are 1-based with i < j; c^k_ji = -c^k_ij is
// implied. n = 0 declares a Lie algebra; it is loaded with one placeholder
// base coordinate "o", and a start point may then omit it.

#include <lieleaf/algebroid.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lieleaf {

using json = nlohmann::json;

class SpecFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Optional per-spec inputs consumed by the CLI checks.
struct CheckInputs {
  std::optional<std::vector<double>> start;
  std::vector<Expr> casimirs;       // over dual coordinates
  std::vector<Expr> invariants;     // over dual coordinates
  std::vector<HomTMA> homs;         // D corpus for check-prop-d
  std::vector<OneForm> forms;       // gamma corpus for check-prop-gamma
  std::optional<HomTMA> splitting;  // lambda for curvature
  std::vector<Expr> testFunctions;  // over base coordinates
  std::vector<std::string> rawCasimirs, rawInvariants, rawTestFunctions;
};

struct SpecDocument {
  AlgebroidSpec spec;
  CheckInputs checks;
};

namespace detail {

inline Expr parseField(const json& j, const std::vector<std::string>& coords, const std::string& where) {
  if (j.is_number()) return Expr(j.get<double>());
  if (!j.is_string()) throw SpecFormatError(where + ": expected an expression string");
  try {
    return parse(j.get<std::string>(), coords);
  } catch (const std::exception& e) {
    throw SpecFormatError(where + ": " + e.what());
  }
}

inline HomTMA parseHom(const json& j, const AlgebroidSpec& spec, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.m()) throw SpecFormatError(where + ": expected m rows");
  HomTMA d(spec.m(), spec.n());
  for (int i = 0; i < spec.m(); ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (spec.dummyBase() && row.is_array() && row.empty()) continue;
    if (!row.is_array() || static_cast<int>(row.size()) != spec.n())
      throw SpecFormatError(where + ": row " + std::to_string(i + 1) + " needs n entries");
    for (int a = 0; a < spec.n(); ++a)
      d(i, a) = parseField(row[static_cast<std::size_t>(a)], spec.baseCoords(),
                           where + "[" + std::to_string(i + 1) + "][" + std::to_string(a + 1) + "]");
  }
  return d;
}

inline json homToJson(const HomTMA& d, const AlgebroidSpec& spec) {
  json rows = json::array();
  for (int i = 0; i < d.m; ++i) {
    json row = json::array();
    for (int a = 0; a < d.n; ++a) row.push_back(print(d(i, a), spec.baseCoords()));
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<Expr> parseExprList(const json& j, const std::vector<std::string>& coords, const std::string& where,
                                       std::vector<std::string>& raw) {
  std::vector<Expr> out;
  if (!j.is_array()) throw SpecFormatError(where + ": expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parseField(j[i], coords, where + "[" + std::to_string(i + 1) + "]"));
    raw.push_back(j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
  }
  return out;
}

}  // namespace detail

inline SpecDocument specFromJson(const json& doc) {
  if (!doc.is_object()) throw SpecFormatError("spec: expected a JSON object");
  for (const char* key : {"n", "m", "coords", "anchor", "structure"})
    if (!doc.contains(key)) throw SpecFormatError(std::string("spec: missing key \"") + key + "\"");
  const int n = doc.at("n").get<int>();
  const int m = doc.at("m").get<int>();
  if (n < 0 || m < 1) throw SpecFormatError("spec: need n >= 0 and m >= 1");
  auto coords = doc.at("coords").get<std::vector<std::string>>();
  if (static_cast<int>(coords.size()) != n) throw SpecFormatError("spec: coords must list n names");
  const bool dummy = n == 0;
  if (dummy) coords = {"o"};
  const int chart_n = static_cast<int>(coords.size());

  std::vector<Expr> anchor(static_cast<std::size_t>(chart_n * m), Expr(0.0));
  const json& ja = doc.at("anchor");
  if (!ja.is_array() || static_cast<int>(ja.size()) != n) throw SpecFormatError("spec: anchor must have n rows");
  for (int a = 0; a < n; ++a) {
    const json& row = ja[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw SpecFormatError("spec: anchor row " + std::to_string(a + 1) + " must have m entries");
    for (int i = 0; i < m; ++i)
      anchor[static_cast<std::size_t>(a * m + i)] = detail::parseField(
          row[static_cast<std::size_t>(i)], coords,
          "spec: anchor[" + std::to_string(a + 1) + "][" + std::to_string(i + 1) + "]");
  }

  std::vector<Expr> structure(static_cast<std::size_t>(m * m * m), Expr(0.0));
  std::vector<bool> seen(structure.size(), false);
  const json& js = doc.at("structure");
  if (!js.is_array()) throw SpecFormatError("spec: structure must be an array");
  for (std::size_t e = 0; e < js.size(); ++e) {
    const json& entry = js[e];
    const std::string where = "spec: structure entry " + std::to_string(e + 1);
    if (!entry.is_object() || !entry.contains("i") || !entry.contains("j") || !entry.contains("k") ||
        !entry.contains("expr"))
      throw SpecFormatError(where + ": needs i, j, k, expr");
    int i = entry.at("i").get<int>() - 1, j = entry.at("j").get<int>() - 1, k = entry.at("k").get<int>() - 1;
    if (i < 0 || j < 0 || k < 0 || i >= m || j >= m || k >= m) throw SpecFormatError(where + ": index out of range");
    if (i >= j) throw SpecFormatError(where + ": requires i < j");
    std::size_t idx = static_cast<std::size_t>((k * m + i) * m + j);
    if (seen[idx]) throw SpecFormatError(where + ": duplicate entry");
    seen[idx] = true;
    Expr c = detail::parseField(entry.at("expr"), coords, where);
    structure[idx] = c;
    structure[static_cast<std::size_t>((k * m + j) * m + i)] = neg(c);
  }

  SpecDocument out{AlgebroidSpec(coords, m, std::move(anchor), std::move(structure)), {}};
  out.spec.setDummyBase(dummy);
  if (doc.contains("name")) out.spec.setName(doc.at("name").get<std::string>());
  if (doc.contains("fiberCoords")) {
    auto names = doc.at("fiberCoords").get<std::vector<std::string>>();
    if (static_cast<int>(names.size()) != m) throw SpecFormatError("spec: fiberCoords must list m names");
    out.spec.setFiberCoords(std::move(names));
  }

  if (doc.contains("checks")) {
    const json& jc = doc.at("checks");
    const AlgebroidSpec& spec = out.spec;
    CheckInputs& ck = out.checks;
    const auto dual = spec.dualCoords();
    if (jc.contains("start")) {
      auto z = jc.at("start").get<std::vector<double>>();
      if (spec.dummyBase() && static_cast<int>(z.size()) == spec.m()) z.insert(z.begin(), 0.0);
      if (static_cast<int>(z.size()) != spec.dim()) throw SpecFormatError("checks.start: needs n+m coordinates");
      ck.start = std::move(z);
    }
    if (jc.contains("casimirs"))
      ck.casimirs = detail::parseExprList(jc.at("casimirs"), dual, "checks.casimirs", ck.rawCasimirs);
    if (jc.contains("invariants"))
      ck.invariants = detail::parseExprList(jc.at("invariants"), dual, "checks.invariants", ck.rawInvariants);
    if (jc.contains("testFunctions"))
      ck.testFunctions =
          detail::parseExprList(jc.at("testFunctions"), spec.baseCoords(), "checks.testFunctions", ck.rawTestFunctions);
    if (jc.contains("homs")) {
      const json& jh = jc.at("homs");
      for (std::size_t h = 0; h < jh.size(); ++h)
        ck.homs.push_back(detail::parseHom(jh[h], spec, "checks.homs[" + std::to_string(h + 1) + "]"));
    }
    if (jc.contains("forms")) {
      const json& jf = jc.at("forms");
      for (std::size_t f = 0; f < jf.size(); ++f) {
        std::vector<std::string> raw;
        OneForm g{detail::parseExprList(jf[f], spec.baseCoords(), "checks.forms[" + std::to_string(f + 1) + "]", raw)};
        if (static_cast<int>(g.components.size()) != spec.n())
          throw SpecFormatError("checks.forms[" + std::to_string(f + 1) + "]: needs n components");
        ck.forms.push_back(std::move(g));
      }
    }
    if (jc.contains("splitting")) ck.splitting = detail::parseHom(jc.at("splitting"), spec, "checks.splitting");
  }
  return out;
}

inline SpecDocument loadSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecFormatError("cannot open spec file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecFormatError(path + ": " + e.what());
  }
  try {
    return specFromJson(doc);
  } catch (const json::exception& e) {
    throw SpecFormatError(path + ": " + e.what());
  }
}

/// Canonical JSON form of the algebroid (no check inputs).
inline json specToJson(const AlgebroidSpec& spec) {
  json doc;
  const bool dummy = spec.dummyBase();
  if (!spec.name().empty()) doc["name"] = spec.name();
  doc["n"] = dummy ? 0 : spec.n();
  doc["m"] = spec.m();
  doc["coords"] = dummy ? std::vector<std::string>{} : spec.baseCoords();
  doc["fiberCoords"] = spec.fiberCoords();
  json anchor = json::array();
  if (!dummy)
    for (int a = 0; a < spec.n(); ++a) {
      json row = json::array();
      for (int i = 0; i < spec.m(); ++i) row.push_back(print(spec.rho(a, i), spec.baseCoords()));
      anchor.push_back(row);
    }
  doc["anchor"] = anchor;
  json structure = json::array();
  for (int i = 0; i < spec.m(); ++i)
    for (int j = i + 1; j < spec.m(); ++j)
      for (int k = 0; k < spec.m(); ++k)
        if (!spec.c(k, i, j).is_zero())
          structure.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"expr", print(spec.c(k, i, j), spec.baseCoords())}});
  doc["structure"] = structure;
  return doc;
}

/// FNV-1a over the canonical JSON text.
inline std::string specHash(const AlgebroidSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : specToJson(spec).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace lieleaf
