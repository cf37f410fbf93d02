#pragma once

// Batch front end: one spec, one command, a JSON report and (for traces) a
// CSV point cloud. Exit codes: 0 all checks pass, 2 a check failed or a
// trace blew up, 1 bad input.

#include <lieleaf/report.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lieleaf::cli {

enum ExitCode : int { kPass = 0, kInputError = 1, kCheckFailure = 2 };

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{
      "validate",         "bracket-table", "bivector",  "leaf-dim",       "trace-leaf",  "check-theorem",
      "check-prop-d",     "check-prop-gamma", "curvature", "magnetic-check", "fiber-check", "tangent-lift-check",
      "report-all"};
  return names;
}

struct PointSource {
  int randomCount = 100;  // used when path is empty
  std::string path;
};

struct RunConfig {
  std::string specPath;
  std::string command;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  double driftTol = 1e-6;
  double stepSize = 1e-3;
  int steps = 10000;
  int stepsPerFlow = 100;
  ChartBox box;
  ChartBox sampleBox{-1.0, 1.0};
  PointSource points;
  std::optional<std::vector<double>> start;
  std::string outPath;  // JSON report; stdout when empty
  std::string csvPath;  // trace CSV; defaults to outPath with a .csv extension
};

// ---------------------------------------------------------------------------
// Flag parsing helpers

inline double parseDouble(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InputError(what + ": trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InputError(what + ": not a number: '" + s + "'");
  }
}

inline std::vector<double> parseNumberList(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(parseDouble(item, what));
  }
  return out;
}

inline ChartBox parseBox(const std::string& s, const std::string& what) {
  const auto v = parseNumberList(s, what);
  if (v.size() != 2) throw InputError(what + ": expected LO,HI");
  return {v[0], v[1]};
}

/// "random:N" or a file path.
inline PointSource parsePointSource(const std::string& s) {
  PointSource p;
  if (s.rfind("random:", 0) == 0) {
    const std::string count = s.substr(7);
    int n = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc() || ptr != count.data() + count.size() || n < 1)
      throw InputError("--points: expected random:N with N >= 1");
    p.randomCount = n;
  } else {
    p.path = s;
  }
  return p;
}

inline void checkConfig(const RunConfig& cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw InputError("unknown command '" + cfg.command + "'");
  if (!(cfg.tol > 0.0) || !(cfg.driftTol > 0.0)) throw InputError("tolerances must be positive");
  if (!(cfg.stepSize > 0.0)) throw InputError("--h must be positive");
  if (cfg.steps < 1 || cfg.stepsPerFlow < 1) throw InputError("--steps and --steps-per-flow must be positive");
  if (cfg.steps % cfg.stepsPerFlow != 0) throw InputError("--steps must be a multiple of --steps-per-flow");
  if (!(cfg.box.lo < cfg.box.hi)) throw InputError("--box: empty chart box");
  if (!(cfg.sampleBox.lo < cfg.sampleBox.hi)) throw InputError("--sample: empty sampling box");
}

// ---------------------------------------------------------------------------
// Inputs

namespace detail {

inline DualPoint toDualPoint(const AlgebroidSpec& spec, std::vector<double> z, const std::string& where) {
  if (spec.dummyBase() && static_cast<int>(z.size()) == spec.m()) z.insert(z.begin(), 0.0);
  if (static_cast<int>(z.size()) != spec.dim())
    throw InputError(where + ": expected " + std::to_string(spec.dim()) + " coordinates, got " +
                     std::to_string(z.size()));
  return DualPoint::fromCoords(z, spec.n());
}

/// One point per line, numbers separated by commas or whitespace; '#' starts a comment.
inline std::vector<DualPoint> readPoints(const AlgebroidSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open points file " + path);
  std::vector<DualPoint> out;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = line.substr(0, line.find('#'));
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> z;
    std::string tok;
    while (ls >> tok) z.push_back(parseDouble(tok, path + ":" + std::to_string(lineNo)));
    if (!z.empty()) out.push_back(toDualPoint(spec, z, path + ":" + std::to_string(lineNo)));
  }
  if (out.empty()) throw InputError(path + ": no points");
  return out;
}

inline std::vector<DualPoint> samplePoints(const AlgebroidSpec& spec, const RunConfig& cfg) {
  if (!cfg.points.path.empty()) return readPoints(spec, cfg.points.path);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(cfg.sampleBox.lo, cfg.sampleBox.hi);
  std::vector<DualPoint> out;
  for (int k = 0; k < cfg.points.randomCount; ++k) {
    std::vector<double> z(static_cast<std::size_t>(spec.dim()));
    for (auto& v : z) v = u(rng);
    if (spec.dummyBase()) z[0] = 0.0;
    out.push_back(DualPoint::fromCoords(z, spec.n()));
  }
  return out;
}

inline std::vector<std::vector<double>> basePoints(const std::vector<DualPoint>& pts) {
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) out.push_back(p.x);
  return out;
}

template <typename Map>
json histogram(const Map& counts) {
  json h = json::object();
  for (const auto& [k, v] : counts) h[std::to_string(k)] = v;
  return h;
}

}  // namespace detail

/// Everything a command needs, loaded once.
struct Context {
  SpecDocument doc;
  RunConfig cfg;
  std::vector<DualPoint> points;
  std::optional<LeafTrace> trace;  // set by trace-leaf

  const AlgebroidSpec& spec() const { return doc.spec; }

  DualPoint start() const {
    if (cfg.start) return detail::toDualPoint(spec(), *cfg.start, "--start");
    if (doc.checks.start) return DualPoint::fromCoords(*doc.checks.start, spec().n());
    throw InputError("no start point: pass --start or set checks.start in the spec");
  }

  TraceConfig traceConfig() const {
    TraceConfig t;
    t.seed = cfg.seed;
    t.stepSize = cfg.stepSize;
    t.stepsPerFlow = cfg.stepsPerFlow;
    t.flowCount = cfg.steps / cfg.stepsPerFlow;
    t.box = cfg.box;
    return t;
  }
};

inline Context loadContext(const RunConfig& cfg) {
  checkConfig(cfg);
  Context ctx{loadSpec(cfg.specPath), cfg, {}, std::nullopt};
  ctx.points = detail::samplePoints(ctx.spec(), cfg);
  return ctx;
}

inline json baseParams(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  json p{{"spec", c.specPath},
         {"specHash", specHash(ctx.spec())},
         {"seed", c.seed},
         {"tol", c.tol},
         {"points", c.points.path.empty() ? "random:" + std::to_string(c.points.randomCount) : c.points.path},
         {"pointCount", ctx.points.size()}};
  if (c.points.path.empty()) p["sampleBox"] = {c.sampleBox.lo, c.sampleBox.hi};
  return p;
}

inline json traceParams(const Context& ctx) {
  json p = baseParams(ctx);
  p["h"] = ctx.cfg.stepSize;
  p["steps"] = ctx.cfg.steps;
  p["stepsPerFlow"] = ctx.cfg.stepsPerFlow;
  p["driftTol"] = ctx.cfg.driftTol;
  p["box"] = {ctx.cfg.box.lo, ctx.cfg.box.hi};
  p["start"] = ctx.start().coords();
  return p;
}

// ---------------------------------------------------------------------------
// Commands

inline Report cmdValidate(const Context& ctx) {
  Report r{"validate", baseParams(ctx)};
  const ValidationReport v = validate(ctx.spec(), detail::basePoints(ctx.points), ctx.cfg.tol);
  double lie = 0.0;
  std::size_t lieFailures = 0;
  for (const auto& p : ctx.points) {
    try {
      lie = std::max(lie, jacobiDefect(ctx.spec(), p));
    } catch (const std::exception& e) {
      if (lieFailures++ < 5) r.notes.push_back(std::string("bivector at a sample point: ") + e.what());
    }
  }
  for (std::size_t k = 0; k < v.failures.size() && k < 5; ++k)
    r.notes.push_back("point " + std::to_string(v.failures[k].index) + ": " + v.failures[k].message);
  r.defects = {{"antisymmetry", v.antisymmetry},
               {"anchorMorphism", v.anchorMorphism},
               {"jacobi", v.jacobi},
               {"poissonJacobi", lie},
               {"pointFailures", v.failures.size() + lieFailures}};
  const bool evaluated = v.failures.size() < ctx.points.size();
  r.pass = evaluated && v.pass && lie <= ctx.cfg.tol;
  return r;
}

inline Report cmdBracketTable(const Context& ctx) {
  Report r{"bracket-table", baseParams(ctx)};
  json table = specToJson(ctx.spec());
  r.data = {{"coords", table["coords"]}, {"fiberCoords", table["fiberCoords"]}, {"anchor", table["anchor"]},
            {"structure", table["structure"]}};
  return r;
}

inline Report cmdBivector(const Context& ctx) {
  Report r{"bivector", baseParams(ctx)};
  const auto names = ctx.spec().dualCoords();
  const auto pi = bivectorExprs(ctx.spec());
  json rows = json::array();
  for (int a = 0; a < ctx.spec().dim(); ++a) {
    json row = json::array();
    for (int b = 0; b < ctx.spec().dim(); ++b) row.push_back(print(pi[static_cast<std::size_t>(a * ctx.spec().dim() + b)], names));
    rows.push_back(row);
  }
  double anti = 0.0, jac = 0.0;
  for (const auto& p : ctx.points) {
    const Mat m = bivectorAt(ctx.spec(), p);
    anti = std::max(anti, (m + m.transpose()).cwiseAbs().maxCoeff());
    jac = std::max(jac, jacobiDefect(ctx.spec(), p));
  }
  r.data = {{"coords", names}, {"pi", rows}};
  r.defects = {{"antisymmetry", anti}, {"jacobi", jac}};
  r.pass = anti <= ctx.cfg.tol && jac <= ctx.cfg.tol;
  return r;
}

inline Report cmdLeafDim(const Context& ctx) {
  Report r{"leaf-dim", baseParams(ctx)};
  std::map<int, int> counts;
  for (const auto& p : ctx.points) ++counts[leafDimension(ctx.spec(), p, ctx.cfg.tol)];
  r.data = {{"histogram", detail::histogram(counts)},
            {"min", counts.begin()->first},
            {"max", counts.rbegin()->first}};
  return r;
}

inline Report cmdCheckTheorem(const Context& ctx) {
  Report r{"check-theorem", baseParams(ctx)};
  int spanMismatch = 0, rankMismatch = 0;
  std::map<int, int> ham, fund;
  for (const auto& p : ctx.points) {
    const SpanCheck s = spanEqualityCheck(ctx.spec(), p, ctx.cfg.tol);
    ++ham[s.hamRank];
    ++fund[s.fundRank];
    if (!s.equal) ++spanMismatch;
    if (s.hamRank != s.bivectorRank) ++rankMismatch;
  }
  r.defects = {{"spanMismatches", spanMismatch}, {"rankMismatches", rankMismatch}};
  r.data = {{"hamRank", detail::histogram(ham)}, {"fundRank", detail::histogram(fund)}};
  r.pass = spanMismatch == 0 && rankMismatch == 0;
  return r;
}

inline Report cmdCheckPropD(const Context& ctx) {
  if (ctx.doc.checks.homs.empty()) throw InputError("spec declares no checks.homs");
  Report r{"check-prop-d", baseParams(ctx)};
  int disagree = 0;
  json cases = json::array();
  for (std::size_t k = 0; k < ctx.doc.checks.homs.size(); ++k) {
    const auto c = poissonCriterionD(ctx.spec(), ctx.doc.checks.homs[k], ctx.points, ctx.cfg.tol);
    const bool agree = (c.lieDerivDefect <= ctx.cfg.tol) == (c.derivationDefect <= ctx.cfg.tol);
    if (!agree) ++disagree;
    cases.push_back({{"index", k},
                     {"D", lieleaf::detail::homToJson(ctx.doc.checks.homs[k], ctx.spec())},
                     {"lieDerivDefect", c.lieDerivDefect},
                     {"derivationDefect", c.derivationDefect},
                     {"isPoisson", c.isPoisson},
                     {"agree", agree}});
  }
  r.defects = {{"disagreements", disagree}};
  r.data = {{"cases", cases}};
  r.pass = disagree == 0;
  return r;
}

inline Report cmdCheckPropGamma(const Context& ctx) {
  if (ctx.doc.checks.forms.empty()) throw InputError("spec declares no checks.forms");
  Report r{"check-prop-gamma", baseParams(ctx)};
  int disagree = 0;
  json cases = json::array();
  const auto names = ctx.spec().baseCoords();
  for (std::size_t k = 0; k < ctx.doc.checks.forms.size(); ++k) {
    const OneForm& g = ctx.doc.checks.forms[k];
    const auto c = poissonCriterionGamma(ctx.spec(), g, ctx.points, ctx.cfg.tol);
    const bool agree = (c.lieDerivDefect <= ctx.cfg.tol) == (c.rhoDGammaDefect <= ctx.cfg.tol);
    if (!agree) ++disagree;
    json comps = json::array();
    for (const auto& e : g.components) comps.push_back(print(e, names));
    cases.push_back({{"index", k},
                     {"gamma", comps},
                     {"lieDerivDefect", c.lieDerivDefect},
                     {"rhoDGammaDefect", c.rhoDGammaDefect},
                     {"isPoisson", c.isPoisson},
                     {"agree", agree}});
  }
  r.defects = {{"disagreements", disagree}};
  r.data = {{"cases", cases}};
  r.pass = disagree == 0;
  return r;
}

inline SplittingSpec splittingFor(const Context& ctx) {
  if (ctx.doc.checks.splitting) return *ctx.doc.checks.splitting;
  if (isMagneticExtension(ctx.spec())) return trivialSplitting(ctx.spec());
  throw InputError("spec declares no checks.splitting");
}

inline Report cmdCurvature(const Context& ctx) {
  Report r{"curvature", baseParams(ctx)};
  const SplittingSpec lambda = splittingFor(ctx);
  double kernel = 0.0, maxNorm = 0.0;
  int failures = 0;
  for (const auto& p : ctx.points) {
    try {
      const Curvature c = curvatureAt(ctx.spec(), lambda, p.x);
      kernel = std::max(kernel, c.kernelDefect);
      for (const auto& v : c.values) maxNorm = std::max(maxNorm, v.norm());
    } catch (const SplittingError& e) {
      if (failures++ == 0) r.notes.push_back(e.what());
    }
  }
  r.defects = {{"kernelDefect", kernel}, {"splittingFailures", failures}};
  r.data = {{"maxCurvatureNorm", maxNorm}};
  r.pass = failures == 0 && kernel <= ctx.cfg.tol;
  return r;
}

inline Report cmdMagneticCheck(const Context& ctx) {
  if (!isMagneticExtension(ctx.spec())) throw InputError("spec is not a magnetic extension (m = n+1, rho = [id 0])");
  Report r{"magnetic-check", baseParams(ctx)};
  double dev = 0.0;
  for (const auto& p : ctx.points) dev = std::max(dev, magneticFormCheck(ctx.spec(), p, ctx.cfg.tol).maxDeviation);
  r.defects = {{"maxDeviation", dev}};
  r.pass = dev <= ctx.cfg.tol;
  return r;
}

/// Runs the trace once per context; blow-ups propagate as TraceError.
inline const LeafTrace& ensureTrace(Context& ctx) {
  if (!ctx.trace) ctx.trace = traceLeaf(ctx.spec(), ctx.start(), ctx.traceConfig());
  return *ctx.trace;
}

inline void noteTruncation(Report& r, const LeafTrace& t) {
  if (t.truncated)
    r.notes.push_back("trace left the chart box during flow " + std::to_string(t.truncatedAtFlow) + "; kept " +
                      std::to_string(t.points.size()) + " points");
}

inline Report traceFailure(const std::string& name, json params, const TraceError& e) {
  Report r{name, std::move(params)};
  r.pass = false;
  r.defects = {{"blowUpFlow", e.flow()}};
  r.notes.push_back(std::string("trace stopped: ") + e.what());
  return r;
}

inline Report cmdTraceLeaf(Context& ctx) {
  json params = traceParams(ctx);
  try {
    const LeafTrace& t = ensureTrace(ctx);
    Report r{"trace-leaf", std::move(params)};
    r.defects = {{"casimirDrift", fiberBundleCheck(t, ctx.doc.checks.casimirs)}};
    r.data = {{"points", t.points.size()}, {"truncated", t.truncated}, {"generators", t.generators}};
    noteTruncation(r, t);
    r.pass = r.defects["casimirDrift"].get<double>() <= ctx.cfg.driftTol;
    return r;
  } catch (const TraceError& e) {
    return traceFailure("trace-leaf", std::move(params), e);
  }
}

inline Report cmdFiberCheck(Context& ctx) {
  if (ctx.doc.checks.invariants.empty()) throw InputError("spec declares no checks.invariants");
  json params = traceParams(ctx);
  try {
    const LeafTrace& t = ensureTrace(ctx);
    Report r{"fiber-check", std::move(params)};
    const double spread = fiberBundleCheck(t, ctx.doc.checks.invariants);
    r.defects = {{"maxSpread", spread}};
    r.data = {{"baseSpread", baseSpread(t)}, {"points", t.points.size()}};
    noteTruncation(r, t);
    r.pass = spread <= ctx.cfg.driftTol;
    return r;
  } catch (const TraceError& e) {
    return traceFailure("fiber-check", std::move(params), e);
  }
}

/// The cotangent algebroid of a bivector pi has m = n and rho^a_i = pi^{ia} antisymmetric.
inline bool isCotangentOfBivector(const Context& ctx) {
  const AlgebroidSpec& s = ctx.spec();
  if (s.m() != s.n() || s.dummyBase()) return false;
  for (const auto& p : ctx.points) {
    const Mat rho = anchorAt(s, p.x);
    if ((rho + rho.transpose()).cwiseAbs().maxCoeff() > ctx.cfg.tol) return false;
  }
  return true;
}

inline Report cmdTangentLift(const Context& ctx) {
  if (!isCotangentOfBivector(ctx)) throw InputError("spec is not the cotangent algebroid of a bivector");
  Report r{"tangent-lift-check", baseParams(ctx)};
  std::vector<Expr> fs = ctx.doc.checks.testFunctions;
  if (fs.empty())
    for (int a = 0; a < ctx.spec().n(); ++a) fs.push_back(Expr::variable(a));
  double worst = 0.0;
  json per = json::array();
  for (const auto& f : fs) {
    const double d = tangentLiftCheck(ctx.spec(), f, ctx.points);
    per.push_back({{"f", print(f, ctx.spec().baseCoords())}, {"defect", d}});
    worst = std::max(worst, d);
  }
  r.defects = {{"maxDefect", worst}};
  r.data = {{"functions", per}};
  r.pass = worst <= ctx.cfg.tol;
  return r;
}

namespace detail {

inline Section randomLinearSection(std::mt19937_64& rng, const AlgebroidSpec& spec) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Section s;
  for (int i = 0; i < spec.m(); ++i) {
    Expr e(u(rng));
    if (!spec.dummyBase())
      for (int a = 0; a < spec.n(); ++a) e += Expr(u(rng)) * Expr::variable(a);
    s.components.push_back(e);
  }
  return s;
}

}  // namespace detail

/// Bracket-preservation of the fundamental field map on random affine-linear
/// sections, and on exact forms df for declared test functions.
inline Report cmdHomomorphism(const Context& ctx, int pairs = 20) {
  Report r{"homomorphism", baseParams(ctx)};
  std::mt19937_64 rng(ctx.cfg.seed);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Section u = detail::randomLinearSection(rng, ctx.spec()), v = detail::randomLinearSection(rng, ctx.spec());
    worst = std::max(worst, homomorphismDefect(ctx.spec(), AffineJetSection::ofSection(ctx.spec(), u),
                                               AffineJetSection::ofSection(ctx.spec(), v), ctx.points));
  }
  for (const auto& f : ctx.doc.checks.testFunctions) {
    OneForm df;
    for (int a = 0; a < ctx.spec().n(); ++a) df.components.push_back(diff(f, a));
    const Section u = detail::randomLinearSection(rng, ctx.spec());
    worst = std::max(worst, homomorphismDefect(ctx.spec(), AffineJetSection::ofSection(ctx.spec(), u),
                                               AffineJetSection::ofForm(ctx.spec(), df), ctx.points));
  }
  r.params["pairs"] = pairs;
  r.defects = {{"maxDefect", worst}};
  r.pass = worst <= ctx.cfg.tol;
  return r;
}

/// Every check that applies to the spec, in a fixed order.
inline json cmdReportAll(Context& ctx, bool& pass) {
  std::vector<Report> reports{cmdValidate(ctx), cmdBivector(ctx), cmdLeafDim(ctx), cmdCheckTheorem(ctx),
                              cmdHomomorphism(ctx)};
  const CheckInputs& ck = ctx.doc.checks;
  if (!ck.homs.empty()) reports.push_back(cmdCheckPropD(ctx));
  if (!ck.forms.empty()) reports.push_back(cmdCheckPropGamma(ctx));
  if (ck.splitting || isMagneticExtension(ctx.spec())) reports.push_back(cmdCurvature(ctx));
  if (isMagneticExtension(ctx.spec())) reports.push_back(cmdMagneticCheck(ctx));
  if (ck.start || ctx.cfg.start) {
    reports.push_back(cmdTraceLeaf(ctx));
    if (!ck.invariants.empty()) reports.push_back(cmdFiberCheck(ctx));
  }
  if (isCotangentOfBivector(ctx)) reports.push_back(cmdTangentLift(ctx));

  pass = true;
  json list = json::array();
  json failed = json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    if (!r.pass) failed.push_back(r.name);
    list.push_back(toJson(r));
  }
  Report summary{"report-all", baseParams(ctx)};
  summary.defects = {{"failed", failed.size()}};
  summary.pass = pass;
  summary.data = {{"failedChecks", failed}};
  json j = toJson(summary);
  j["reports"] = list;
  return j;
}

// ---------------------------------------------------------------------------
// Entry point

inline std::string csvPathFor(const RunConfig& cfg) {
  if (!cfg.csvPath.empty()) return cfg.csvPath;
  if (cfg.outPath.empty()) return {};
  return std::filesystem::path(cfg.outPath).replace_extension(".csv").string();
}

inline void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

/// Runs one command. Reports go to cfg.outPath or `out`; diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  json report;
  bool pass = false;
  std::optional<LeafTrace> trace;
  std::optional<AlgebroidSpec> traceSpec;
  try {
    Context ctx = loadContext(cfg);
    const std::string& c = cfg.command;
    if (c == "report-all") {
      report = cmdReportAll(ctx, pass);
    } else {
      Report r;
      if (c == "validate") r = cmdValidate(ctx);
      else if (c == "bracket-table") r = cmdBracketTable(ctx);
      else if (c == "bivector") r = cmdBivector(ctx);
      else if (c == "leaf-dim") r = cmdLeafDim(ctx);
      else if (c == "trace-leaf") r = cmdTraceLeaf(ctx);
      else if (c == "check-theorem") r = cmdCheckTheorem(ctx);
      else if (c == "check-prop-d") r = cmdCheckPropD(ctx);
      else if (c == "check-prop-gamma") r = cmdCheckPropGamma(ctx);
      else if (c == "curvature") r = cmdCurvature(ctx);
      else if (c == "magnetic-check") r = cmdMagneticCheck(ctx);
      else if (c == "fiber-check") r = cmdFiberCheck(ctx);
      else r = cmdTangentLift(ctx);
      pass = r.pass;
      report = toJson(r);
    }
    if (c == "trace-leaf" && ctx.trace) {
      trace = ctx.trace;
      traceSpec = ctx.spec();
    }
  } catch (const SpecFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UnknownIdentifierError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {  // InputError, ShapeError, bad start
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailure;
  }

  try {
    const std::string text = report.dump(2) + "\n";
    if (cfg.outPath.empty()) out << text;
    else writeText(cfg.outPath, text);
    if (trace) {
      const std::string csv = csvPathFor(cfg);
      if (!csv.empty()) writeText(csv, traceCsv(*trace, *traceSpec));
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  if (!pass) err << cfg.command << ": check failed\n";
  return pass ? kPass : kCheckFailure;
}

}  // namespace lieleaf::cli
