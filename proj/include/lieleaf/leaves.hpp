#pragma once

// Numerical geometry of symplectic leaves of A*: tracing by Hamiltonian
// flows, dimension, isotropy algebras, splitting curvature and leaf forms.

#include <lieleaf/jet_action.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lieleaf {

class TraceError : public std::runtime_error {
 public:
  TraceError(const std::string& what, int flow)
      : std::runtime_error(what + " (flow " + std::to_string(flow) + ")"), flow_(flow) {}
  int flow() const { return flow_; }

 private:
  int flow_;
};

class SplittingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotTangentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline int leafDimension(const AlgebroidSpec& spec, const DualPoint& pt, double tol) {
  return numericalRank(bivectorAt(spec, pt), tol);
}

// ---------------------------------------------------------------------------
// Flows

struct ChartBox {
  double lo = -10.0;
  double hi = 10.0;
  bool contains(std::span<const double> z) const {
    return std::all_of(z.begin(), z.end(), [&](double v) { return v >= lo && v <= hi; });
  }
};

struct TraceConfig {
  std::uint64_t seed = 42;
  double stepSize = 1e-3;
  int stepsPerFlow = 100;
  int flowCount = 100;
  ChartBox box;
};

struct LeafTrace {
  std::vector<DualPoint> points;
  std::uint64_t seed = 0;
  double stepSize = 0.0;
  int stepsPerFlow = 0;
  int flowCount = 0;
  bool truncated = false;
  int truncatedAtFlow = -1;
  std::vector<int> generators;  // signed, 1-based: +-(i+1) for xi_i, +-(m+a+1) for x^a
};

namespace detail {

inline std::vector<double> rk4Step(const FieldComponents& field, double sign, std::span<const double> z, double h) {
  const std::size_t d = z.size();
  auto f = [&](const std::vector<double>& p) {
    std::vector<double> out(d);
    for (std::size_t c = 0; c < d; ++c) out[c] = field[c].is_zero() ? 0.0 : sign * eval(field[c], p);
    return out;
  };
  std::vector<double> p(z.begin(), z.end()), tmp(d);
  const auto k1 = f(p);
  for (std::size_t c = 0; c < d; ++c) tmp[c] = p[c] + 0.5 * h * k1[c];
  const auto k2 = f(tmp);
  for (std::size_t c = 0; c < d; ++c) tmp[c] = p[c] + 0.5 * h * k2[c];
  const auto k3 = f(tmp);
  for (std::size_t c = 0; c < d; ++c) tmp[c] = p[c] + h * k3[c];
  const auto k4 = f(tmp);
  for (std::size_t c = 0; c < d; ++c) p[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  return p;
}

}  // namespace detail

/// Integrates X_F from `start` with classical RK4; returns start plus every
/// step. Stops early (without recording) at the first step leaving `box`.
inline std::vector<DualPoint> flowHamiltonian(const AlgebroidSpec& spec, const DualFunction& f, const DualPoint& start,
                                              double h, int steps, ChartBox box = {}) {
  checkPoint(spec, start);
  const FieldComponents field = hamiltonianVFExprs(spec, f);
  std::vector<DualPoint> out{start};
  std::vector<double> z = start.coords();
  for (int s = 0; s < steps; ++s) {
    std::vector<double> next;
    try {
      next = detail::rk4Step(field, 1.0, z, h);
    } catch (const DomainError& e) {
      throw TraceError(e.what(), 0);
    }
    for (double v : next)
      if (!std::isfinite(v)) throw TraceError("non-finite state", 0);
    if (!box.contains(next)) break;
    z = std::move(next);
    out.push_back(DualPoint::fromCoords(z, spec.n()));
  }
  return out;
}

/// Samples the leaf through `start` by composing Hamiltonian flows of
/// randomly chosen coordinate functions (+-xi_i, +-x^a).
inline LeafTrace traceLeaf(const AlgebroidSpec& spec, const DualPoint& start, const TraceConfig& cfg) {
  checkPoint(spec, start);
  if (!(cfg.stepSize > 0.0)) throw std::invalid_argument("step size must be positive");
  if (cfg.stepsPerFlow < 1 || cfg.flowCount < 0) throw std::invalid_argument("flow counts must be positive");
  if (!(cfg.box.lo < cfg.box.hi)) throw std::invalid_argument("chart box is empty");
  const std::vector<double> z0 = start.coords();
  if (!cfg.box.contains(z0)) throw std::invalid_argument("start point lies outside the chart box");

  const int n = spec.n(), m = spec.m();
  std::vector<FieldComponents> fields;
  for (int i = 0; i < m; ++i) fields.push_back(hamiltonianVFExprs(spec, fiberCoordinate(spec, i)));
  for (int a = 0; a < n; ++a) fields.push_back(hamiltonianVFExprs(spec, baseCoordinate(a)));

  LeafTrace trace;
  trace.seed = cfg.seed;
  trace.stepSize = cfg.stepSize;
  trace.stepsPerFlow = cfg.stepsPerFlow;
  trace.flowCount = cfg.flowCount;
  trace.points.push_back(start);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, n + m - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<double> z = z0;
  for (int flow = 0; flow < cfg.flowCount; ++flow) {
    const int g = pick(rng);
    const double sign = coin(rng) == 0 ? 1.0 : -1.0;
    trace.generators.push_back(sign > 0 ? g + 1 : -(g + 1));
    for (int s = 0; s < cfg.stepsPerFlow; ++s) {
      std::vector<double> next;
      try {
        next = detail::rk4Step(fields[g], sign, z, cfg.stepSize);
      } catch (const DomainError& e) {
        throw TraceError(e.what(), flow);
      }
      for (double v : next)
        if (!std::isfinite(v)) throw TraceError("non-finite state", flow);
      if (!cfg.box.contains(next)) {
        trace.truncated = true;
        trace.truncatedAtFlow = flow;
        return trace;
      }
      z = std::move(next);
      trace.points.push_back(DualPoint::fromCoords(z, n));
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Isotropy and curvature

struct IsotropyAlgebra {
  std::vector<Vec> basis;                   // orthonormal basis of ker rho(x) in R^m
  std::vector<double> structureConstants;  // C^r_pq at [(r*k + p)*k + q]
  double closureDefect = 0.0;

  int dim() const { return static_cast<int>(basis.size()); }
  double constant(int r, int p, int q) const {
    const int k = dim();
    return structureConstants[static_cast<std::size_t>((r * k + p) * k + q)];
  }
};

/// Pointwise bracket [u,v]^k = u^i v^j c^k_ij(x) at x.
inline Vec pointwiseBracket(const AlgebroidSpec& spec, std::span<const double> x, const Vec& u, const Vec& v) {
  const int m = spec.m();
  Vec r = Vec::Zero(m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (!spec.c(k, i, j).is_zero()) r(k) += u(i) * v(j) * eval(spec.c(k, i, j), x);
  return r;
}

inline IsotropyAlgebra isotropyAlgebra(const AlgebroidSpec& spec, std::span<const double> x, double tol) {
  IsotropyAlgebra iso;
  iso.basis = kernelBasis(anchorAt(spec, x), tol);
  const int k = iso.dim();
  iso.structureConstants.assign(static_cast<std::size_t>(k * k * k), 0.0);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q) {
      const Vec br = pointwiseBracket(spec, x, iso.basis[p], iso.basis[q]);
      Vec inside = Vec::Zero(spec.m());
      for (int r = 0; r < k; ++r) {
        const double c = iso.basis[r].dot(br);
        iso.structureConstants[static_cast<std::size_t>((r * k + p) * k + q)] = c;
        inside += c * iso.basis[r];
      }
      iso.closureDefect = std::max(iso.closureDefect, (br - inside).norm());
    }
  return iso;
}

/// Horizontal lift lambda: TM -> A, stored as an m x n matrix of fields.
using SplittingSpec = HomTMA;

struct Curvature {
  int n = 0;
  std::vector<Vec> values;  // R(d_a, d_b) in R^m at [a*n + b]
  double kernelDefect = 0.0;
  const Vec& operator()(int a, int b) const { return values[static_cast<std::size_t>(a * n + b)]; }
};

/// R(d_a, d_b) = lambda([d_a, d_b]) - [lambda d_a, lambda d_b] = -[lambda d_a, lambda d_b].
inline Curvature curvatureAt(const AlgebroidSpec& spec, const SplittingSpec& lambda, std::span<const double> x,
                             double tol = 1e-9) {
  checkHom(spec, lambda);
  const int n = spec.n();
  const Mat rho = anchorAt(spec, x);
  const Mat rl = rho * evalHom(lambda, x);
  if ((rl - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > tol)
    throw SplittingError("splitting is not a right inverse of the anchor at this point");
  Curvature c;
  c.n = n;
  c.values.assign(static_cast<std::size_t>(n * n), Vec::Zero(spec.m()));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const Section br = bracketSections(spec, column(lambda, a), column(lambda, b));
      Vec v(spec.m());
      for (int i = 0; i < spec.m(); ++i) v(i) = -eval(br.components[i], x);
      c.values[static_cast<std::size_t>(a * n + b)] = v;
      c.kernelDefect = std::max(c.kernelDefect, (rho * v).norm());
    }
  return c;
}

// ---------------------------------------------------------------------------
// Leaf symplectic form

/// omega(v1, v2) = eta1^T Pi eta2 with Pi eta_i = v_i, so omega(X_F, X_G) = {F,G}.
inline double leafFormAt(const AlgebroidSpec& spec, const DualPoint& pt, const Vec& v1, const Vec& v2, double tol,
                         LeastSquaresMethod method = LeastSquaresMethod::Svd) {
  const Mat pi = bivectorAt(spec, pt);
  if (v1.size() != pi.rows() || v2.size() != pi.rows()) throw ShapeError("tangent vectors must have n+m entries");
  const Vec e1 = leastSquares(pi, v1, kDefaultRankTol, method);
  const Vec e2 = leastSquares(pi, v2, kDefaultRankTol, method);
  if ((pi * e1 - v1).norm() > tol * (1.0 + v1.norm()) || (pi * e2 - v2).norm() > tol * (1.0 + v2.norm()))
    throw NotTangentError("vector is not tangent to the symplectic leaf");
  return e1.dot(pi * e2);
}

/// Gram matrix of the leaf form on a list of tangent vectors.
inline Mat leafFormMatrix(const AlgebroidSpec& spec, const DualPoint& pt, const std::vector<Vec>& vs, double tol,
                          LeastSquaresMethod method = LeastSquaresMethod::Svd) {
  const int k = static_cast<int>(vs.size());
  Mat w(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w(i, j) = leafFormAt(spec, pt, vs[i], vs[j], tol, method);
  return w;
}

struct MagneticCheck {
  double maxDeviation = 0.0;
  Mat computed;  // leaf form on (d_x, d_p)
  Mat expected;  // [[<R_lambda, xi>, -id], [id, 0]]
};

/// True if spec has the shape produced by magneticExtension: m = n+1,
/// rho = [id 0] and only c^{m}_{ab} with a, b < n nonzero.
inline bool isMagneticExtension(const AlgebroidSpec& spec) {
  const int n = spec.n(), m = spec.m();
  if (m != n + 1) return false;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i)
      if (!spec.rho(a, i).is_const(a == i ? 1.0 : 0.0)) return false;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const bool allowed = k == n && i < n && j < n;
        if (!allowed && !spec.c(k, i, j).is_zero()) return false;
      }
  return true;
}

inline SplittingSpec trivialSplitting(const AlgebroidSpec& spec) {
  SplittingSpec l(spec.m(), spec.n());
  for (int a = 0; a < spec.n(); ++a) l(a, a) = Expr(1.0);
  return l;
}

/// Compares the leaf form of a magnetic extension with the canonical form
/// plus the curvature pairing <R_lambda, i*alpha> on the base block.
inline MagneticCheck magneticFormCheck(const AlgebroidSpec& spec, const DualPoint& pt, double tol) {
  if (!isMagneticExtension(spec)) throw std::invalid_argument("spec is not a magnetic extension");
  checkPoint(spec, pt);
  const int n = spec.n(), d = spec.dim();
  std::vector<Vec> vs;
  for (int c = 0; c < 2 * n; ++c) vs.push_back(Vec::Unit(d, c));
  MagneticCheck r;
  r.computed = leafFormMatrix(spec, pt, vs, tol);
  const Curvature curv = curvatureAt(spec, trivialSplitting(spec), pt.x);
  const Vec xi = Eigen::Map<const Vec>(pt.xi.data(), static_cast<Eigen::Index>(pt.xi.size()));
  r.expected = Mat::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) r.expected(a, b) = a == b ? 0.0 : curv(a, b).dot(xi);
  r.expected.block(0, n, n, n) = -Mat::Identity(n, n);
  r.expected.block(n, 0, n, n) = Mat::Identity(n, n);
  r.maxDeviation = (r.computed - r.expected).cwiseAbs().maxCoeff();
  return r;
}

// ---------------------------------------------------------------------------
// Leaf-level consequences

/// Max over invariants of (max - min) along the trace.
inline double fiberBundleCheck(const LeafTrace& trace, const std::vector<DualFunction>& invariants) {
  double spread = 0.0;
  for (const auto& f : invariants) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : trace.points) {
      const double v = eval(f, p.coords());
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (!trace.points.empty()) spread = std::max(spread, hi - lo);
  }
  return spread;
}

/// Max spread of the base projection of a trace.
inline double baseSpread(const LeafTrace& trace) {
  double spread = 0.0;
  if (trace.points.empty()) return spread;
  const std::size_t n = trace.points.front().x.size();
  for (std::size_t a = 0; a < n; ++a) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& p : trace.points) {
      lo = std::min(lo, p.x[a]);
      hi = std::max(hi, p.x[a]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

/// For the cotangent algebroid of a Poisson structure, compares X_{l_df}
/// with the complete lift of X_f and X_{p*f} with its vertical lift.
/// X_f^a = pi^{ia} d_i f with pi^{ia} = rho^a_i.
inline double tangentLiftCheck(const AlgebroidSpec& spec, const Expr& f, const std::vector<DualPoint>& pts) {
  if (spec.m() != spec.n()) throw std::invalid_argument("tangent lift needs a cotangent algebroid (m = n)");
  const int n = spec.n();
  FieldComponents xf(static_cast<std::size_t>(n), Expr(0.0));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) xf[a] += spec.rho(a, i) * diff(f, i);

  FieldComponents complete(static_cast<std::size_t>(2 * n), Expr(0.0)), vertical(static_cast<std::size_t>(2 * n), Expr(0.0));
  for (int a = 0; a < n; ++a) {
    complete[a] = xf[a];
    Expr acc(0.0);
    for (int b = 0; b < n; ++b) acc += fiberCoordinate(spec, b) * diff(xf[a], b);
    complete[n + a] = acc;
    vertical[n + a] = xf[a];
  }
  Section df{FieldComponents(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) df.components[i] = diff(f, i);
  const FieldComponents xl = hamiltonianVFExprs(spec, linearFunction(spec, df));
  const FieldComponents xp = hamiltonianVFExprs(spec, pullback(f));
  FieldComponents d1(xl.size()), d2(xp.size());
  for (std::size_t c = 0; c < xl.size(); ++c) {
    d1[c] = xl[c] - complete[c];
    d2[c] = xp[c] - vertical[c];
  }
  double r = 0.0;
  for (const auto& p : pts) {
    const auto z = p.coords();
    r = std::max({r, evalVector(d1, z).norm(), evalVector(d2, z).norm()});
  }
  return r;
}

}  // namespace lieleaf
