#pragma once

// A Lie algebroid A -> M in a single chart: anchor rho^a_i(x), structure
// functions c^k_ij(x), the induced bracket on sections, and sample-based
// validation of the algebroid axioms.

#include <lieleaf/expr.hpp>
#include <lieleaf/linalg.hpp>

#include <algorithm>
#include <array>
#include <span>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lieleaf {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Components of a vector field, one-form or section, each a ScalarField.
using FieldComponents = std::vector<Expr>;

struct Section {
  FieldComponents components;  // u = sum u^i e_i
};

struct OneForm {
  FieldComponents components;  // gamma = sum gamma_a dx^a
};

/// D in Hom(TM, A), stored row-major as D^i_a with i in [0,m), a in [0,n).
struct HomTMA {
  int m = 0, n = 0;
  std::vector<Expr> entries;

  HomTMA() = default;
  HomTMA(int m_, int n_) : m(m_), n(n_), entries(static_cast<std::size_t>(m_ * n_)) {}
  Expr& operator()(int i, int a) { return entries[static_cast<std::size_t>(i * n + a)]; }
  const Expr& operator()(int i, int a) const { return entries[static_cast<std::size_t>(i * n + a)]; }
};

class AlgebroidSpec {
 public:
  AlgebroidSpec() = default;

  /// anchor: n*m entries, rho^a_i at [a*m + i]; structure: m^3 entries,
  /// c^k_ij at [(k*m + i)*m + j].
  AlgebroidSpec(std::vector<std::string> base_coords, int m, std::vector<Expr> anchor,
                std::vector<Expr> structure)
      : coords_(std::move(base_coords)), m_(m), anchor_(std::move(anchor)), structure_(std::move(structure)) {
    const int n = static_cast<int>(coords_.size());
    if (n < 1) throw ShapeError("algebroid chart needs at least one base coordinate");
    if (m_ < 1) throw ShapeError("algebroid rank must be positive");
    if (anchor_.size() != static_cast<std::size_t>(n * m_)) throw ShapeError("anchor must have n*m entries");
    if (structure_.size() != static_cast<std::size_t>(m_ * m_ * m_))
      throw ShapeError("structure tensor must have m^3 entries");
    for (int i = 0; i < m_; ++i) fiber_coords_.push_back("xi" + std::to_string(i + 1));
  }

  int n() const { return static_cast<int>(coords_.size()); }
  int m() const { return m_; }
  int dim() const { return n() + m_; }

  const std::vector<std::string>& baseCoords() const { return coords_; }
  const std::vector<std::string>& fiberCoords() const { return fiber_coords_; }
  void setFiberCoords(std::vector<std::string> names) {
    if (static_cast<int>(names.size()) != m_) throw ShapeError("fiber coordinate count must equal m");
    fiber_coords_ = std::move(names);
  }
  /// Base names followed by fiber names: the coordinates of A*.
  std::vector<std::string> dualCoords() const {
    std::vector<std::string> all = coords_;
    all.insert(all.end(), fiber_coords_.begin(), fiber_coords_.end());
    return all;
  }

  const Expr& rho(int a, int i) const { return anchor_[static_cast<std::size_t>(a * m_ + i)]; }
  const Expr& c(int k, int i, int j) const { return structure_[static_cast<std::size_t>((k * m_ + i) * m_ + j)]; }

  const std::string& name() const { return name_; }
  void setName(std::string name) { name_ = std::move(name); }

  /// Set when the chart carries a single placeholder coordinate standing in
  /// for a one-point base (Lie algebras).
  bool dummyBase() const { return dummy_base_; }
  void setDummyBase(bool v) { dummy_base_ = v; }

 private:
  std::vector<std::string> coords_;
  std::vector<std::string> fiber_coords_;
  int m_ = 0;
  std::vector<Expr> anchor_;
  std::vector<Expr> structure_;
  std::string name_;
  bool dummy_base_ = false;
};

// ---------------------------------------------------------------------------
// Section calculus

inline Section basisSection(const AlgebroidSpec& spec, int i) {
  Section e{FieldComponents(static_cast<std::size_t>(spec.m()), Expr(0.0))};
  e.components[static_cast<std::size_t>(i)] = Expr(1.0);
  return e;
}

inline void checkSection(const AlgebroidSpec& spec, const Section& u) {
  if (static_cast<int>(u.components.size()) != spec.m()) throw ShapeError("section must have m components");
}

inline void checkForm(const AlgebroidSpec& spec, const OneForm& g) {
  if (static_cast<int>(g.components.size()) != spec.n()) throw ShapeError("one-form must have n components");
}

inline void checkHom(const AlgebroidSpec& spec, const HomTMA& d) {
  if (d.m != spec.m() || d.n != spec.n() || d.entries.size() != static_cast<std::size_t>(d.m * d.n))
    throw ShapeError("Hom(TM,A) element must be m x n");
}

/// rho(u) as a vector field on M.
inline FieldComponents anchorOf(const AlgebroidSpec& spec, const Section& u) {
  checkSection(spec, u);
  FieldComponents x(static_cast<std::size_t>(spec.n()), Expr(0.0));
  for (int a = 0; a < spec.n(); ++a)
    for (int i = 0; i < spec.m(); ++i) x[a] += spec.rho(a, i) * u.components[i];
  return x;
}

/// Directional derivative X(f) = X^a d_a f, with X given on the first
/// X.size() coordinates.
inline Expr derivative(const FieldComponents& x, const Expr& f) {
  Expr r(0.0);
  for (std::size_t a = 0; a < x.size(); ++a)
    if (!x[a].is_zero()) r += x[a] * diff(f, static_cast<int>(a));
  return r;
}

/// Lie bracket of vector fields given by components.
inline FieldComponents vectorFieldBracket(const FieldComponents& x, const FieldComponents& y) {
  if (x.size() != y.size()) throw ShapeError("vector fields of different dimensions");
  FieldComponents r(x.size(), Expr(0.0));
  for (std::size_t a = 0; a < x.size(); ++a) r[a] = derivative(x, y[a]) - derivative(y, x[a]);
  return r;
}

/// [u,v]^k = u^i v^j c^k_ij + rho(u)(v^k) - rho(v)(u^k).
inline Section bracketSections(const AlgebroidSpec& spec, const Section& u, const Section& v) {
  checkSection(spec, u);
  checkSection(spec, v);
  const int m = spec.m();
  const FieldComponents ru = anchorOf(spec, u), rv = anchorOf(spec, v);
  Section r{FieldComponents(static_cast<std::size_t>(m), Expr(0.0))};
  for (int k = 0; k < m; ++k) {
    Expr acc(0.0);
    for (int i = 0; i < m; ++i) {
      if (u.components[i].is_zero()) continue;
      for (int j = 0; j < m; ++j) {
        if (v.components[j].is_zero() || spec.c(k, i, j).is_zero()) continue;
        acc += u.components[i] * v.components[j] * spec.c(k, i, j);
      }
    }
    acc += derivative(ru, v.components[k]);
    acc -= derivative(rv, u.components[k]);
    r.components[k] = acc;
  }
  return r;
}

inline Section scale(const Expr& f, const Section& u) {
  Section r = u;
  for (auto& c : r.components) c = f * c;
  return r;
}

inline Section add(const Section& u, const Section& v) {
  Section r = u;
  for (std::size_t i = 0; i < r.components.size(); ++i) r.components[i] += v.components[i];
  return r;
}

inline Section subtract(const Section& u, const Section& v) {
  Section r = u;
  for (std::size_t i = 0; i < r.components.size(); ++i) r.components[i] -= v.components[i];
  return r;
}

/// Column a of D as a section: D(d_a).
inline Section column(const HomTMA& d, int a) {
  Section s{FieldComponents(static_cast<std::size_t>(d.m), Expr(0.0))};
  for (int i = 0; i < d.m; ++i) s.components[i] = d(i, a);
  return s;
}

inline std::vector<double> evalAll(const FieldComponents& f, std::span<const double> p) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = eval(f[i], p);
  return out;
}

inline Mat anchorAt(const AlgebroidSpec& spec, std::span<const double> x) {
  Mat r(spec.n(), spec.m());
  for (int a = 0; a < spec.n(); ++a)
    for (int i = 0; i < spec.m(); ++i) r(a, i) = eval(spec.rho(a, i), x);
  return r;
}

inline Mat evalHom(const HomTMA& d, std::span<const double> x) {
  Mat r(d.m, d.n);
  for (int i = 0; i < d.m; ++i)
    for (int a = 0; a < d.n; ++a) r(i, a) = eval(d(i, a), x);
  return r;
}

// ---------------------------------------------------------------------------
// Validation

struct PointFailure {
  std::size_t index;
  std::string message;
};

struct ValidationReport {
  double antisymmetry = 0.0;
  double anchorMorphism = 0.0;
  double jacobi = 0.0;
  std::vector<PointFailure> failures;
  bool pass = false;
};

/// Symbolic axiom defects of a spec, built once and evaluated per point.
class AxiomDefects {
 public:
  explicit AxiomDefects(const AlgebroidSpec& spec) {
    const int m = spec.m();
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) antisymmetry_.push_back(spec.c(k, i, j) + spec.c(k, j, i));
    std::vector<Section> e;
    for (int i = 0; i < m; ++i) e.push_back(basisSection(spec, i));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        FieldComponents lhs = anchorOf(spec, bracketSections(spec, e[i], e[j]));
        FieldComponents rhs = vectorFieldBracket(anchorOf(spec, e[i]), anchorOf(spec, e[j]));
        for (int a = 0; a < spec.n(); ++a) anchor_.push_back(lhs[a] - rhs[a]);
      }
    std::vector<std::vector<Section>> br(static_cast<std::size_t>(m), std::vector<Section>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) br[i][j] = bracketSections(spec, e[i], e[j]);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          Section s = bracketSections(spec, br[i][j], e[k]);
          s = add(s, bracketSections(spec, br[j][k], e[i]));
          s = add(s, bracketSections(spec, br[k][i], e[j]));
          for (const auto& c : s.components) jacobi_.push_back(c);
        }
  }

  /// Max absolute defects at one point: {antisymmetry, anchor, jacobi}.
  std::array<double, 3> at(std::span<const double> x) const {
    return {maxAbs(antisymmetry_, x), maxAbs(anchor_, x), maxAbs(jacobi_, x)};
  }

 private:
  static double maxAbs(const std::vector<Expr>& es, std::span<const double> x) {
    double r = 0.0;
    for (const auto& e : es) r = std::max(r, std::abs(eval(e, x)));
    return r;
  }

  std::vector<Expr> antisymmetry_, anchor_, jacobi_;
};

inline ValidationReport validate(const AlgebroidSpec& spec, const std::vector<std::vector<double>>& samplePoints,
                                 double tol) {
  AxiomDefects defects(spec);
  ValidationReport rep;
  for (std::size_t p = 0; p < samplePoints.size(); ++p) {
    try {
      auto d = defects.at(samplePoints[p]);
      rep.antisymmetry = std::max(rep.antisymmetry, d[0]);
      rep.anchorMorphism = std::max(rep.anchorMorphism, d[1]);
      rep.jacobi = std::max(rep.jacobi, d[2]);
    } catch (const std::exception& ex) {
      rep.failures.push_back({p, ex.what()});
    }
  }
  rep.pass = rep.antisymmetry <= tol && rep.anchorMorphism <= tol && rep.jacobi <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Group bundle Hom(TM,A)^0

struct HomProduct {
  Mat value;        // m x n
  bool invertible;  // id_n + rho(x) Phi(x) invertible
};

/// Phi . Psi = Phi + Psi - Phi rho Psi at x.
inline HomProduct homGroupMultiply(const AlgebroidSpec& spec, const HomTMA& phi, const HomTMA& psi,
                                   std::span<const double> x, double tol = kDefaultRankTol) {
  checkHom(spec, phi);
  checkHom(spec, psi);
  Mat p = evalHom(phi, x), q = evalHom(psi, x), r = anchorAt(spec, x);
  Mat prod = p + q - p * r * q;
  Mat g = Mat::Identity(spec.n(), spec.n()) + r * p;
  return {prod, numericalRank(g, tol) == spec.n()};
}

}  // namespace lieleaf
