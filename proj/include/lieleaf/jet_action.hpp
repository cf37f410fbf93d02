#pragma once

// Infinitesimal affine coadjoint action of JA |x T*M on A*.
//
// A section du + D + gamma acts on A* by the vector field
//   base:  rho(u)
//   fiber: (fiber part of X_{l_u}) - rho*(D) xi - rho*(gamma)
// where (rho*(D) xi)_j = xi_k D^k_a rho^a_j and (rho*(gamma))_j = gamma_a rho^a_j.

#include <lieleaf/lie_poisson.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace lieleaf {

struct AffineJetSection {
  Section u;
  HomTMA D;
  OneForm gamma;

  static AffineJetSection zero(const AlgebroidSpec& spec) {
    return {Section{FieldComponents(static_cast<std::size_t>(spec.m()), Expr(0.0))}, HomTMA(spec.m(), spec.n()),
            OneForm{FieldComponents(static_cast<std::size_t>(spec.n()), Expr(0.0))}};
  }
  static AffineJetSection ofSection(const AlgebroidSpec& spec, Section u) {
    auto s = zero(spec);
    s.u = std::move(u);
    return s;
  }
  static AffineJetSection ofHom(const AlgebroidSpec& spec, HomTMA d) {
    auto s = zero(spec);
    s.D = std::move(d);
    return s;
  }
  static AffineJetSection ofForm(const AlgebroidSpec& spec, OneForm g) {
    auto s = zero(spec);
    s.gamma = std::move(g);
    return s;
  }
};

inline void checkJet(const AlgebroidSpec& spec, const AffineJetSection& s) {
  checkSection(spec, s.u);
  checkHom(spec, s.D);
  checkForm(spec, s.gamma);
}

// ---------------------------------------------------------------------------
// Small tensor helpers on Hom(TM,A), T*M and TM

/// D o rho o D' as an m x n matrix of fields.
inline HomTMA composeThroughAnchor(const AlgebroidSpec& spec, const HomTMA& d, const HomTMA& dp) {
  HomTMA r(spec.m(), spec.n());
  for (int i = 0; i < spec.m(); ++i)
    for (int a = 0; a < spec.n(); ++a) {
      Expr acc(0.0);
      for (int b = 0; b < spec.n(); ++b) {
        if (d(i, b).is_zero()) continue;
        Expr rd(0.0);  // (rho D')^b_a
        for (int k = 0; k < spec.m(); ++k)
          if (!spec.rho(b, k).is_zero() && !dp(k, a).is_zero()) rd += spec.rho(b, k) * dp(k, a);
        if (!rd.is_zero()) acc += d(i, b) * rd;
      }
      r(i, a) = acc;
    }
  return r;
}

inline HomTMA operator+(const HomTMA& a, const HomTMA& b) {
  HomTMA r = a;
  for (std::size_t e = 0; e < r.entries.size(); ++e) r.entries[e] += b.entries[e];
  return r;
}

inline HomTMA operator-(const HomTMA& a, const HomTMA& b) {
  HomTMA r = a;
  for (std::size_t e = 0; e < r.entries.size(); ++e) r.entries[e] -= b.entries[e];
  return r;
}

/// (L_Y gamma)_a = Y^b d_b gamma_a + gamma_b d_a Y^b.
inline OneForm lieDerivative(const FieldComponents& y, const OneForm& g) {
  const std::size_t n = g.components.size();
  OneForm r{FieldComponents(n, Expr(0.0))};
  for (std::size_t a = 0; a < n; ++a) {
    Expr acc = derivative(y, g.components[a]);
    for (std::size_t b = 0; b < n; ++b)
      if (!g.components[b].is_zero()) acc += g.components[b] * diff(y[b], static_cast<int>(a));
    r.components[a] = acc;
  }
  return r;
}

/// i_gamma rho(D) = gamma o rho o D: (.)_a = gamma_b rho^b_k D^k_a.
inline OneForm contractAnchorHom(const AlgebroidSpec& spec, const OneForm& g, const HomTMA& d) {
  OneForm r{FieldComponents(static_cast<std::size_t>(spec.n()), Expr(0.0))};
  for (int a = 0; a < spec.n(); ++a) {
    Expr acc(0.0);
    for (int b = 0; b < spec.n(); ++b) {
      if (g.components[b].is_zero()) continue;
      for (int k = 0; k < spec.m(); ++k)
        if (!spec.rho(b, k).is_zero() && !d(k, a).is_zero()) acc += g.components[b] * spec.rho(b, k) * d(k, a);
    }
    r.components[a] = acc;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fundamental vector fields

inline FieldComponents fundamentalVFExprs(const AlgebroidSpec& spec, const AffineJetSection& s) {
  checkJet(spec, s);
  const int n = spec.n(), m = spec.m();
  FieldComponents x = hamiltonianVFExprs(spec, linearFunction(spec, s.u));
  for (int j = 0; j < m; ++j) {
    Expr acc(0.0);
    for (int a = 0; a < n; ++a) {
      const Expr& rho = spec.rho(a, j);
      if (rho.is_zero()) continue;
      Expr w = s.gamma.components[a];
      for (int k = 0; k < m; ++k)
        if (!s.D(k, a).is_zero()) w += fiberCoordinate(spec, k) * s.D(k, a);
      if (!w.is_zero()) acc += w * rho;
    }
    x[n + j] -= acc;
  }
  return x;
}

inline Vec fundamentalVF(const AlgebroidSpec& spec, const AffineJetSection& s, const DualPoint& pt) {
  checkPoint(spec, pt);
  return evalVector(fundamentalVFExprs(spec, s), pt.coords());
}

/// Bracket on sections of JA |x T*M:
///   [du, dv] = d[u,v],  [du, D](d_a) = [u, D(d_a)] - D([rho(u), d_a]),
///   [D, D'] = -D rho D' + D' rho D,  [du + D, gamma] = L_{rho(u)} gamma + gamma o rho o D.
inline AffineJetSection jetBracket(const AlgebroidSpec& spec, const AffineJetSection& s1, const AffineJetSection& s2) {
  checkJet(spec, s1);
  checkJet(spec, s2);
  const int n = spec.n(), m = spec.m();
  AffineJetSection r = AffineJetSection::zero(spec);
  r.u = bracketSections(spec, s1.u, s2.u);

  // [du, D] as an m x n field matrix.
  auto du_on = [&](const Section& u, const HomTMA& d) {
    HomTMA out(m, n);
    const FieldComponents ru = anchorOf(spec, u);
    for (int a = 0; a < n; ++a) {
      Section col = bracketSections(spec, u, column(d, a));
      for (int b = 0; b < n; ++b) {
        Expr da = diff(ru[b], a);  // -[rho(u), d_a]^b
        if (da.is_zero()) continue;
        for (int i = 0; i < m; ++i) col.components[i] += da * d(i, b);
      }
      for (int i = 0; i < m; ++i) out(i, a) = col.components[i];
    }
    return out;
  };
  r.D = du_on(s1.u, s2.D) - du_on(s2.u, s1.D) - composeThroughAnchor(spec, s1.D, s2.D) +
        composeThroughAnchor(spec, s2.D, s1.D);

  const OneForm a = lieDerivative(anchorOf(spec, s1.u), s2.gamma);
  const OneForm b = lieDerivative(anchorOf(spec, s2.u), s1.gamma);
  const OneForm c = contractAnchorHom(spec, s2.gamma, s1.D);
  const OneForm d = contractAnchorHom(spec, s1.gamma, s2.D);
  for (int k = 0; k < n; ++k) r.gamma.components[k] = a.components[k] - b.components[k] + c.components[k] - d.components[k];
  return r;
}

/// max over pts of |ad([s1,s2]) - [ad(s1), ad(s2)]|.
inline double homomorphismDefect(const AlgebroidSpec& spec, const AffineJetSection& s1, const AffineJetSection& s2,
                                 const std::vector<DualPoint>& pts) {
  const FieldComponents lhs = fundamentalVFExprs(spec, jetBracket(spec, s1, s2));
  const FieldComponents rhs = vectorFieldBracket(fundamentalVFExprs(spec, s1), fundamentalVFExprs(spec, s2));
  FieldComponents diffs(lhs.size());
  for (std::size_t c = 0; c < lhs.size(); ++c) diffs[c] = lhs[c] - rhs[c];
  double r = 0.0;
  for (const auto& p : pts) {
    checkPoint(spec, p);
    r = std::max(r, evalVector(diffs, p.coords()).norm());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Poisson and Hamiltonian criteria

/// (L_X Pi)^{AB} = X^C d_C Pi^{AB} - Pi^{CB} d_C X^A - Pi^{AC} d_C X^B, row-major.
inline std::vector<Expr> lieDerivativeOfBivector(const AlgebroidSpec& spec, const FieldComponents& x) {
  const int d = spec.dim();
  const std::vector<Expr> pi = bivectorExprs(spec);
  auto P = [&](int a, int b) -> const Expr& { return pi[static_cast<std::size_t>(a * d + b)]; };
  std::vector<std::vector<Expr>> dx(static_cast<std::size_t>(d), std::vector<Expr>(static_cast<std::size_t>(d)));
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) dx[a][c] = diff(x[a], c);
  std::vector<Expr> out(static_cast<std::size_t>(d * d), Expr(0.0));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Expr acc = derivative(x, P(a, b));
      for (int c = 0; c < d; ++c) {
        if (!dx[a][c].is_zero() && !P(c, b).is_zero()) acc -= P(c, b) * dx[a][c];
        if (!dx[b][c].is_zero() && !P(a, c).is_zero()) acc -= P(a, c) * dx[b][c];
      }
      out[static_cast<std::size_t>(a * d + b)] = acc;
    }
  return out;
}

inline double maxAbsAt(const std::vector<Expr>& es, const std::vector<DualPoint>& pts) {
  double r = 0.0;
  for (const auto& p : pts) {
    const auto z = p.coords();
    for (const auto& e : es)
      if (!e.is_zero()) r = std::max(r, std::abs(eval(e, z)));
  }
  return r;
}

struct PoissonCriterionD {
  bool isPoisson = false;
  double lieDerivDefect = 0.0;
  double derivationDefect = 0.0;
};

struct PoissonCriterionGamma {
  bool isPoisson = false;
  double lieDerivDefect = 0.0;
  double rhoDGammaDefect = 0.0;
};

/// (D o rho)(u) as a section.
inline Section applyDRho(const AlgebroidSpec& spec, const HomTMA& d, const Section& u) {
  const FieldComponents ru = anchorOf(spec, u);
  Section r{FieldComponents(static_cast<std::size_t>(spec.m()), Expr(0.0))};
  for (int k = 0; k < spec.m(); ++k)
    for (int a = 0; a < spec.n(); ++a)
      if (!d(k, a).is_zero() && !ru[a].is_zero()) r.components[k] += d(k, a) * ru[a];
  return r;
}

/// Derivation defect of Phi = D o rho,
///   delta(u, v) = Phi[u,v] - [Phi u, v] - [u, Phi v],
/// probed on frame pairs (e_i, e_j) and on the non-tensorial part
/// delta(x^a e_i, e_j) - x^a delta(e_i, e_j). Returned symbolically, one
/// vector of m components per probe.
inline std::vector<Section> derivationDefectProbes(const AlgebroidSpec& spec, const HomTMA& d) {
  const int m = spec.m();
  auto delta = [&](const Section& u, const Section& v) {
    Section a = applyDRho(spec, d, bracketSections(spec, u, v));
    a = subtract(a, bracketSections(spec, applyDRho(spec, d, u), v));
    return subtract(a, bracketSections(spec, u, applyDRho(spec, d, v)));
  };
  std::vector<Section> probes;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Section ei = basisSection(spec, i), ej = basisSection(spec, j);
      const Section frame = delta(ei, ej);
      if (i < j) probes.push_back(frame);
      for (int a = 0; a < spec.n(); ++a) {
        const Expr xa = Expr::variable(a);
        probes.push_back(subtract(delta(scale(xa, ei), ej), scale(xa, frame)));
      }
    }
  return probes;
}

inline PoissonCriterionD poissonCriterionD(const AlgebroidSpec& spec, const HomTMA& d, const std::vector<DualPoint>& pts,
                                           double tol) {
  checkHom(spec, d);
  PoissonCriterionD r;
  r.lieDerivDefect =
      maxAbsAt(lieDerivativeOfBivector(spec, fundamentalVFExprs(spec, AffineJetSection::ofHom(spec, d))), pts);
  const auto probes = derivationDefectProbes(spec, d);
  for (const auto& p : pts) {
    const auto z = p.coords();
    for (const auto& s : probes) r.derivationDefect = std::max(r.derivationDefect, evalVector(s.components, z).norm());
  }
  r.isPoisson = r.lieDerivDefect <= tol;
  return r;
}

/// d gamma(rho e_i, rho e_j) for i < j.
inline std::vector<Expr> rhoDGammaExprs(const AlgebroidSpec& spec, const OneForm& g) {
  const int n = spec.n(), m = spec.m();
  std::vector<Expr> out;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Expr acc(0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b || spec.rho(a, i).is_zero() || spec.rho(b, j).is_zero()) continue;
          Expr dg = diff(g.components[b], a) - diff(g.components[a], b);
          if (!dg.is_zero()) acc += spec.rho(a, i) * spec.rho(b, j) * dg;
        }
      out.push_back(acc);
    }
  return out;
}

inline PoissonCriterionGamma poissonCriterionGamma(const AlgebroidSpec& spec, const OneForm& g,
                                                   const std::vector<DualPoint>& pts, double tol) {
  checkForm(spec, g);
  PoissonCriterionGamma r;
  r.lieDerivDefect =
      maxAbsAt(lieDerivativeOfBivector(spec, fundamentalVFExprs(spec, AffineJetSection::ofForm(spec, g))), pts);
  r.rhoDGammaDefect = maxAbsAt(rhoDGammaExprs(spec, g), pts);
  r.isPoisson = r.lieDerivDefect <= tol;
  return r;
}

// ---------------------------------------------------------------------------
// Orbits versus leaves

struct SpanCheck {
  int hamRank = 0;
  int fundRank = 0;
  int bivectorRank = 0;
  bool equal = false;
};

/// Hamiltonian fields of all coordinate functions.
inline Mat hamiltonianMatrix(const AlgebroidSpec& spec, const DualPoint& pt) {
  const int d = spec.dim();
  Mat h(d, d);
  for (int i = 0; i < spec.m(); ++i) h.col(i) = hamiltonianVF(spec, fiberCoordinate(spec, i), pt);
  for (int a = 0; a < spec.n(); ++a) h.col(spec.m() + a) = hamiltonianVF(spec, baseCoordinate(a), pt);
  return h;
}

/// Fundamental fields of e_i, of the elementary dx^a (x) e_i and of dx^a.
inline Mat fundamentalMatrix(const AlgebroidSpec& spec, const DualPoint& pt) {
  const int n = spec.n(), m = spec.m(), d = spec.dim();
  Mat f(d, m + m * n + n);
  int col = 0;
  for (int i = 0; i < m; ++i) f.col(col++) = fundamentalVF(spec, AffineJetSection::ofSection(spec, basisSection(spec, i)), pt);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a) {
      HomTMA e(m, n);
      e(i, a) = Expr(1.0);
      f.col(col++) = fundamentalVF(spec, AffineJetSection::ofHom(spec, e), pt);
    }
  for (int a = 0; a < n; ++a) {
    OneForm g{FieldComponents(static_cast<std::size_t>(n), Expr(0.0))};
    g.components[a] = Expr(1.0);
    f.col(col++) = fundamentalVF(spec, AffineJetSection::ofForm(spec, g), pt);
  }
  return f;
}

inline SpanCheck spanEqualityCheck(const AlgebroidSpec& spec, const DualPoint& pt, double tol) {
  checkPoint(spec, pt);
  const Mat h = hamiltonianMatrix(spec, pt);
  const Mat f = fundamentalMatrix(spec, pt);
  SpanCheck r;
  r.hamRank = numericalRank(h, tol);
  r.fundRank = numericalRank(f, tol);
  r.bivectorRank = numericalRank(bivectorAt(spec, pt), tol);
  r.equal = spanEqual(h, f, tol) && r.hamRank == r.bivectorRank;
  return r;
}

// ---------------------------------------------------------------------------
// Representations of JA on TM and T*M

/// (du + D) |> X = [rho(u), X] - rho(D(X)).
inline FieldComponents actOnVectorField(const AlgebroidSpec& spec, const Section& u, const HomTMA& d,
                                        const FieldComponents& x) {
  checkHom(spec, d);
  if (static_cast<int>(x.size()) != spec.n()) throw ShapeError("vector field must have n components");
  FieldComponents r = vectorFieldBracket(anchorOf(spec, u), x);
  for (int b = 0; b < spec.n(); ++b)
    for (int k = 0; k < spec.m(); ++k) {
      if (spec.rho(b, k).is_zero()) continue;
      for (int a = 0; a < spec.n(); ++a)
        if (!d(k, a).is_zero() && !x[a].is_zero()) r[b] -= spec.rho(b, k) * d(k, a) * x[a];
    }
  return r;
}

/// (du + D) |> gamma = L_{rho(u)} gamma + gamma o rho o D.
inline OneForm actOnOneForm(const AlgebroidSpec& spec, const Section& u, const HomTMA& d, const OneForm& g) {
  checkForm(spec, g);
  checkHom(spec, d);
  OneForm r = lieDerivative(anchorOf(spec, u), g);
  const OneForm c = contractAnchorHom(spec, g, d);
  for (int a = 0; a < spec.n(); ++a) r.components[a] += c.components[a];
  return r;
}

inline std::vector<double> actOnVectorFieldAt(const AlgebroidSpec& spec, const Section& u, const HomTMA& d,
                                              const FieldComponents& x, std::span<const double> base) {
  return evalAll(actOnVectorField(spec, u, d, x), base);
}

inline std::vector<double> actOnOneFormAt(const AlgebroidSpec& spec, const Section& u, const HomTMA& d,
                                          const OneForm& g, std::span<const double> base) {
  return evalAll(actOnOneForm(spec, u, d, g).components, base);
}

}  // namespace lieleaf
