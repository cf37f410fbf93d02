#pragma once

// The Lie-Poisson structure on A* in coordinates z = (x^1..x^n, xi_1..xi_m).
//
// Sign ledger (normative for the whole library):
//   {xi_i, xi_j} = c^k_ij(x) xi_k      {xi_i, x^a} = rho^a_i(x)      {x^a, x^b} = 0
//   {F, G} = Pi^{AB} d_A F d_B G,  Pi^{AB} = {z^A, z^B}
//   X_F(G) = {F, G},  so X_F^B = {F, z^B}
//   leaf form: omega(X_F, X_G) = {F, G}
// With these, {l_u, l_v} = l_[u,v], {l_u, p*f} = p*(rho(u) f), X_{p*f} = -rho*(df),
// and on T*R^n the leaf form is omega = dxi_a ^ dx^a.

#include <lieleaf/algebroid.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace lieleaf {

struct DualPoint {
  std::vector<double> x;   // base point, n entries
  std::vector<double> xi;  // fiber covector, m entries

  /// Flattened coordinates (x, xi).
  std::vector<double> coords() const {
    std::vector<double> z = x;
    z.insert(z.end(), xi.begin(), xi.end());
    return z;
  }

  static DualPoint fromCoords(std::span<const double> z, int n) {
    DualPoint p;
    p.x.assign(z.begin(), z.begin() + n);
    p.xi.assign(z.begin() + n, z.end());
    return p;
  }
};

/// A ScalarField over the n+m coordinates of A*.
using DualFunction = Expr;

inline void checkPoint(const AlgebroidSpec& spec, const DualPoint& pt) {
  if (static_cast<int>(pt.x.size()) != spec.n() || static_cast<int>(pt.xi.size()) != spec.m())
    throw ShapeError("dual point dimensions do not match the spec");
}

/// xi_i as a function on A*.
inline DualFunction fiberCoordinate(const AlgebroidSpec& spec, int i) { return Expr::variable(spec.n() + i); }

/// x^a as a function on A* (i.e. p*x^a).
inline DualFunction baseCoordinate(int a) { return Expr::variable(a); }

/// l_u(x, xi) = u^i(x) xi_i.
inline DualFunction linearFunction(const AlgebroidSpec& spec, const Section& u) {
  checkSection(spec, u);
  Expr r(0.0);
  for (int i = 0; i < spec.m(); ++i) r += u.components[i] * fiberCoordinate(spec, i);
  return r;
}

/// p*f: base functions use the leading n coordinates, so the pullback is the
/// same expression.
inline DualFunction pullback(const Expr& f) { return f; }

/// Symbolic bivector Pi^{AB}, row-major (n+m) x (n+m).
inline std::vector<Expr> bivectorExprs(const AlgebroidSpec& spec) {
  const int n = spec.n(), m = spec.m(), d = spec.dim();
  std::vector<Expr> pi(static_cast<std::size_t>(d * d), Expr(0.0));
  auto at = [&](int r, int c) -> Expr& { return pi[static_cast<std::size_t>(r * d + c)]; };
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a) {
      at(n + i, a) = spec.rho(a, i);
      at(a, n + i) = neg(spec.rho(a, i));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Expr acc(0.0);
      for (int k = 0; k < m; ++k)
        if (!spec.c(k, i, j).is_zero()) acc += spec.c(k, i, j) * fiberCoordinate(spec, k);
      at(n + i, n + j) = acc;
    }
  return pi;
}

inline Mat bivectorAt(const AlgebroidSpec& spec, const DualPoint& pt) {
  checkPoint(spec, pt);
  const auto z = pt.coords();
  const int n = spec.n(), m = spec.m(), d = spec.dim();
  Mat pi = Mat::Zero(d, d);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a) {
      double r = eval(spec.rho(a, i), z);
      pi(n + i, a) = r;
      pi(a, n + i) = -r;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < m; ++k)
        if (!spec.c(k, i, j).is_zero()) acc += eval(spec.c(k, i, j), z) * pt.xi[k];
      pi(n + i, n + j) = acc;
    }
  return pi;
}

/// {F,G} = c^k_ij xi_k dF/dxi_i dG/dxi_j + rho^a_i (dF/dxi_i dG/dx^a - dG/dxi_i dF/dx^a).
inline DualFunction bracket(const AlgebroidSpec& spec, const DualFunction& f, const DualFunction& g) {
  const int n = spec.n(), m = spec.m();
  std::vector<Expr> df(static_cast<std::size_t>(n + m)), dg(static_cast<std::size_t>(n + m));
  for (int c = 0; c < n + m; ++c) {
    df[c] = diff(f, c);
    dg[c] = diff(g, c);
  }
  Expr r(0.0);
  for (int i = 0; i < m; ++i) {
    const Expr& fi = df[n + i];
    const Expr& gi = dg[n + i];
    if (!fi.is_zero())
      for (int j = 0; j < m; ++j) {
        const Expr& gj = dg[n + j];
        if (gj.is_zero()) continue;
        Expr s(0.0);
        for (int k = 0; k < m; ++k)
          if (!spec.c(k, i, j).is_zero()) s += spec.c(k, i, j) * fiberCoordinate(spec, k);
        if (!s.is_zero()) r += s * fi * gj;
      }
    for (int a = 0; a < n; ++a) {
      const Expr& rho = spec.rho(a, i);
      if (rho.is_zero()) continue;
      r += rho * (fi * dg[a] - gi * df[a]);
    }
  }
  return r;
}

/// Components of X_F: ({F, x^a}, {F, xi_j}).
inline FieldComponents hamiltonianVFExprs(const AlgebroidSpec& spec, const DualFunction& f) {
  const int n = spec.n(), m = spec.m();
  FieldComponents x(static_cast<std::size_t>(n + m), Expr(0.0));
  for (int a = 0; a < n; ++a) x[a] = bracket(spec, f, baseCoordinate(a));
  for (int j = 0; j < m; ++j) x[n + j] = bracket(spec, f, fiberCoordinate(spec, j));
  return x;
}

inline Vec evalVector(const FieldComponents& f, std::span<const double> z) {
  Vec v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = eval(f[i], z);
  return v;
}

inline Vec hamiltonianVF(const AlgebroidSpec& spec, const DualFunction& f, const DualPoint& pt) {
  checkPoint(spec, pt);
  return evalVector(hamiltonianVFExprs(spec, f), pt.coords());
}

/// Cyclic sums {{F,G},H} + {{G,H},F} + {{H,F},G} over coordinate triples,
/// built symbolically once.
class Jacobiator {
 public:
  explicit Jacobiator(const AlgebroidSpec& spec) {
    const int d = spec.dim();
    std::vector<Expr> z;
    for (int c = 0; c < d; ++c) z.push_back(Expr::variable(c));
    std::vector<Expr> pairs(static_cast<std::size_t>(d * d));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) pairs[static_cast<std::size_t>(a * d + b)] = bracket(spec, z[a], z[b]);
    auto br = [&](int a, int b) -> const Expr& { return pairs[static_cast<std::size_t>(a * d + b)]; };
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b)
        for (int c = b + 1; c < d; ++c) {
          Expr s = bracket(spec, br(a, b), z[c]) + bracket(spec, br(b, c), z[a]) + bracket(spec, br(c, a), z[b]);
          if (!s.is_zero()) terms_.push_back(s);
        }
  }

  double at(std::span<const double> z) const {
    double r = 0.0;
    for (const auto& t : terms_) r = std::max(r, std::abs(eval(t, z)));
    return r;
  }

 private:
  std::vector<Expr> terms_;
};

inline double jacobiDefect(const AlgebroidSpec& spec, const DualPoint& pt) {
  checkPoint(spec, pt);
  return Jacobiator(spec).at(pt.coords());
}

/// Max over points of |X_F|; F is a Casimir on the sample iff this is ~0.
inline double casimirDefect(const AlgebroidSpec& spec, const DualFunction& f, const std::vector<DualPoint>& points) {
  const FieldComponents x = hamiltonianVFExprs(spec, f);
  double r = 0.0;
  for (const auto& p : points) {
    checkPoint(spec, p);
    r = std::max(r, evalVector(x, p.coords()).norm());
  }
  return r;
}

}  // namespace lieleaf
