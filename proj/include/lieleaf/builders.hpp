#pragma once

// Constructors for the standard families of Lie algebroids.

#include <lieleaf/algebroid.hpp>

#include <random>
#include <string>
#include <vector>

namespace lieleaf {

/// Structure constants of a finite-dimensional Lie algebra: [e_i,e_j] = c^k_ij e_k.
struct LieAlgebraConstants {
  int dim = 0;
  std::vector<double> c;  // c^k_ij at [(k*dim + i)*dim + j]

  explicit LieAlgebraConstants(int d = 0) : dim(d), c(static_cast<std::size_t>(d * d * d), 0.0) {}
  double& operator()(int k, int i, int j) { return c[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  double operator()(int k, int i, int j) const { return c[static_cast<std::size_t>((k * dim + i) * dim + j)]; }

  /// Sets [e_i,e_j] = v e_k and [e_j,e_i] = -v e_k.
  LieAlgebraConstants& set(int i, int j, int k, double v) {
    (*this)(k, i, j) = v;
    (*this)(k, j, i) = -v;
    return *this;
  }
};

inline LieAlgebraConstants so3Constants() {
  LieAlgebraConstants g(3);
  g.set(0, 1, 2, 1.0).set(1, 2, 0, 1.0).set(2, 0, 1, 1.0);
  return g;
}

inline LieAlgebraConstants heisenbergConstants() {
  LieAlgebraConstants g(3);
  g.set(0, 1, 2, 1.0);
  return g;
}

inline std::vector<std::string> defaultCoords(int n, const std::string& prefix = "x") {
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) names.push_back(prefix + std::to_string(a + 1));
  return names;
}

/// A Lie algebra as an algebroid over one placeholder coordinate "o" on
/// which nothing depends; the anchor vanishes.
inline AlgebroidSpec fromLieAlgebra(const LieAlgebraConstants& g) {
  std::vector<Expr> anchor(static_cast<std::size_t>(g.dim), Expr(0.0));
  std::vector<Expr> structure;
  for (double v : g.c) structure.emplace_back(v);
  AlgebroidSpec spec({"o"}, g.dim, std::move(anchor), std::move(structure));
  spec.setDummyBase(true);
  return spec;
}

/// TM over R^n: rho = id, vanishing structure functions in the coordinate frame.
inline AlgebroidSpec tangent(int n) {
  std::vector<Expr> anchor(static_cast<std::size_t>(n * n), Expr(0.0));
  for (int a = 0; a < n; ++a) anchor[static_cast<std::size_t>(a * n + a)] = Expr(1.0);
  return AlgebroidSpec(defaultCoords(n), n, std::move(anchor),
                       std::vector<Expr>(static_cast<std::size_t>(n * n * n), Expr(0.0)));
}

/// A frame of k vector fields spanning an involutive distribution. The
/// structure functions [X_i,X_j] = c^k_ij X_k default to zero (commuting
/// frame); validate() exposes a wrong choice.
inline AlgebroidSpec regularDistribution(std::vector<std::string> coords, const std::vector<FieldComponents>& frame,
                                         std::vector<Expr> structure = {}) {
  const int n = static_cast<int>(coords.size());
  const int k = static_cast<int>(frame.size());
  std::vector<Expr> anchor(static_cast<std::size_t>(n * k));
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(frame[i].size()) != n) throw ShapeError("frame field has wrong dimension");
    for (int a = 0; a < n; ++a) anchor[static_cast<std::size_t>(a * k + i)] = frame[i][a];
  }
  if (structure.empty()) structure.assign(static_cast<std::size_t>(k * k * k), Expr(0.0));
  return AlgebroidSpec(std::move(coords), k, std::move(anchor), std::move(structure));
}

/// Action algebroid g |> M from infinitesimal action fields X_i = rho(e_i).
inline AlgebroidSpec transformation(std::vector<std::string> coords, const std::vector<FieldComponents>& action,
                                    const LieAlgebraConstants& g) {
  if (static_cast<int>(action.size()) != g.dim) throw ShapeError("need one action field per Lie algebra generator");
  std::vector<Expr> structure;
  for (double v : g.c) structure.emplace_back(v);
  return regularDistribution(std::move(coords), action, std::move(structure));
}

/// Gauge algebroid of the trivial bundle: TM (+) g, rho = [id 0].
inline AlgebroidSpec trivialGauge(int n, const LieAlgebraConstants& g) {
  const int m = n + g.dim;
  std::vector<Expr> anchor(static_cast<std::size_t>(n * m), Expr(0.0));
  for (int a = 0; a < n; ++a) anchor[static_cast<std::size_t>(a * m + a)] = Expr(1.0);
  std::vector<Expr> structure(static_cast<std::size_t>(m * m * m), Expr(0.0));
  for (int k = 0; k < g.dim; ++k)
    for (int i = 0; i < g.dim; ++i)
      for (int j = 0; j < g.dim; ++j)
        structure[static_cast<std::size_t>(((n + k) * m + n + i) * m + n + j)] = Expr(g(k, i, j));
  return AlgebroidSpec(defaultCoords(n), m, std::move(anchor), std::move(structure));
}

namespace detail {
/// Checks M + M^T vanishes at a few deterministic sample points.
inline void requireAntisymmetric(const std::vector<Expr>& mat, int n, const char* what) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 8; ++s) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& v : p) v = u(rng);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double d = eval(mat[static_cast<std::size_t>(a * n + b)] + mat[static_cast<std::size_t>(b * n + a)], p);
        if (std::abs(d) > 1e-12) throw std::invalid_argument(std::string(what) + " is not antisymmetric");
      }
  }
}
}  // namespace detail

/// Cotangent algebroid of a Poisson bivector pi^{ab} (row-major n x n):
/// rho(dx^i) = pi^{ij} d_j and [dx^i, dx^j] = d pi^{ij}.
inline AlgebroidSpec cotangentOfPoisson(std::vector<std::string> coords, const std::vector<Expr>& pi) {
  const int n = static_cast<int>(coords.size());
  if (pi.size() != static_cast<std::size_t>(n * n)) throw ShapeError("bivector must be n x n");
  detail::requireAntisymmetric(pi, n, "Poisson bivector");
  std::vector<Expr> anchor(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) anchor[static_cast<std::size_t>(a * n + i)] = pi[static_cast<std::size_t>(i * n + a)];
  std::vector<Expr> structure(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        structure[static_cast<std::size_t>((k * n + i) * n + j)] = diff(pi[static_cast<std::size_t>(i * n + j)], k);
  return AlgebroidSpec(std::move(coords), n, std::move(anchor), std::move(structure));
}

/// Linear Poisson bivector pi^{ab} = c^k_ab x_k on g*.
inline std::vector<Expr> linearPoisson(const LieAlgebraConstants& g) {
  std::vector<Expr> pi(static_cast<std::size_t>(g.dim * g.dim), Expr(0.0));
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b)
      for (int k = 0; k < g.dim; ++k)
        if (g(k, a, b) != 0.0) pi[static_cast<std::size_t>(a * g.dim + b)] += Expr(g(k, a, b)) * Expr::variable(k);
  return pi;
}

/// TM (+) R with [d_a, d_b] = B_ab e_{n+1}; rho = [id; 0]. A closed B gives a
/// Lie algebroid whose isotropy is abelian.
inline AlgebroidSpec magneticExtension(std::vector<std::string> coords, const std::vector<Expr>& b) {
  const int n = static_cast<int>(coords.size());
  if (b.size() != static_cast<std::size_t>(n * n)) throw ShapeError("magnetic 2-form must be n x n");
  detail::requireAntisymmetric(b, n, "magnetic 2-form");
  const int m = n + 1;
  std::vector<Expr> anchor(static_cast<std::size_t>(n * m), Expr(0.0));
  for (int a = 0; a < n; ++a) anchor[static_cast<std::size_t>(a * m + a)] = Expr(1.0);
  std::vector<Expr> structure(static_cast<std::size_t>(m * m * m), Expr(0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      structure[static_cast<std::size_t>((n * m + i) * m + j)] = b[static_cast<std::size_t>(i * n + j)];
  return AlgebroidSpec(std::move(coords), m, std::move(anchor), std::move(structure));
}

}  // namespace lieleaf
