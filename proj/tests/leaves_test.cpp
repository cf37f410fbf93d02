#include <lieleaf/leaves.hpp>

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace lieleaf {
namespace {

using testing::builderCorpus;
using testing::loadBundled;
using testing::randomDualPoints;

DualPoint startOf(const SpecDocument& doc) { return DualPoint::fromCoords(*doc.checks.start, doc.spec.n()); }

TraceConfig longTrace(std::uint64_t seed = 42) {
  TraceConfig cfg;
  cfg.seed = seed;
  cfg.stepSize = 1e-3;
  cfg.stepsPerFlow = 100;
  cfg.flowCount = 100;
  return cfg;
}

double xiNormSquared(const DualPoint& p, int from, int to) {
  double s = 0.0;
  for (int i = from; i < to; ++i) s += p.xi[i] * p.xi[i];
  return s;
}

AlgebroidSpec constantMagnetic(double b12) {
  return magneticExtension(defaultCoords(2), {Expr(0.0), Expr(b12), Expr(-b12), Expr(0.0)});
}

TEST(LeafDimension, Examples) {
  const AlgebroidSpec so3 = fromLieAlgebra(so3Constants());
  EXPECT_EQ(leafDimension(so3, {{0.0}, {0.3, -0.1, 0.7}}, 1e-9), 2);
  EXPECT_EQ(leafDimension(so3, {{0.0}, {0.0, 0.0, 0.0}}, 1e-9), 0);
  for (int n = 1; n <= 4; ++n) {
    const AlgebroidSpec t = tangent(n);
    for (const auto& pt : randomDualPoints(t, 1, 10)) EXPECT_EQ(leafDimension(t, pt, 1e-9), 2 * n);
  }
  const AlgebroidSpec gauge = trivialGauge(2, so3Constants());
  for (const auto& pt : randomDualPoints(gauge, 2, 20)) EXPECT_EQ(leafDimension(gauge, pt, 1e-9), 6);
  const AlgebroidSpec dist = loadBundled("dist2in3").spec;
  for (const auto& pt : randomDualPoints(dist, 3, 20)) EXPECT_EQ(leafDimension(dist, pt, 1e-9), 4);
}

TEST(FlowHamiltonian, So3RotationMatchesClosedForm) {
  // X_{xi1}: xi2' = xi3, xi3' = -xi2.
  const AlgebroidSpec so3 = fromLieAlgebra(so3Constants());
  const DualPoint start{{0.0}, {0.4, 0.6, -0.8}};
  const auto path = flowHamiltonian(so3, fiberCoordinate(so3, 0), start, 1e-3, 1000);
  ASSERT_EQ(path.size(), 1001u);
  const DualPoint& end = path.back();
  EXPECT_NEAR(end.xi[0], 0.4, 1e-15);
  EXPECT_NEAR(end.xi[1], 0.6 * std::cos(1.0) - 0.8 * std::sin(1.0), 1e-12);
  EXPECT_NEAR(end.xi[2], -0.8 * std::cos(1.0) - 0.6 * std::sin(1.0), 1e-12);
}

TEST(FlowHamiltonian, StopsAtTheBox) {
  const AlgebroidSpec t = tangent(1);
  // X_{xi}: x' = 1.
  const auto path = flowHamiltonian(t, fiberCoordinate(t, 0), {{0.0}, {0.0}}, 0.1, 100, ChartBox{-1.0, 1.0});
  EXPECT_EQ(path.size(), 11u);
  EXPECT_NEAR(path.back().x[0], 1.0, 1e-12);
}

TEST(TraceLeaf, So3SphereIsPreserved) {
  const AlgebroidSpec so3 = fromLieAlgebra(so3Constants());
  const LeafTrace tr = traceLeaf(so3, {{0.0}, {0.0, 0.0, 1.0}}, longTrace());
  EXPECT_FALSE(tr.truncated);
  EXPECT_EQ(tr.points.size(), 10001u);
  EXPECT_EQ(tr.generators.size(), 100u);
  double worst = 0.0, spread = 0.0;
  for (const auto& p : tr.points) {
    worst = std::max(worst, std::abs(xiNormSquared(p, 0, 3) - 1.0));
    spread = std::max(spread, std::abs(p.xi[2] - 1.0));
  }
  EXPECT_LE(worst, 1e-6);
  EXPECT_GT(spread, 0.1);  // the trace actually moves on the sphere
}

TEST(TraceLeaf, GeneratorsAreSignedAndInRange) {
  const AlgebroidSpec spec = loadBundled("cotangent-so3").spec;
  TraceConfig cfg = longTrace(5);
  cfg.flowCount = 200;
  cfg.stepsPerFlow = 1;
  const LeafTrace tr = traceLeaf(spec, {{0.1, 0.2, 0.3}, {0.1, 0.0, 0.0}}, cfg);
  bool positive = false, negative = false;
  for (int g : tr.generators) {
    EXPECT_GE(std::abs(g), 1);
    EXPECT_LE(std::abs(g), spec.n() + spec.m());
    positive = positive || g > 0;
    negative = negative || g < 0;
  }
  EXPECT_TRUE(positive && negative);
}

TEST(TraceLeaf, TrivialActionKeepsBaseFixed) {
  const SpecDocument doc = loadBundled("transf-trivial");
  const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), longTrace(7));
  EXPECT_LE(baseSpread(tr), 1e-12);
  EXPECT_GT(tr.points.size(), 1000u);
}

TEST(TraceLeaf, ZeroCovectorOverZeroAnchorIsStationary) {
  const AlgebroidSpec spec = loadBundled("transf-trivial").spec;
  const DualPoint start{{0.3, -0.7}, {0.0, 0.0, 0.0}};
  TraceConfig cfg = longTrace(11);
  cfg.flowCount = 20;
  const LeafTrace tr = traceLeaf(spec, start, cfg);
  for (const auto& p : tr.points) {
    EXPECT_EQ(p.x, start.x);
    EXPECT_EQ(p.xi, start.xi);
  }
}

TEST(TraceLeaf, SameSeedSameTrace) {
  const SpecDocument doc = loadBundled("heisenberg");
  TraceConfig cfg = longTrace(3);
  cfg.flowCount = 30;
  const LeafTrace a = traceLeaf(doc.spec, startOf(doc), cfg), b = traceLeaf(doc.spec, startOf(doc), cfg);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].coords(), b.points[i].coords());
  EXPECT_EQ(a.generators, b.generators);
  cfg.seed = 4;
  EXPECT_NE(traceLeaf(doc.spec, startOf(doc), cfg).generators, a.generators);
}

TEST(TraceLeaf, TruncatesAtTheChartBoundary) {
  const AlgebroidSpec t = tangent(1);
  TraceConfig cfg;
  cfg.stepSize = 0.01;
  cfg.stepsPerFlow = 100;
  cfg.flowCount = 50;
  cfg.box = ChartBox{-1.0, 1.0};
  const LeafTrace tr = traceLeaf(t, {{0.9}, {0.0}}, cfg);
  EXPECT_TRUE(tr.truncated);
  EXPECT_GE(tr.truncatedAtFlow, 0);
  EXPECT_LT(tr.truncatedAtFlow, cfg.flowCount);
  for (const auto& p : tr.points) EXPECT_TRUE(cfg.box.contains(p.coords()));
}

TEST(TraceLeaf, BlowUpReportsFlowIndex) {
  // x' = +-x^2 under the xi flow; large steps overflow.
  const AlgebroidSpec spec({"x"}, 1, {parse("x^2", {"x"})}, {Expr(0.0)});
  TraceConfig cfg;
  cfg.stepSize = 0.5;
  cfg.stepsPerFlow = 50;
  cfg.flowCount = 50;
  cfg.box = ChartBox{-INFINITY, INFINITY};
  try {
    traceLeaf(spec, {{1.0}, {0.0}}, cfg);
    FAIL() << "expected a blow-up";
  } catch (const TraceError& e) {
    EXPECT_GE(e.flow(), 0);
    EXPECT_NE(std::string(e.what()).find("flow"), std::string::npos);
  }
}

TEST(TraceLeaf, DomainErrorBecomesTraceError) {
  const AlgebroidSpec spec({"x"}, 1, {parse("log(x)", {"x"})}, {Expr(0.0)});
  TraceConfig cfg;
  cfg.stepSize = 0.05;
  cfg.stepsPerFlow = 100;
  cfg.flowCount = 40;
  EXPECT_THROW(traceLeaf(spec, {{0.5}, {0.0}}, cfg), TraceError);
}

TEST(TraceLeaf, RejectsBadConfig) {
  const AlgebroidSpec t = tangent(1);
  TraceConfig cfg;
  cfg.stepSize = 0.0;
  EXPECT_THROW(traceLeaf(t, {{0.0}, {0.0}}, cfg), std::invalid_argument);
  cfg = TraceConfig{};
  cfg.box = ChartBox{1.0, -1.0};
  EXPECT_THROW(traceLeaf(t, {{0.0}, {0.0}}, cfg), std::invalid_argument);
  cfg = TraceConfig{};
  EXPECT_THROW(traceLeaf(t, {{20.0}, {0.0}}, cfg), std::invalid_argument);
  EXPECT_THROW(traceLeaf(t, {{0.0, 1.0}, {0.0}}, TraceConfig{}), ShapeError);
}

TEST(TraceLeaf, LeafDimensionIsConstantAlongTraces) {
  struct Case {
    AlgebroidSpec spec;
    DualPoint start;
    int dim;
  };
  const std::vector<Case> cases{
      {fromLieAlgebra(so3Constants()), {{0.0}, {0.0, 0.0, 1.0}}, 2},
      {tangent(2), {{0.1, 0.2}, {0.3, 0.4}}, 4},
      {trivialGauge(2, so3Constants()), {{0.0, 0.0}, {1.0, 0.0, 0.0, 0.0, 1.0}}, 6},
  };
  for (const auto& c : cases) {
    TraceConfig cfg = longTrace(13);
    cfg.flowCount = 20;
    const LeafTrace tr = traceLeaf(c.spec, c.start, cfg);
    for (std::size_t i = 0; i < tr.points.size(); i += 50)
      for (double tol : {1e-7, 1e-9}) EXPECT_EQ(leafDimension(c.spec, tr.points[i], tol), c.dim);
  }
}

TEST(TraceLeaf, DeclaredCasimirsDoNotDrift) {
  for (const auto& name : testing::bundledSpecNames()) {
    const SpecDocument doc = loadBundled(name);
    if (doc.checks.casimirs.empty()) continue;
    const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), longTrace(17));
    EXPECT_LE(fiberBundleCheck(tr, doc.checks.casimirs), 1e-6) << name;
  }
}

TEST(TraceLeaf, TangentTraceFillsTheBase) {
  const AlgebroidSpec t = tangent(2);
  const LeafTrace tr = traceLeaf(t, {{0.0, 0.0}, {0.0, 0.0}}, longTrace(19));
  EXPECT_GT(baseSpread(tr), 0.1);
  for (std::size_t i = 0; i < tr.points.size(); i += 100)
    EXPECT_EQ(numericalRank(bivectorAt(t, tr.points[i]).topRows(2), 1e-9), 2);
}

TEST(Isotropy, TrivialGaugeIsTheLieAlgebraBlock) {
  const AlgebroidSpec gauge = trivialGauge(2, so3Constants());
  const std::vector<double> x{0.3, -0.4};
  const IsotropyAlgebra iso = isotropyAlgebra(gauge, x, 1e-9);
  ASSERT_EQ(iso.dim(), 3);
  EXPECT_LE(iso.closureDefect, 1e-14);
  // Orthonormal basis Q of the so(3) block: C^r_pq = det(Q) eps_rpq.
  Mat q(3, 3);
  for (int p = 0; p < 3; ++p) {
    EXPECT_LE(iso.basis[p].head(2).norm(), 1e-14);
    q.col(p) = iso.basis[p].tail(3);
  }
  const double det = q.determinant();
  EXPECT_NEAR(std::abs(det), 1.0, 1e-12);
  for (int r = 0; r < 3; ++r)
    for (int p = 0; p < 3; ++p)
      for (int s = 0; s < 3; ++s) EXPECT_NEAR(iso.constant(r, p, s), det * testing::epsilon(r, p, s), 1e-12);
}

TEST(Isotropy, Examples) {
  EXPECT_EQ(isotropyAlgebra(tangent(3), std::vector<double>{0.1, 0.2, 0.3}, 1e-9).dim(), 0);

  const IsotropyAlgebra mag = isotropyAlgebra(loadBundled("magnetic2d").spec, std::vector<double>{0.5, 0.1}, 1e-9);
  ASSERT_EQ(mag.dim(), 1);
  EXPECT_NEAR(std::abs(mag.basis[0](2)), 1.0, 1e-15);
  EXPECT_EQ(mag.constant(0, 0, 0), 0.0);
  EXPECT_EQ(mag.closureDefect, 0.0);

  const IsotropyAlgebra so3 = isotropyAlgebra(fromLieAlgebra(so3Constants()), std::vector<double>{0.0}, 1e-9);
  EXPECT_EQ(so3.dim(), 3);
  EXPECT_LE(so3.closureDefect, 1e-14);

  // Cotangent of the so(3) bracket: ker rho(x) = span{x} away from 0.
  const AlgebroidSpec cot = loadBundled("cotangent-so3").spec;
  const std::vector<double> x{0.2, -0.6, 0.3};
  const IsotropyAlgebra line = isotropyAlgebra(cot, x, 1e-9);
  ASSERT_EQ(line.dim(), 1);
  const Vec xv = Eigen::Map<const Vec>(x.data(), 3);
  EXPECT_NEAR(std::abs(line.basis[0].dot(xv)), xv.norm(), 1e-14);
  EXPECT_LE(std::abs(line.constant(0, 0, 0)), 1e-14);
  EXPECT_EQ(isotropyAlgebra(cot, std::vector<double>{0.0, 0.0, 0.0}, 1e-9).dim(), 3);
}

TEST(Isotropy, ConstantsAreAntisymmetricOnBuilders) {
  for (const auto& [name, spec] : builderCorpus())
    for (const auto& x : testing::randomPoints(23, 5, spec.n())) {
      const IsotropyAlgebra iso = isotropyAlgebra(spec, x, 1e-9);
      const int k = iso.dim();
      for (int r = 0; r < k; ++r)
        for (int p = 0; p < k; ++p)
          for (int q = 0; q < k; ++q) EXPECT_NEAR(iso.constant(r, p, q), -iso.constant(r, q, p), 1e-13) << name;
    }
}

TEST(Curvature, FlatExamples) {
  const std::vector<double> x{0.4, -0.2};
  const AlgebroidSpec t = tangent(2);
  const Curvature ct = curvatureAt(t, trivialSplitting(t), x);
  for (const auto& v : ct.values) EXPECT_EQ(v.norm(), 0.0);

  const AlgebroidSpec gauge = trivialGauge(2, so3Constants());
  const Curvature cg = curvatureAt(gauge, loadBundled("trivial-gauge-so3").checks.splitting.value(), x);
  for (const auto& v : cg.values) EXPECT_EQ(v.norm(), 0.0);

  // rho = diag(1, e^x1), lambda = diag(1, e^-x1): [e1, e^-x1 e2] = 0.
  const AlgebroidSpec affine = loadBundled("transf-free").spec;
  HomTMA lambda(2, 2);
  lambda(0, 0) = Expr(1.0);
  lambda(1, 1) = parse("exp(neg(x1))", affine.baseCoords());
  for (const auto& p : testing::randomPoints(29, 10, 2))
    for (const auto& v : curvatureAt(affine, lambda, p).values) EXPECT_LE(v.norm(), 1e-14);
}

TEST(Curvature, MagneticIsMinusTheTwoForm) {
  const AlgebroidSpec mag = builderCorpus()[10].spec;  // B12 = x1 x2 + sin x2
  for (const auto& x : testing::randomPoints(31, 20, 2)) {
    const Curvature c = curvatureAt(mag, trivialSplitting(mag), x);
    const double b12 = x[0] * x[1] + std::sin(x[1]);
    EXPECT_NEAR(c(0, 1)(2), -b12, 1e-15);
    EXPECT_NEAR(c(1, 0)(2), b12, 1e-15);
    EXPECT_EQ(c(0, 1).head(2).norm(), 0.0);
    EXPECT_EQ(c(0, 0).norm(), 0.0);
  }
}

TEST(Curvature, RandomSplittingsAreKernelValued) {
  std::mt19937_64 rng(37);
  std::vector<AlgebroidSpec> specs{builderCorpus()[9].spec, builderCorpus()[10].spec, trivialGauge(2, so3Constants())};
  for (const auto& spec : specs) {
    for (int t = 0; t < 5; ++t) {
      HomTMA lambda = trivialSplitting(spec);
      for (int i = spec.n(); i < spec.m(); ++i)
        for (int a = 0; a < spec.n(); ++a) lambda(i, a) = testing::randomPolynomial(rng, spec.n(), 2);
      for (const auto& x : testing::randomPoints(41 + t, 10, spec.n())) {
        const Curvature c = curvatureAt(spec, lambda, x);
        EXPECT_LE(c.kernelDefect, 1e-10);
        for (int a = 0; a < spec.n(); ++a)
          for (int b = 0; b < spec.n(); ++b) EXPECT_LE((c(a, b) + c(b, a)).norm(), 1e-13);
      }
    }
  }
}

TEST(Curvature, RejectsNonSplitting) {
  const AlgebroidSpec t = tangent(2);
  HomTMA twice(2, 2);
  twice(0, 0) = Expr(2.0);
  twice(1, 1) = Expr(2.0);
  EXPECT_THROW(curvatureAt(t, twice, std::vector<double>{0.0, 0.0}), SplittingError);
  EXPECT_THROW(curvatureAt(loadBundled("dist2in3").spec, HomTMA(2, 3), std::vector<double>{0.0, 0.0, 0.0}),
               SplittingError);
}

TEST(LeafForm, TangentIsCanonical) {
  const AlgebroidSpec t = tangent(2);
  std::vector<Vec> frame;
  for (int c = 0; c < 4; ++c) frame.push_back(Vec::Unit(4, c));
  Mat expected(4, 4);
  expected << 0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0;
  for (const auto& pt : randomDualPoints(t, 43, 5)) EXPECT_LE((leafFormMatrix(t, pt, frame, 1e-9) - expected).norm(), 1e-14);
}

TEST(LeafForm, So3AreaFormAtNorthPole) {
  // {xi1, xi2} = xi3 = 1 at (0,0,1).
  const AlgebroidSpec so3 = fromLieAlgebra(so3Constants());
  const DualPoint pole{{0.0}, {0.0, 0.0, 1.0}};
  EXPECT_NEAR(leafFormAt(so3, pole, Vec::Unit(4, 1), Vec::Unit(4, 2), 1e-9), 1.0, 1e-15);
  EXPECT_NEAR(leafFormAt(so3, pole, Vec::Unit(4, 2), Vec::Unit(4, 1), 1e-9), -1.0, 1e-15);
  EXPECT_THROW(leafFormAt(so3, pole, Vec::Unit(4, 3), Vec::Unit(4, 1), 1e-9), NotTangentError);
  EXPECT_THROW(leafFormAt(so3, pole, Vec::Unit(3, 1), Vec::Unit(4, 1), 1e-9), ShapeError);
}

TEST(LeafForm, RecoversTheBracketOnHamiltonianFields) {
  std::mt19937_64 rng(47);
  for (const auto& [name, spec] : builderCorpus()) {
    for (int t = 0; t < 3; ++t) {
      const Expr f = testing::randomPolynomial(rng, spec.dim(), 2), g = testing::randomPolynomial(rng, spec.dim(), 2);
      const Expr fg = bracket(spec, f, g);
      for (const auto& pt : randomDualPoints(spec, 50 + t, 10)) {
        const Vec vf = hamiltonianVF(spec, f, pt), vg = hamiltonianVF(spec, g, pt);
        const double expected = eval(fg, pt.coords());
        for (auto method : {LeastSquaresMethod::Svd, LeastSquaresMethod::PivotedQr}) {
          const double w = leafFormAt(spec, pt, vf, vg, 1e-8, method);
          EXPECT_NEAR(w, expected, 1e-8 * (1.0 + std::abs(expected))) << name;
        }
      }
    }
  }
}

TEST(LeafForm, AntisymmetricAndSolverIndependent) {
  std::mt19937_64 rng(53);
  for (const auto& [name, spec] : builderCorpus()) {
    for (const auto& pt : randomDualPoints(spec, 59, 10)) {
      std::vector<Vec> vs;
      for (int t = 0; t < 3; ++t) vs.push_back(hamiltonianVF(spec, testing::randomPolynomial(rng, spec.dim(), 2), pt));
      const Mat a = leafFormMatrix(spec, pt, vs, 1e-8, LeastSquaresMethod::Svd);
      const Mat b = leafFormMatrix(spec, pt, vs, 1e-8, LeastSquaresMethod::PivotedQr);
      EXPECT_LE((a + a.transpose()).cwiseAbs().maxCoeff(), 1e-10) << name;
      EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10) << name;
      for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(a(i, i)), 1e-10) << name;
    }
  }
}

TEST(LeafForm, TrivialGaugeSplitsAsProduct) {
  // Canonical block on T*R^2, KKS block eps_ijk mu_k on the orbit, no cross terms.
  const AlgebroidSpec gauge = trivialGauge(2, so3Constants());
  const DualPoint pt{{0.2, -0.1}, {0.5, -0.3, 0.6, 0.8, 0.0}};
  const Vec mu = Vec::Map(pt.xi.data() + 2, 3);
  std::vector<Vec> vs;
  for (int c = 0; c < 4; ++c) vs.push_back(Vec::Unit(7, c));
  for (int i = 0; i < 3; ++i) vs.push_back(hamiltonianVF(gauge, fiberCoordinate(gauge, 2 + i), pt));
  const Mat w = leafFormMatrix(gauge, pt, vs, 1e-9);
  Mat expected = Mat::Zero(7, 7);
  expected.block(0, 2, 2, 2) = -Mat::Identity(2, 2);
  expected.block(2, 0, 2, 2) = Mat::Identity(2, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) expected(4 + i, 4 + j) += testing::epsilon(i, j, k) * mu(k);
  EXPECT_LE((w - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Magnetic, ZeroFieldIsCanonical) {
  const AlgebroidSpec spec = constantMagnetic(0.0);
  for (const auto& pt : randomDualPoints(spec, 61, 20)) {
    const MagneticCheck r = magneticFormCheck(spec, pt, 1e-9);
    EXPECT_LE(r.maxDeviation, 1e-10);
    EXPECT_LE(r.computed.block(0, 0, 2, 2).norm(), 1e-10);
  }
}

TEST(Magnetic, UnitFieldAtUnitCharge) {
  const AlgebroidSpec spec = loadBundled("magnetic2d").spec;
  const MagneticCheck r = magneticFormCheck(spec, {{0.3, 0.1}, {0.2, -0.5, 1.0}}, 1e-9);
  EXPECT_LE(r.maxDeviation, 1e-8);
  // Base block is -s B.
  EXPECT_NEAR(r.computed(0, 1), -1.0, 1e-8);
  EXPECT_NEAR(r.computed(1, 0), 1.0, 1e-8);
  EXPECT_NEAR(r.computed(0, 2), -1.0, 1e-12);
}

TEST(Magnetic, ZeroChargeRecoversCanonicalForm) {
  const AlgebroidSpec spec = constantMagnetic(3.0);
  const MagneticCheck r = magneticFormCheck(spec, {{0.3, 0.1}, {0.2, -0.5, 0.0}}, 1e-9);
  EXPECT_LE(r.maxDeviation, 1e-10);
  EXPECT_LE(r.computed.block(0, 0, 2, 2).norm(), 1e-10);
}

TEST(Magnetic, VaryingFieldAtRandomPoints) {
  const AlgebroidSpec mag = builderCorpus()[10].spec;
  for (const auto& pt : randomDualPoints(mag, 67, 50)) {
    const MagneticCheck r = magneticFormCheck(mag, pt, 1e-9);
    EXPECT_LE(r.maxDeviation, 1e-8);
    const double b12 = pt.x[0] * pt.x[1] + std::sin(pt.x[1]);
    EXPECT_NEAR(r.expected(0, 1), -pt.xi[2] * b12, 1e-15);
  }
}

TEST(Magnetic, RejectsOtherSpecs) {
  EXPECT_FALSE(isMagneticExtension(tangent(2)));
  EXPECT_FALSE(isMagneticExtension(loadBundled("trivial-gauge-so3").spec));
  EXPECT_TRUE(isMagneticExtension(loadBundled("magnetic2d").spec));
  const AlgebroidSpec t = tangent(2);
  EXPECT_THROW(magneticFormCheck(t, randomDualPoints(t, 1, 1)[0], 1e-9), std::invalid_argument);
}

TEST(FiberBundle, TrivialGaugeOrbitInvariant) {
  const SpecDocument doc = loadBundled("trivial-gauge-so3");
  const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), longTrace());
  EXPECT_LE(fiberBundleCheck(tr, doc.checks.invariants), 1e-6);
  EXPECT_GT(baseSpread(tr), 0.01);
}

TEST(FiberBundle, TrivialActionFixesBaseAndOrbit) {
  const SpecDocument doc = loadBundled("transf-trivial");
  const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), longTrace());
  ASSERT_EQ(doc.checks.invariants.size(), 3u);
  EXPECT_LE(fiberBundleCheck(tr, doc.checks.invariants), 1e-6);
}

TEST(FiberBundle, InjectiveAnchorHasNoInvariants) {
  const SpecDocument doc = loadBundled("dist2in3");
  TraceConfig cfg = longTrace();
  cfg.flowCount = 10;
  const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), cfg);
  EXPECT_EQ(fiberBundleCheck(tr, {}), 0.0);
  EXPECT_EQ(leafDimension(doc.spec, startOf(doc), 1e-9), 4);
  // The distribution is integrable with leaves x3 = x1 x2 + const.
  EXPECT_LE(fiberBundleCheck(tr, doc.checks.invariants), 1e-9);
}

TEST(FiberBundle, NonInvariantSpreads) {
  const SpecDocument doc = loadBundled("so3");
  const LeafTrace tr = traceLeaf(doc.spec, startOf(doc), longTrace());
  EXPECT_GT(fiberBundleCheck(tr, {fiberCoordinate(doc.spec, 2)}), 0.1);
  EXPECT_EQ(fiberBundleCheck(LeafTrace{}, {fiberCoordinate(doc.spec, 2)}), 0.0);
}

TEST(TangentLift, So3LinearBivector) {
  const AlgebroidSpec cot = loadBundled("cotangent-so3").spec;
  const auto pts = randomDualPoints(cot, 71, 50);
  EXPECT_LE(tangentLiftCheck(cot, baseCoordinate(2), pts), 1e-10);
  for (const auto& f : loadBundled("cotangent-so3").checks.testFunctions) EXPECT_LE(tangentLiftCheck(cot, f, pts), 1e-10);
}

TEST(TangentLift, ZeroBivector) {
  const AlgebroidSpec cot = cotangentOfPoisson(defaultCoords(2), std::vector<Expr>(4, Expr(0.0)));
  const auto pts = randomDualPoints(cot, 73, 20);
  const Expr f = parse("x1^2*x2", cot.baseCoords());
  EXPECT_EQ(tangentLiftCheck(cot, f, pts), 0.0);
  for (const auto& p : pts) EXPECT_EQ(hamiltonianVF(cot, pullback(f), p).norm(), 0.0);
}

TEST(TangentLift, CanonicalPlaneWithPositionFunction) {
  // pi^{12} = 1, f = q: X_f = d_p is constant, so the complete lift has no fiber part.
  const AlgebroidSpec cot =
      cotangentOfPoisson({"q", "p"}, {Expr(0.0), Expr(1.0), Expr(-1.0), Expr(0.0)});
  const auto pts = randomDualPoints(cot, 79, 20);
  EXPECT_LE(tangentLiftCheck(cot, baseCoordinate(0), pts), 1e-12);
  for (const auto& p : pts) {
    Section dq{{Expr(1.0), Expr(0.0)}};
    const Vec v = hamiltonianVF(cot, linearFunction(cot, dq), p);
    EXPECT_EQ(v(0), 0.0);
    EXPECT_EQ(v(1), 1.0);
    EXPECT_EQ(v.tail(2).norm(), 0.0);
  }
}

TEST(TangentLift, NonlinearBivectorRandomFunctions) {
  std::mt19937_64 rng(83);
  const AlgebroidSpec cot = builderCorpus()[8].spec;
  const auto pts = randomDualPoints(cot, 89, 30);
  for (int t = 0; t < 5; ++t) EXPECT_LE(tangentLiftCheck(cot, testing::randomPolynomial(rng, 3, 3), pts), 1e-10);
}

TEST(TangentLift, RequiresSquareAnchor) {
  const AlgebroidSpec spec = loadBundled("magnetic2d").spec;
  EXPECT_THROW(tangentLiftCheck(spec, baseCoordinate(0), {}), std::invalid_argument);
}

}  // namespace
}  // namespace lieleaf
