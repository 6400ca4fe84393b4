#include <gtest/gtest.h>

#include "fpovm/frames.hpp"
#include "fpovm/testing/generators.hpp"
#include "fpovm/testing/oracles.hpp"
#include "support.hpp"

using namespace fpovm;
using fpovm::test::e;
using fpovm::test::norm2;

namespace {

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (Complex x : xs) v(i++) = x;
  return v;
}

Frame e1e1e2() { return Frame({"a", "b", "c"}, {e(2, 0), e(2, 0), e(2, 1)}); }

Frame mercedes_benz() {
  const double h = std::sqrt(3.0) / 2.0;
  return Frame({"a", "b", "c"}, {vec({1, 0}), vec({-0.5, h}), vec({-0.5, -h})});
}

FusionFrame fusion_c3() {
  ComplexMatrix w1 = ComplexMatrix::Zero(3, 2);
  w1(0, 0) = 1.0;
  w1(1, 1) = 1.0;
  return FusionFrame(3, {"a", "b"}, {{w1, 1.0}, {e(3, 2), 2.0}});
}

ComplexMatrix diag(std::initializer_list<double> xs) {
  RealVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

}  // namespace

TEST(Frame, ConstructionChecks) {
  EXPECT_THROW(Frame({"a", "b"}, {e(2, 0), ComplexVector::Zero(2)}), Error);
  EXPECT_THROW(Frame({"a", "b"}, {e(2, 0), e(3, 0)}), Error);
  EXPECT_THROW(Frame({"a"}, {e(2, 0), e(2, 1)}), Error);
  // labels are sorted together with their vectors
  const Frame f({"z", "a"}, {e(2, 0), e(2, 1)});
  EXPECT_EQ(f.space().label(0), "a");
  EXPECT_LE((f.vector(0) - e(2, 1)).norm(), 0.0);
}

TEST(FrameOperator, Examples) {
  EXPECT_LE(norm2(frame_operator(Frame({e(2, 0), e(2, 1)})).matrix() - test::identity(2)), 1e-12);
  EXPECT_LE(norm2(frame_operator(e1e1e2()).matrix() - diag({2, 1})), 1e-12);
  EXPECT_LE(norm2(frame_operator(fusion_c3()).matrix() - diag({1, 1, 4})), 1e-12);
}

TEST(FrameOperator, MatchesBruteForce) {
  fpovm::testing::InstanceGenerator gen({.seed = 31});
  for (int i = 0; i < 30; ++i) {
    const Frame f = gen.frame();
    EXPECT_LE(norm2(frame_operator(f).matrix() - fpovm::testing::brute_force_frame_operator(f)), 1e-10 * f.size());
    const FusionFrame ff = gen.fusion_frame();
    EXPECT_LE(norm2(frame_operator(ff).matrix() - fpovm::testing::brute_force_frame_operator(ff)), 1e-10 * ff.size() * 4);
    const SampledGeneralizedFrame g = gen.sampled_frame();
    EXPECT_LE(norm2(frame_operator(g).matrix() - fpovm::testing::brute_force_frame_operator(g)), 1e-10 * g.size());
  }
}

TEST(FrameBounds, Examples) {
  auto b = frame_bounds(Frame({e(2, 0), e(2, 1)}));
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  b = frame_bounds(mercedes_benz());
  EXPECT_NEAR(b.lower, 1.5, 1e-12);
  EXPECT_NEAR(b.upper, 1.5, 1e-12);
  EXPECT_TRUE(b.tight());
  b = frame_bounds(e1e1e2());
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 2.0, 1e-12);
  EXPECT_FALSE(b.tight());
}

TEST(FrameBounds, NotAFrame) {
  try {
    frame_bounds(Frame({e(2, 0), 2.0 * e(2, 0)}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::not_a_frame);
  }
  EXPECT_THROW(canonical_dual(Frame({e(2, 0), 2.0 * e(2, 0)})), Error);
}

TEST(FrameBounds, SampledTightExample) {
  const SampledGeneralizedFrame g({"s", "t"}, {0.5, 0.5}, {e(2, 0), e(2, 1)});
  const auto b = frame_bounds(g);
  EXPECT_NEAR(b.lower, 0.5, 1e-12);
  EXPECT_NEAR(b.upper, 0.5, 1e-12);
  EXPECT_THROW(SampledGeneralizedFrame({"s"}, {-1.0}, {e(2, 0)}), Error);
}

TEST(Analyze, Examples) {
  const ComplexVector f = vec({3, 4});
  EXPECT_LE((analyze(Frame({e(2, 0), e(2, 1)}), f) - vec({3, 4})).norm(), 1e-12);
  EXPECT_LE((analyze(e1e1e2(), vec({1, 2})) - vec({1, 1, 2})).norm(), 1e-12);
  const auto ch = analyze(fusion_c3(), vec({1, 1, 1}));
  ASSERT_EQ(ch.size(), 2u);
  EXPECT_LE((ch[0] - vec({1, 1, 0})).norm(), 1e-12);
  EXPECT_LE((ch[1] - vec({0, 0, 2})).norm(), 1e-12);
  EXPECT_THROW(analyze(e1e1e2(), vec({1, 2, 3})), Error);
}

TEST(Analyze, ConjugateLinearInFrameVector) {
  const Frame f({vec({Complex(0, 1), 0}), e(2, 1)});
  // <i e1, e1> = -i
  EXPECT_LE(std::abs(analyze(f, e(2, 0))(0) - Complex(0, -1)), 1e-15);
}

TEST(Synthesize, Examples) {
  EXPECT_LE((synthesize(Frame({e(2, 0), e(2, 1)}), vec({3, 4})) - vec({3, 4})).norm(), 1e-12);
  EXPECT_LE((synthesize(e1e1e2(), vec({1, 1, 2})) - vec({2, 2})).norm(), 1e-12);
  EXPECT_LE((synthesize(fusion_c3(), {vec({1, 1, 0}), vec({0, 0, 1})}) - vec({1, 1, 2})).norm(), 1e-12);
  EXPECT_THROW(synthesize(e1e1e2(), vec({1, 1})), Error);
  EXPECT_THROW(synthesize(fusion_c3(), {vec({1, 1, 0})}), Error);
}

TEST(Synthesize, AdjointOfAnalyze) {
  fpovm::testing::InstanceGenerator gen({.seed = 32});
  for (int i = 0; i < 50; ++i) {
    const Frame fr = gen.frame();
    const ComplexVector f = gen.vector(fr.dim());
    const ComplexVector c = gen.vector(static_cast<Index>(fr.size()));
    const Complex lhs = synthesize(fr, c).dot(f);
    const Complex rhs = c.dot(analyze(fr, f));
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));

    const FusionFrame ff = gen.fusion_frame();
    const ComplexVector g = gen.vector(ff.dim());
    std::vector<ComplexVector> xi;
    for (std::size_t k = 0; k < ff.size(); ++k) xi.push_back(gen.vector(ff.dim()));
    const auto an = analyze(ff, g);
    // adjointness needs channels inside W_k
    std::vector<ComplexVector> proj;
    for (std::size_t k = 0; k < ff.size(); ++k) proj.push_back(ff.projection(k) * xi[k]);
    Complex rhs3 = 0.0;
    for (std::size_t k = 0; k < ff.size(); ++k) rhs3 += proj[k].dot(an[k]);
    const Complex lhs2 = synthesize(ff, proj).dot(g);
    EXPECT_LE(std::abs(lhs2 - rhs3), 1e-10 * std::max(1.0, std::abs(lhs2)));
  }
}

TEST(CanonicalDual, Examples) {
  const Frame onb({e(2, 0), e(2, 1)});
  EXPECT_LE(norm2(canonical_dual(onb).vectors() - onb.vectors()), 1e-12);
  const Frame d = canonical_dual(e1e1e2());
  EXPECT_LE((d.vector(0) - 0.5 * e(2, 0)).norm(), 1e-12);
  EXPECT_LE((d.vector(1) - 0.5 * e(2, 0)).norm(), 1e-12);
  EXPECT_LE((d.vector(2) - e(2, 1)).norm(), 1e-12);
  const Frame mb = mercedes_benz();
  EXPECT_LE(norm2(canonical_dual(mb).vectors() - mb.vectors() / 1.5), 1e-12);
}

TEST(CanonicalDual, MatchesOracle) {
  fpovm::testing::InstanceGenerator gen({.seed = 33});
  for (int i = 0; i < 50; ++i) {
    const Frame f = gen.frame();
    const Frame d = canonical_dual(f);
    const auto oracle = fpovm::testing::oracle_dual_frame(f);
    for (std::size_t k = 0; k < f.size(); ++k) EXPECT_LE((d.vector(k) - oracle[k]).norm(), 1e-9 * (1.0 + oracle[k].norm()));
  }
}

TEST(CanonicalDual, ReconstructionBothOrders) {
  fpovm::testing::InstanceGenerator gen({.seed = 34});
  for (int i = 0; i < 200; ++i) {
    const Frame fr = gen.frame();
    const Frame du = canonical_dual(fr);
    const ComplexVector f = gen.vector(fr.dim());
    EXPECT_LE((synthesize(du, analyze(fr, f)) - f).norm(), 1e-8 * f.norm());
    EXPECT_LE((synthesize(fr, analyze(du, f)) - f).norm(), 1e-8 * f.norm());
  }
}

TEST(CanonicalDual, FusionDualSubspaces) {
  const FusionFrame ff = fusion_c3();
  const FusionFrame d = canonical_dual(ff);
  // F^{-1} = diag(1,1,1/4) maps each W_k onto itself
  for (std::size_t k = 0; k < ff.size(); ++k) {
    EXPECT_LE(norm2(d.projection(k) - ff.projection(k)), 1e-12);
    EXPECT_EQ(d.member(k).weight, ff.member(k).weight);
  }
  fpovm::testing::InstanceGenerator gen({.seed = 35});
  for (int i = 0; i < 30; ++i) {
    const FusionFrame g = gen.fusion_frame();
    const FusionFrame gd = canonical_dual(g);
    const ComplexMatrix sinv = invert_positive(frame_operator(g)).matrix();
    const ComplexVector f = gen.vector(g.dim());
    // f = sum_k w_k^2 P_{S^-1 W_k} S^-1 P_k f
    ComplexVector acc = ComplexVector::Zero(g.dim());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double w = g.member(k).weight;
      acc += w * w * gd.projection(k) * sinv * g.projection(k) * f;
    }
    EXPECT_LE((acc - f).norm(), 1e-8 * f.norm());
  }
}

TEST(FrameInequality, RandomVectors) {
  fpovm::testing::InstanceGenerator gen({.seed = 36});
  for (int i = 0; i < 20; ++i) {
    const Frame fr = gen.frame();
    const auto b = frame_bounds(fr);
    for (int j = 0; j < 100; ++j) {
      const ComplexVector f = gen.vector(fr.dim());
      const double energy = analyze(fr, f).squaredNorm();
      const double n2 = f.squaredNorm();
      EXPECT_GE(energy, b.lower * n2 * (1.0 - 1e-9));
      EXPECT_LE(energy, b.upper * n2 * (1.0 + 1e-9));
    }
  }
}

TEST(FrameInequality, WeightedProjectionReformulation) {
  fpovm::testing::InstanceGenerator gen({.seed = 37});
  for (int i = 0; i < 30; ++i) {
    const Frame fr = gen.frame();
    const FusionFrame ff = to_fusion_frame(fr);
    const ComplexVector f = gen.vector(fr.dim());
    const ComplexVector c = analyze(fr, f);
    for (std::size_t k = 0; k < fr.size(); ++k) {
      const double lhs = std::abs(c(static_cast<Index>(k)));
      const double rhs = fr.vector(k).norm() * (ff.projection(k) * f).norm();
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, lhs));
      EXPECT_NEAR(ff.member(k).weight, fr.vector(k).norm(), 1e-15 * fr.vector(k).norm() * 4);
    }
    EXPECT_LE(norm2(frame_operator(ff).matrix() - frame_operator(fr).matrix()), 1e-10 * fr.size());
  }
}

TEST(FusionFrame, IngestionChecks) {
  ComplexMatrix b(2, 2);
  b << 1, 1, 0, 1;  // independent, not orthonormal
  const FusionFrame ff(2, {"a"}, {{b, 1.0}});
  EXPECT_TRUE(has_orthonormal_columns(ff.member(0).basis));
  EXPECT_LE(norm2(ff.projection(0) - test::identity(2)), 1e-12);
  EXPECT_THROW(FusionFrame(2, {"a"}, {{e(2, 0), -1.0}}), Error);
  EXPECT_THROW(FusionFrame(2, {"a"}, {{ComplexMatrix::Zero(2, 3), 1.0}}), Error);
  ComplexMatrix dep(2, 2);
  dep << 1, 2, 0, 0;
  EXPECT_THROW(FusionFrame(2, {"a"}, {{dep, 1.0}}), Error);
}

TEST(Generators, RespectConditioningFloor) {
  fpovm::testing::InstanceGenerator gen({.seed = 38, .min_dim = 2, .max_dim = 8, .max_atoms = 32, .conditioning_floor = 0.2});
  for (int i = 0; i < 30; ++i) {
    EXPECT_GE(frame_bounds(gen.frame()).lower, 0.2);
    EXPECT_GE(frame_bounds(gen.fusion_frame()).lower, 0.2);
    EXPECT_GE(frame_bounds(gen.sampled_frame()).lower, 0.2);
  }
}

TEST(Generators, Deterministic) {
  fpovm::testing::InstanceGenerator a({.seed = 99});
  fpovm::testing::InstanceGenerator b({.seed = 99});
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.frame().vectors(), b.frame().vectors());
}
