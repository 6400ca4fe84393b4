#include <gtest/gtest.h>

#include "fpovm/povm.hpp"
#include "fpovm/testing/generators.hpp"
#include "fpovm/testing/oracles.hpp"
#include "support.hpp"

using namespace fpovm;
using fpovm::test::e;
using fpovm::test::norm2;

namespace {

ComplexMatrix diag(std::initializer_list<double> xs) {
  RealVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

ComplexVector vec(std::initializer_list<double> xs) {
  ComplexVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Frame e1e1e2() { return Frame({"a", "b", "c"}, {e(2, 0), e(2, 0), e(2, 1)}); }

Frame mercedes_benz(double scale = 1.0) {
  const double h = std::sqrt(3.0) / 2.0;
  return Frame({"a", "b", "c"}, {scale * vec({1, 0}), scale * vec({-0.5, h}), scale * vec({-0.5, -h})});
}

FramedPOVM coordinate_povm() {
  return FramedPOVM::from_labeled({"a", "b"}, {PositiveOperator::checked(diag({1, 0})), PositiveOperator::checked(diag({0, 1}))});
}

}  // namespace

TEST(PovmFromFrame, Examples) {
  const FramedPOVM onb = povm_from_frame(Frame({e(2, 0), e(2, 1)}));
  EXPECT_LE(norm2(onb.atom_effect(0).matrix() - diag({1, 0})), 1e-15);
  EXPECT_LE(norm2(onb.atom_effect(1).matrix() - diag({0, 1})), 1e-15);
  EXPECT_TRUE(validate(onb).probability);

  const FramedPOVM m = povm_from_frame(e1e1e2());
  EXPECT_LE(norm2(m.atom_effect(0).matrix() - diag({1, 0})), 1e-15);
  EXPECT_LE(norm2(m.atom_effect(2).matrix() - diag({0, 1})), 1e-15);
  EXPECT_LE(norm2(total_effect(m).matrix() - diag({2, 1})), 1e-15);

  const PovmReport r = validate(povm_from_frame(mercedes_benz()));
  ASSERT_TRUE(r.bounds);
  EXPECT_TRUE(r.tight);
  EXPECT_FALSE(r.probability);
  EXPECT_NEAR(r.bounds->lower, 1.5, 1e-12);
  EXPECT_NEAR(r.bounds->upper, 1.5, 1e-12);
}

TEST(PovmFromFusionFrame, Examples) {
  const FramedPOVM whole = povm_from_fusion_frame(FusionFrame(2, {"a"}, {{test::identity(2), 1.0}}));
  EXPECT_LE(norm2(whole.atom_effect(0).matrix() - test::identity(2)), 1e-15);

  ComplexMatrix w1 = ComplexMatrix::Zero(3, 2);
  w1(0, 0) = 1.0;
  w1(1, 1) = 1.0;
  const FramedPOVM c3 = povm_from_fusion_frame(FusionFrame(3, {"a", "b"}, {{w1, 1.0}, {e(3, 2), 2.0}}));
  EXPECT_LE(norm2(c3.atom_effect(0).matrix() - diag({1, 1, 0})), 1e-15);
  EXPECT_LE(norm2(c3.atom_effect(1).matrix() - diag({0, 0, 4})), 1e-15);

  const FramedPOVM zero = povm_from_fusion_frame(FusionFrame(2, {"a", "b"}, {{e(2, 0), 0.0}, {e(2, 1), 0.0}}));
  const PovmReport r = validate(zero);
  EXPECT_TRUE(r.is_povm);
  EXPECT_FALSE(r.framed);
  EXPECT_FALSE(r.bounds);
}

TEST(PovmFromSampledFrame, Examples) {
  const FramedPOVM one = povm_from_sampled_generalized_frame(SampledGeneralizedFrame({"t"}, {1.0}, {e(2, 0)}));
  EXPECT_LE(norm2(one.atom_effect(0).matrix() - diag({1, 0})), 1e-15);

  const PovmReport half = validate(povm_from_sampled_generalized_frame(SampledGeneralizedFrame({"s", "t"}, {0.5, 0.5}, {e(2, 0), e(2, 1)})));
  EXPECT_TRUE(half.tight);
  EXPECT_NEAR(half.bounds->lower, 0.5, 1e-12);

  const PovmReport prob = validate(povm_from_sampled_generalized_frame(SampledGeneralizedFrame({"s", "t"}, {1.0, 1.0}, {e(2, 0), e(2, 1)})));
  EXPECT_TRUE(prob.probability);
}

TEST(Effect, Examples) {
  const FramedPOVM m = povm_from_frame(e1e1e2());
  EXPECT_LE(norm2(effect(m, Event::empty(m.space())).matrix()), 0.0);
  EXPECT_LE(norm2(effect(m, Event::from_labels(m.space(), {"a", "b"})).matrix() - diag({2, 0})), 1e-15);
  EXPECT_THROW(effect(m, Event::whole(DiscreteBorelSpace({"x"}))), Error);
}

TEST(Effect, ExactAdditivityOnDyadicData) {
  fpovm::testing::InstanceGenerator gen({.seed = 41});
  for (int i = 0; i < 10; ++i) {
    const Index d = gen.uniform_index(2, 4);
    const FramedPOVM m = gen.dyadic_povm(d, static_cast<std::size_t>(gen.uniform_index(d, 7)));
    const auto rep = fpovm::testing::exhaustive_event_check(m, fpovm::testing::EventPredicate::additivity);
    EXPECT_EQ(rep.worst_residual, 0.0);
    EXPECT_GT(rep.evaluations, 0u);
  }
}

TEST(Effect, AdditivityWithinRoundoffOnGeneralData) {
  fpovm::testing::InstanceGenerator gen({.seed = 42, .min_dim = 2, .max_dim = 4, .max_atoms = 8});
  for (int i = 0; i < 5; ++i) {
    const FramedPOVM m = gen.povm();
    if (m.size() > 8) continue;
    const auto rep = fpovm::testing::exhaustive_event_check(m, fpovm::testing::EventPredicate::additivity);
    EXPECT_LE(rep.worst_residual, 1e-12 * std::max(1.0, norm2(total_effect(m).matrix())));
  }
}

TEST(Validate, Examples) {
  const PovmReport onb = validate(povm_from_frame(Frame({e(2, 0), e(2, 1)})));
  EXPECT_TRUE(onb.framed);
  EXPECT_TRUE(onb.tight);
  EXPECT_TRUE(onb.probability);
  EXPECT_NEAR(onb.bounds->lower, 1.0, 1e-12);

  const PovmReport r = validate(povm_from_frame(e1e1e2()));
  EXPECT_TRUE(r.framed);
  EXPECT_FALSE(r.tight);
  EXPECT_NEAR(r.bounds->lower, 1.0, 1e-12);
  EXPECT_NEAR(r.bounds->upper, 2.0, 1e-12);

  const FramedPOVM zero(DiscreteBorelSpace({"a"}), {PositiveOperator::zero(2)});
  const PovmReport z = validate(zero);
  EXPECT_TRUE(z.is_povm);
  EXPECT_FALSE(z.framed);
  EXPECT_FALSE(z.tight);
}

TEST(Validate, FlagImplications) {
  fpovm::testing::InstanceGenerator gen({.seed = 43});
  for (int i = 0; i < 60; ++i) {
    const PovmReport r = validate(gen.povm());
    if (r.tight) EXPECT_TRUE(r.framed);
    if (r.probability) EXPECT_TRUE(r.tight);
    if (r.spectral) EXPECT_TRUE(r.probability);
  }
}

TEST(Validate, BoundTransportFromFrames) {
  fpovm::testing::InstanceGenerator gen({.seed = 44});
  for (int i = 0; i < 50; ++i) {
    const Frame f = gen.frame();
    const auto fb = frame_bounds(f);
    const PovmReport r = validate(povm_from_frame(f));
    ASSERT_TRUE(r.bounds);
    EXPECT_NEAR(r.bounds->lower, fb.lower, 1e-10 * fb.upper);
    EXPECT_NEAR(r.bounds->upper, fb.upper, 1e-10 * fb.upper);
    const FusionFrame ff = gen.fusion_frame();
    const auto fb2 = frame_bounds(ff);
    const PovmReport r2 = validate(povm_from_fusion_frame(ff));
    EXPECT_NEAR(r2.bounds->lower, fb2.lower, 1e-10 * fb2.upper);
    EXPECT_NEAR(r2.bounds->upper, fb2.upper, 1e-10 * fb2.upper);
  }
}

TEST(IsSpectral, Examples) {
  EXPECT_TRUE(is_spectral(coordinate_povm()).spectral);
  EXPECT_FALSE(is_spectral(povm_from_frame(e1e1e2())).spectral);
  const FramedPOVM mb = povm_from_frame(mercedes_benz(std::sqrt(2.0 / 3.0)));
  EXPECT_TRUE(validate(mb).probability);
  EXPECT_FALSE(is_spectral(mb).spectral);
  EXPECT_FALSE(validate(mb).spectral);
}

TEST(IsSpectral, AgreesWithExhaustiveMultiplicativity) {
  fpovm::testing::InstanceGenerator gen({.seed = 45, .min_dim = 2, .max_dim = 6});
  for (int i = 0; i < 20; ++i) {
    const Index d = gen.dim();
    const FramedPOVM m = povm_from_frame(gen.orthonormal_basis(d));
    EXPECT_TRUE(is_spectral(m).spectral);
    EXPECT_LE(fpovm::testing::exhaustive_event_check(m, fpovm::testing::EventPredicate::spectral_multiplicativity).worst_residual, 1e-12);
    const PovmReport r = validate(m);
    EXPECT_NEAR(r.bounds->lower, 1.0, 1e-9);
    EXPECT_NEAR(r.bounds->upper, 1.0, 1e-9);
  }
  const FramedPOVM bad = povm_from_frame(e1e1e2());
  const auto rep = fpovm::testing::exhaustive_event_check(bad, fpovm::testing::EventPredicate::spectral_multiplicativity);
  EXPECT_GT(rep.worst_residual, 0.5);
  EXPECT_FALSE(rep.witness_first.empty());
}

TEST(InducedScalarMeasure, Examples) {
  fpovm::testing::InstanceGenerator gen({.seed = 46});
  const FramedPOVM p = povm_from_frame(gen.orthonormal_basis(4));
  ComplexVector f = gen.vector(4);
  f.normalize();
  EXPECT_NEAR(measure_of(induced_scalar_measure(p, f), Event::whole(p.space())), 1.0, 1e-10);

  const ScalarMeasure mu = induced_scalar_measure(povm_from_frame(e1e1e2()), vec({1, 2}));
  EXPECT_NEAR(mu.weight(0), 1.0, 1e-14);
  EXPECT_NEAR(mu.weight(1), 1.0, 1e-14);
  EXPECT_NEAR(mu.weight(2), 4.0, 1e-14);

  const ScalarMeasure z = induced_scalar_measure(p, ComplexVector::Zero(4));
  for (double w : z.weights()) EXPECT_EQ(w, 0.0);
  EXPECT_THROW(induced_scalar_measure(p, ComplexVector::Zero(3)), Error);
}

TEST(InducedScalarMeasure, ConsistentOnAllEvents) {
  fpovm::testing::InstanceGenerator gen({.seed = 47, .min_dim = 2, .max_dim = 5, .max_atoms = 10});
  for (int i = 0; i < 10; ++i) {
    const Index d = gen.dim();
    const Frame f = gen.frame(d, static_cast<std::size_t>(gen.uniform_index(d, 10)));
    const FramedPOVM m = povm_from_frame(f);
    const auto rep = fpovm::testing::exhaustive_event_check(m, fpovm::testing::EventPredicate::measure_additivity, gen.vector(d));
    EXPECT_LE(rep.worst_residual, 1e-10);
    EXPECT_EQ(rep.evaluations, 1u << m.size());
  }
}

TEST(ExhaustiveCheck, RefusesLargeSpaces) {
  fpovm::testing::InstanceGenerator gen({.seed = 48});
  const FramedPOVM m = povm_from_frame(gen.frame(2, 13));
  try {
    fpovm::testing::exhaustive_event_check(m, fpovm::testing::EventPredicate::additivity);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::size_limit);
  }
}
