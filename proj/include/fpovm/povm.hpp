#pragma once

// Framed positive operator-valued measures on finite atom spaces.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/frames.hpp"
#include "fpovm/measure_space.hpp"
#include "fpovm/operator.hpp"

namespace fpovm {

/// One positive effect M({t}) per atom t. Event effects are always recomputed
/// by summation in canonical atom order.
class FramedPOVM {
 public:
  FramedPOVM(DiscreteBorelSpace space, std::vector<PositiveOperator> effects)
      : space_(std::move(space)), effects_(std::move(effects)) {
    if (effects_.size() != space_.size()) {
      throw Error(ErrorKind::dimension_mismatch, "POVM needs one effect per atom");
    }
    for (const auto& e : effects_) detail::require_dim(effects_.front().dim(), e.dim(), "POVM effect");
  }

  /// Builds from (label, effect) pairs in any order.
  static FramedPOVM from_labeled(std::vector<std::string> labels, std::vector<PositiveOperator> effects) {
    if (labels.size() != effects.size()) {
      throw Error(ErrorKind::dimension_mismatch, "POVM needs one effect per atom");
    }
    DiscreteBorelSpace space(labels);
    std::vector<PositiveOperator> sorted;
    sorted.reserve(effects.size());
    for (std::size_t idx : canonical_order(labels)) sorted.push_back(std::move(effects[idx]));
    return FramedPOVM(std::move(space), std::move(sorted));
  }

  const DiscreteBorelSpace& space() const { return space_; }
  Index dim() const { return effects_.front().dim(); }
  std::size_t size() const { return effects_.size(); }
  const PositiveOperator& atom_effect(std::size_t t) const { return effects_[t]; }
  const std::vector<PositiveOperator>& effects() const { return effects_; }

 private:
  DiscreteBorelSpace space_;
  std::vector<PositiveOperator> effects_;
};

inline FramedPOVM povm_from_frame(const Frame& frame) {
  std::vector<PositiveOperator> effects;
  effects.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const ComplexVector phi = frame.vector(k);
    effects.push_back(PositiveOperator::trusted(phi * phi.adjoint()));
  }
  return FramedPOVM(frame.space(), std::move(effects));
}

/// Effects w_k^2 Pi_k, so that M(Omega) is the fusion frame operator.
inline FramedPOVM povm_from_fusion_frame(const FusionFrame& frame) {
  std::vector<PositiveOperator> effects;
  effects.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const double w = frame.member(k).weight;
    effects.push_back(PositiveOperator::trusted((w * w) * frame.projection(k)));
  }
  return FramedPOVM(frame.space(), std::move(effects));
}

/// Effects mu({t}) Phi(t) Phi(t)^*.
inline FramedPOVM povm_from_sampled_generalized_frame(const SampledGeneralizedFrame& g) {
  std::vector<PositiveOperator> effects;
  effects.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const ComplexVector phi = g.sample(k);
    effects.push_back(PositiveOperator::trusted(g.quadrature().weight(k) * (phi * phi.adjoint())));
  }
  return FramedPOVM(g.space(), std::move(effects));
}

inline PositiveOperator effect(const FramedPOVM& m, const Event& e) {
  require_same_space(m.space(), e.space());
  ComplexMatrix sum = ComplexMatrix::Zero(m.dim(), m.dim());
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (e.contains(t)) sum += m.atom_effect(t).matrix();
  }
  return PositiveOperator::trusted(std::move(sum));
}

inline PositiveOperator total_effect(const FramedPOVM& m) { return effect(m, Event::whole(m.space())); }

struct PovmReport {
  bool is_povm = false;
  bool framed = false;
  std::optional<FrameBounds> bounds;
  bool tight = false;
  bool probability = false;
  bool spectral = false;
  std::vector<std::pair<std::string, double>> residuals;
};

struct SpectralCheck {
  bool spectral = false;
  double residual = 0.0;  ///< worst of idempotency, orthogonality and ||M(Omega) - 1||
};

/// Finite-atom criterion: projection-valued atoms, pairwise orthogonal, summing to 1.
inline SpectralCheck is_spectral(const FramedPOVM& m, const Tolerances& tol = {}) {
  double worst = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    const ComplexMatrix& a = m.atom_effect(s).matrix();
    worst = std::max(worst, operator_norm(a * a - a));
    for (std::size_t t = s + 1; t < m.size(); ++t) {
      worst = std::max(worst, operator_norm(a * m.atom_effect(t).matrix()));
    }
  }
  const ComplexMatrix total = total_effect(m).matrix();
  worst = std::max(worst, operator_norm(total - ComplexMatrix::Identity(m.dim(), m.dim())));
  return {worst <= tol.proj, worst};
}

inline PovmReport validate(const FramedPOVM& m, const Tolerances& tol = {}) {
  PovmReport r;
  double worst_neg = 0.0;
  double worst_herm = 0.0;
  r.is_povm = true;
  for (const auto& e : m.effects()) {
    const ComplexMatrix& a = e.matrix();
    const double herm = hermiticity_residual(a) / std::max(1.0, a.norm());
    const RealVector ev = hermitian_eigenvalues(a);
    const double scale = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))));
    const double neg = std::max(0.0, -ev(0)) / scale;
    worst_herm = std::max(worst_herm, herm);
    worst_neg = std::max(worst_neg, neg);
    if (herm > tol.herm || neg > tol.psd) r.is_povm = false;
  }
  const LoewnerBounds lb = loewner_bounds(total_effect(m));
  r.framed = r.is_povm && lb.upper > 0.0 && lb.lower > tol.inv * lb.upper;
  if (r.framed) {
    r.bounds = FrameBounds{lb.lower, lb.upper};
    r.tight = r.bounds->tight(tol);
    r.probability = r.tight && std::abs(lb.lower - 1.0) <= tol.psd;
  }
  const SpectralCheck sc = is_spectral(m, tol);
  r.spectral = r.is_povm && sc.spectral;
  r.residuals = {{"hermiticity", worst_herm},
                 {"negativity", worst_neg},
                 {"lambda_min", lb.lower},
                 {"lambda_max", lb.upper},
                 {"spectral", sc.residual}};
  return r;
}

/// mu_f({t}) = <f, M({t}) f>, with round-off negatives clipped to 0.
inline ScalarMeasure induced_scalar_measure(const FramedPOVM& m, const ComplexVector& f) {
  detail::require_dim(m.dim(), f.size(), "measured vector");
  std::vector<double> w(m.size());
  for (std::size_t t = 0; t < m.size(); ++t) {
    w[t] = std::max(0.0, f.dot(m.atom_effect(t).matrix() * f).real());
  }
  return ScalarMeasure(m.space(), std::move(w));
}

}  // namespace fpovm
