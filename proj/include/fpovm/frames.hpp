#pragma once

// Frames, fusion frames and sampled generalized frames, with their analysis,
// synthesis and canonical dual machinery.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/measure_space.hpp"
#include "fpovm/operator.hpp"

namespace fpovm {

namespace detail {

inline void require_dim(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorKind::dimension_mismatch, std::string(what) + ": expected dimension " +
                                                   std::to_string(expected) + ", got " +
                                                   std::to_string(actual));
  }
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw Error(ErrorKind::validation, std::string("finite: ") + what + " has non-finite entries");
}

}  // namespace detail

/// Family of nonzero vectors in C^dim indexed by atoms. Column k of vectors()
/// belongs to atom k in canonical order.
class Frame {
 public:
  Frame(std::vector<std::string> labels, const std::vector<ComplexVector>& vectors)
      : space_(labels) {
    if (labels.size() != vectors.size()) {
      throw Error(ErrorKind::dimension_mismatch, "frame needs one vector per atom");
    }
    const Index dim = vectors.front().size();
    if (dim < 1) throw Error(ErrorKind::dimension_mismatch, "frame dimension must be >= 1");
    const auto perm = canonical_order(labels);
    vectors_.resize(dim, static_cast<Index>(vectors.size()));
    for (std::size_t k = 0; k < perm.size(); ++k) {
      const ComplexVector& v = vectors[perm[k]];
      detail::require_dim(dim, v.size(), "frame vector");
      detail::require_finite(v, "frame vector");
      if (!(v.norm() > 0.0)) throw Error(ErrorKind::validation, "nonzero vector: frame vectors must be nonzero");
      vectors_.col(static_cast<Index>(k)) = v;
    }
  }

  explicit Frame(const std::vector<ComplexVector>& vectors)
      : Frame(DiscreteBorelSpace::default_labels(vectors.size()), vectors) {}

  const DiscreteBorelSpace& space() const { return space_; }
  Index dim() const { return vectors_.rows(); }
  std::size_t size() const { return space_.size(); }
  ComplexVector vector(std::size_t k) const { return vectors_.col(static_cast<Index>(k)); }
  /// dim x size matrix of frame vectors; also the synthesis operator.
  const ComplexMatrix& vectors() const { return vectors_; }

 private:
  DiscreteBorelSpace space_;
  ComplexMatrix vectors_;
};

struct FusionMember {
  ComplexMatrix basis;  ///< dim x r, orthonormal columns after ingestion
  double weight = 0.0;
};

/// Weighted family of subspaces of C^dim. Bases with merely independent
/// columns are orthonormalized by Gram-Schmidt on construction; bases that are
/// already orthonormal are stored verbatim.
class FusionFrame {
 public:
  FusionFrame(Index dim, std::vector<std::string> labels, const std::vector<FusionMember>& members,
              const Tolerances& tol = {})
      : space_(labels) {
    if (labels.size() != members.size()) {
      throw Error(ErrorKind::dimension_mismatch, "fusion frame needs one member per atom");
    }
    if (dim < 1) throw Error(ErrorKind::dimension_mismatch, "fusion frame dimension must be >= 1");
    const auto perm = canonical_order(labels);
    members_.reserve(members.size());
    for (std::size_t idx : perm) {
      const FusionMember& m = members[idx];
      if (!std::isfinite(m.weight) || m.weight < 0.0) {
        throw Error(ErrorKind::validation, "nonnegative weight: fusion weights must be finite and >= 0");
      }
      detail::require_dim(dim, m.basis.rows(), "fusion subspace basis");
      detail::require_finite(m.basis, "fusion subspace basis");
      if (m.basis.cols() < 1 || m.basis.cols() > dim) {
        throw Error(ErrorKind::validation, "subspace basis: column count must lie in [1, dim]");
      }
      FusionMember stored{m.basis, m.weight};
      if (!has_orthonormal_columns(stored.basis, tol)) stored.basis = orthonormalize_columns(stored.basis, tol);
      members_.push_back(std::move(stored));
    }
    dim_ = dim;
  }

  const DiscreteBorelSpace& space() const { return space_; }
  Index dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  const FusionMember& member(std::size_t k) const { return members_[k]; }
  const std::vector<FusionMember>& members() const { return members_; }

  /// Orthogonal projection onto W_k.
  ComplexMatrix projection(std::size_t k) const {
    const ComplexMatrix& b = members_[k].basis;
    return b * b.adjoint();
  }

 private:
  DiscreteBorelSpace space_;
  Index dim_ = 0;
  std::vector<FusionMember> members_;
};

/// A generalized frame sampled at finitely many points t with quadrature
/// weights mu({t}).
class SampledGeneralizedFrame {
 public:
  SampledGeneralizedFrame(std::vector<std::string> labels, const std::vector<double>& mu,
                          const std::vector<ComplexVector>& samples)
      : quadrature_(DiscreteBorelSpace(labels), permuted(labels, mu)) {
    if (labels.size() != samples.size()) {
      throw Error(ErrorKind::dimension_mismatch, "sampled frame needs one sample per atom");
    }
    const Index dim = samples.front().size();
    if (dim < 1) throw Error(ErrorKind::dimension_mismatch, "sample dimension must be >= 1");
    const auto perm = canonical_order(labels);
    samples_.resize(dim, static_cast<Index>(samples.size()));
    for (std::size_t k = 0; k < perm.size(); ++k) {
      detail::require_dim(dim, samples[perm[k]].size(), "sample vector");
      detail::require_finite(samples[perm[k]], "sample vector");
      samples_.col(static_cast<Index>(k)) = samples[perm[k]];
    }
  }

  const DiscreteBorelSpace& space() const { return quadrature_.space(); }
  const ScalarMeasure& quadrature() const { return quadrature_; }
  Index dim() const { return samples_.rows(); }
  std::size_t size() const { return quadrature_.weights().size(); }
  ComplexVector sample(std::size_t k) const { return samples_.col(static_cast<Index>(k)); }
  const ComplexMatrix& samples() const { return samples_; }

 private:
  static std::vector<double> permuted(const std::vector<std::string>& labels, const std::vector<double>& mu) {
    if (labels.size() != mu.size()) {
      throw Error(ErrorKind::dimension_mismatch, "sampled frame needs one quadrature weight per atom");
    }
    std::vector<double> out;
    out.reserve(mu.size());
    for (std::size_t idx : canonical_order(labels)) out.push_back(mu[idx]);
    return out;
  }

  ScalarMeasure quadrature_;
  ComplexMatrix samples_;
};

/// Optimal frame bounds 0 < lower <= upper.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool tight(const Tolerances& tol = {}) const { return std::abs(upper - lower) <= tol.psd * upper; }
};

inline PositiveOperator frame_operator(const Frame& f) {
  return PositiveOperator::trusted(f.vectors() * f.vectors().adjoint());
}

inline PositiveOperator frame_operator(const FusionFrame& f) {
  ComplexMatrix s = ComplexMatrix::Zero(f.dim(), f.dim());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double w = f.member(k).weight;
    s += (w * w) * f.projection(k);
  }
  return PositiveOperator::trusted(std::move(s));
}

/// Discretized generalized frame operator sum_t mu(t) Phi(t) Phi(t)^*.
inline PositiveOperator frame_operator(const SampledGeneralizedFrame& g) {
  ComplexMatrix s = ComplexMatrix::Zero(g.dim(), g.dim());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const ComplexVector phi = g.sample(k);
    s += g.quadrature().weight(k) * (phi * phi.adjoint());
  }
  return PositiveOperator::trusted(std::move(s));
}

/// Extreme eigenvalues of a frame operator; throws not_a_frame when the
/// lower bound vanishes within tol.inv.
inline FrameBounds bounds_of_operator(const PositiveOperator& s, const Tolerances& tol = {}) {
  const LoewnerBounds b = loewner_bounds(s);
  if (!(b.upper > 0.0) || b.lower <= tol.inv * b.upper) {
    throw Error(ErrorKind::not_a_frame, "frame operator is singular (lower frame bound is 0)");
  }
  return {b.lower, b.upper};
}

template <class AnyFrame>
FrameBounds frame_bounds(const AnyFrame& f, const Tolerances& tol = {}) {
  return bounds_of_operator(frame_operator(f), tol);
}

/// Coefficients <phi_k, f>, one per atom.
inline ComplexVector analyze(const Frame& frame, const ComplexVector& f) {
  detail::require_dim(frame.dim(), f.size(), "analyzed vector");
  return frame.vectors().adjoint() * f;
}

/// Channel signals w_k Pi_k f, one per atom.
inline std::vector<ComplexVector> analyze(const FusionFrame& frame, const ComplexVector& f) {
  detail::require_dim(frame.dim(), f.size(), "analyzed vector");
  std::vector<ComplexVector> out;
  out.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const FusionMember& m = frame.member(k);
    out.emplace_back(m.weight * (m.basis * (m.basis.adjoint() * f)));
  }
  return out;
}

inline ComplexVector synthesize(const Frame& frame, const ComplexVector& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != frame.size()) {
    throw Error(ErrorKind::dimension_mismatch, "synthesis needs one coefficient per atom");
  }
  return frame.vectors() * coeffs;
}

inline ComplexVector synthesize(const FusionFrame& frame, const std::vector<ComplexVector>& channels) {
  if (channels.size() != frame.size()) {
    throw Error(ErrorKind::dimension_mismatch, "synthesis needs one channel per atom");
  }
  ComplexVector out = ComplexVector::Zero(frame.dim());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    detail::require_dim(frame.dim(), channels[k].size(), "channel vector");
    out += frame.member(k).weight * channels[k];
  }
  return out;
}

/// Vectors S^{-1} phi_k, same atoms.
inline Frame canonical_dual(const Frame& frame, const Tolerances& tol = {}) {
  const PositiveOperator s = frame_operator(frame);
  bounds_of_operator(s, tol);
  const ComplexMatrix dual = invert_positive(s, tol).matrix() * frame.vectors();
  std::vector<ComplexVector> cols;
  cols.reserve(frame.size());
  for (Index k = 0; k < dual.cols(); ++k) cols.emplace_back(dual.col(k));
  return Frame(frame.space().atoms(), cols);
}

/// Subspaces S^{-1} W_k (re-orthonormalized), same weights.
inline FusionFrame canonical_dual(const FusionFrame& frame, const Tolerances& tol = {}) {
  const PositiveOperator s = frame_operator(frame);
  bounds_of_operator(s, tol);
  const ComplexMatrix inv = invert_positive(s, tol).matrix();
  std::vector<FusionMember> members;
  members.reserve(frame.size());
  for (const FusionMember& m : frame.members()) {
    members.push_back({orthonormalize_columns(inv * m.basis, tol), m.weight});
  }
  return FusionFrame(frame.dim(), frame.space().atoms(), members, tol);
}

/// The frame viewed as a fusion frame of lines W_k = span{phi_k} with
/// weights w_k = ||phi_k||.
inline FusionFrame to_fusion_frame(const Frame& frame, const Tolerances& tol = {}) {
  std::vector<FusionMember> members;
  members.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const ComplexVector phi = frame.vector(k);
    const double w = phi.norm();
    members.push_back({ComplexMatrix(phi / w), w});
  }
  return FusionFrame(frame.dim(), frame.space().atoms(), members, tol);
}

}  // namespace fpovm
