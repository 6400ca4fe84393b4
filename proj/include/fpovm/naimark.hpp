#pragma once

// Minimal Naimark dilations M(w) = V S(w) V^* of framed POVMs, realized on
// H# = direct sum of the atom supports, with S({t}) the coordinate projection
// onto block t.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/measure_space.hpp"
#include "fpovm/operator.hpp"
#include "fpovm/povm.hpp"

namespace fpovm {

class NaimarkRepresentation {
 public:
  /// `offsets[t]` and `block_dims[t]` give the H# coordinate range of atom t.
  /// Ranges must be disjoint and cover [0, V.cols()). `block_isometries` is
  /// either empty or holds the support basis used for each block.
  NaimarkRepresentation(DiscreteBorelSpace space, ComplexMatrix v, std::vector<Index> offsets,
                        std::vector<Index> block_dims, std::vector<ComplexMatrix> block_isometries = {})
      : space_(std::move(space)),
        v_(std::move(v)),
        offsets_(std::move(offsets)),
        block_dims_(std::move(block_dims)),
        isometries_(std::move(block_isometries)) {
    const std::size_t n = space_.size();
    if (offsets_.size() != n || block_dims_.size() != n) {
      throw Error(ErrorKind::dimension_mismatch, "naimark: one block per atom required");
    }
    if (!isometries_.empty() && isometries_.size() != n) {
      throw Error(ErrorKind::dimension_mismatch, "naimark: one block isometry per atom required");
    }
    if (v_.rows() < 1) throw Error(ErrorKind::dimension_mismatch, "naimark: dim must be >= 1");
    if (!all_finite(v_)) throw Error(ErrorKind::validation, "finite: V has non-finite entries");
    std::vector<int> owner(static_cast<std::size_t>(v_.cols()), -1);
    for (std::size_t t = 0; t < n; ++t) {
      if (block_dims_[t] < 0 || offsets_[t] < 0 || offsets_[t] + block_dims_[t] > v_.cols()) {
        throw Error(ErrorKind::validation, "blocks: block range exceeds sharp_dim");
      }
      for (Index c = offsets_[t]; c < offsets_[t] + block_dims_[t]; ++c) {
        if (owner[static_cast<std::size_t>(c)] != -1) {
          throw Error(ErrorKind::validation, "blocks: block ranges overlap");
        }
        owner[static_cast<std::size_t>(c)] = static_cast<int>(t);
      }
    }
    if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
      throw Error(ErrorKind::validation, "blocks: block ranges do not cover sharp_dim");
    }
    owner_ = std::move(owner);
  }

  /// Blocks laid out contiguously in canonical atom order.
  static NaimarkRepresentation canonical(DiscreteBorelSpace space, ComplexMatrix v, const std::vector<Index>& block_dims,
                                         std::vector<ComplexMatrix> block_isometries = {}) {
    std::vector<Index> offsets(block_dims.size());
    Index next = 0;
    for (std::size_t t = 0; t < block_dims.size(); ++t) {
      offsets[t] = next;
      next += block_dims[t];
    }
    return NaimarkRepresentation(std::move(space), std::move(v), std::move(offsets), block_dims,
                                 std::move(block_isometries));
  }

  const DiscreteBorelSpace& space() const { return space_; }
  Index dim() const { return v_.rows(); }
  Index sharp_dim() const { return v_.cols(); }
  /// dim x sharp_dim synthesis map.
  const ComplexMatrix& synthesis_map() const { return v_; }
  Index offset(std::size_t t) const { return offsets_[t]; }
  Index block_dim(std::size_t t) const { return block_dims_[t]; }
  const std::vector<Index>& offsets() const { return offsets_; }
  const std::vector<Index>& block_dims() const { return block_dims_; }
  const std::vector<ComplexMatrix>& block_isometries() const { return isometries_; }

  bool has_canonical_layout() const {
    Index next = 0;
    for (std::size_t t = 0; t < offsets_.size(); ++t) {
      if (offsets_[t] != next) return false;
      next += block_dims_[t];
    }
    return true;
  }

  /// Columns of V belonging to atom t.
  ComplexMatrix block(std::size_t t) const { return v_.middleCols(offsets_[t], block_dims_[t]); }

  /// Diagonal of S(e): 1 on coordinates owned by atoms of e, 0 elsewhere.
  RealVector spectral_mask(const Event& e) const {
    require_same_space(space_, e.space());
    RealVector mask(sharp_dim());
    for (Index c = 0; c < sharp_dim(); ++c) mask(c) = e.contains(static_cast<std::size_t>(owner_[static_cast<std::size_t>(c)])) ? 1.0 : 0.0;
    return mask;
  }

  ComplexMatrix spectral_projection(const Event& e) const {
    return spectral_mask(e).cast<Complex>().asDiagonal();
  }

 private:
  DiscreteBorelSpace space_;
  ComplexMatrix v_;
  std::vector<Index> offsets_;
  std::vector<Index> block_dims_;
  std::vector<ComplexMatrix> isometries_;
  std::vector<int> owner_;
};

/// Alternative minimal construction: blocks placed in `order` (a permutation
/// of atom indices) and each support basis right-multiplied by `rotations[t]`.
struct BlockLayout {
  std::vector<std::size_t> order;
  std::vector<ComplexMatrix> rotations;
};

namespace detail {

struct AtomFactor {
  ComplexMatrix support;  // Q_t
  ComplexMatrix factor;   // V_t = sqrt(M_t) Q_t
};

inline AtomFactor factor_atom(const PositiveOperator& m, const Tolerances& tol) {
  const ComplexMatrix& a = m.matrix();
  if (hermiticity_residual(a) > tol.herm * std::max(1.0, a.norm())) {
    throw Error(ErrorKind::invalid_povm, "effect is not Hermitian");
  }
  const Eigenpairs e = hermitian_eigen(a, tol.rank);
  const double lmin = e.values(e.values.size() - 1);
  const double scale = std::max(1.0, std::max(std::abs(e.values(0)), std::abs(lmin)));
  if (lmin < -tol.psd * scale) throw Error(ErrorKind::invalid_povm, "effect is not positive semidefinite");
  const Index r = numerical_rank(e.values, tol);
  AtomFactor out;
  out.support = e.vectors.leftCols(r);
  // sqrt(M) Q = Q diag(sqrt(lambda)) on the support.
  RealVector roots = e.values.head(r).cwiseSqrt();
  out.factor = out.support * roots.asDiagonal();
  return out;
}

}  // namespace detail

inline NaimarkRepresentation minimal_dilation(const FramedPOVM& m, const Tolerances& tol = {},
                                              const std::optional<BlockLayout>& layout = std::nullopt) {
  const std::size_t n = m.size();
  std::vector<detail::AtomFactor> factors;
  factors.reserve(n);
  for (std::size_t t = 0; t < n; ++t) factors.push_back(detail::factor_atom(m.atom_effect(t), tol));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (layout) {
    if (!layout->order.empty()) {
      std::vector<std::size_t> check = layout->order;
      std::sort(check.begin(), check.end());
      if (check != order) throw Error(ErrorKind::validation, "layout: block order is not a permutation");
      order = layout->order;
    }
    if (!layout->rotations.empty()) {
      if (layout->rotations.size() != n) throw Error(ErrorKind::dimension_mismatch, "layout: one rotation per atom");
      for (std::size_t t = 0; t < n; ++t) {
        const ComplexMatrix& w = layout->rotations[t];
        if (w.rows() != factors[t].support.cols() || !(w.size() == 0 || is_unitary(w, tol))) {
          throw Error(ErrorKind::invalid_isometry, "layout: block rotation must be a unitary of the block size");
        }
        factors[t].support = factors[t].support * w;
        factors[t].factor = factors[t].factor * w;
      }
    }
  }

  std::vector<Index> dims(n), offsets(n);
  Index sharp = 0;
  for (std::size_t t : order) {
    offsets[t] = sharp;
    dims[t] = factors[t].support.cols();
    sharp += dims[t];
  }
  if (sharp == 0) throw Error(ErrorKind::invalid_povm, "all effects vanish; H# would be trivial");
  ComplexMatrix v(m.dim(), sharp);
  std::vector<ComplexMatrix> isometries;
  isometries.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    v.middleCols(offsets[t], dims[t]) = factors[t].factor;
    isometries.push_back(std::move(factors[t].support));
  }
  return NaimarkRepresentation(m.space(), std::move(v), std::move(offsets), std::move(dims), std::move(isometries));
}

/// Recovers M({t}) = V S({t}) V^* = V_t V_t^*.
inline FramedPOVM povm_from_representation(const NaimarkRepresentation& rep) {
  std::vector<PositiveOperator> effects;
  effects.reserve(rep.space().size());
  for (std::size_t t = 0; t < rep.space().size(); ++t) {
    const ComplexMatrix b = rep.block(t);
    effects.push_back(PositiveOperator::trusted(b * b.adjoint()));
  }
  return FramedPOVM(rep.space(), std::move(effects));
}

struct DilationReport {
  double scale = 1.0;               ///< max(1, ||M(Omega)||_2)
  double max_atom_residual = 0.0;   ///< max_t ||M({t}) - V S({t}) V^*||_2
  double total_residual = 0.0;      ///< ||M(Omega) - V V^*||_2
  double gram_lower = 0.0;          ///< lambda_min(V V^*)
  double gram_upper = 0.0;          ///< lambda_max(V V^*)
  double bounds_residual = 0.0;     ///< distance of (gram_lower, gram_upper) from the POVM bounds
  double spectral_residual = 0.0;   ///< projection / orthogonality / completeness of S on atoms
  std::optional<double> tight_residual;  ///< ||V V^* - A 1||_2 when M is tight
  bool ok = false;
};

inline DilationReport verify_dilation(const FramedPOVM& m, const NaimarkRepresentation& rep,
                                      const Tolerances& tol = {}) {
  require_same_space(m.space(), rep.space());
  detail::require_dim(m.dim(), rep.dim(), "naimark dim");
  DilationReport r;
  const ComplexMatrix total = total_effect(m).matrix();
  r.scale = std::max(1.0, operator_norm(total));
  const ComplexMatrix& v = rep.synthesis_map();
  for (std::size_t t = 0; t < m.size(); ++t) {
    const ComplexMatrix b = rep.block(t);
    r.max_atom_residual = std::max(r.max_atom_residual, operator_norm(m.atom_effect(t).matrix() - b * b.adjoint()));
  }
  const ComplexMatrix gram = v * v.adjoint();
  r.total_residual = operator_norm(total - gram);
  const LoewnerBounds gb = loewner_bounds(PositiveOperator::trusted(gram));
  r.gram_lower = gb.lower;
  r.gram_upper = gb.upper;

  // S restricted to atoms: diagonal 0/1 masks, pairwise disjoint, summing to 1.
  RealVector cover = RealVector::Zero(rep.sharp_dim());
  for (std::size_t t = 0; t < m.size(); ++t) {
    const RealVector mask = rep.spectral_mask(Event::atom(rep.space(), t));
    r.spectral_residual = std::max(r.spectral_residual, (mask.cwiseProduct(mask) - mask).cwiseAbs().maxCoeff());
    cover += mask;
  }
  if (rep.sharp_dim() > 0) {
    r.spectral_residual = std::max(r.spectral_residual, (cover - RealVector::Ones(rep.sharp_dim())).cwiseAbs().maxCoeff());
  }

  const PovmReport pr = validate(m, tol);
  const double limit = tol.dil * r.scale;
  bool bounds_ok = false;
  if (pr.bounds) {
    r.bounds_residual = std::max(std::abs(gb.lower - pr.bounds->lower), std::abs(gb.upper - pr.bounds->upper));
    bounds_ok = r.bounds_residual <= limit;
    if (pr.tight) {
      r.tight_residual =
          operator_norm(gram - pr.bounds->lower * ComplexMatrix::Identity(m.dim(), m.dim()));
      bounds_ok = bounds_ok && *r.tight_residual <= limit;
    }
  }
  r.ok = r.max_atom_residual <= limit && r.total_residual <= limit && r.spectral_residual == 0.0 &&
         (bounds_ok || !pr.framed);
  return r;
}

/// Minimal iff every block of V^* has full row rank, i.e. {S(w) V^* f} spans H#.
inline bool check_minimality(const NaimarkRepresentation& rep, const Tolerances& tol = {}) {
  for (std::size_t t = 0; t < rep.space().size(); ++t) {
    const Index r = rep.block_dim(t);
    if (r == 0) continue;
    Eigen::JacobiSVD<ComplexMatrix> svd(rep.block(t));
    const RealVector& s = svd.singularValues();
    if (s.size() < r || !(s(0) > 0.0) || s(r - 1) <= tol.rank * s(0)) return false;
  }
  return true;
}

/// H#-valued measure stored by atom; event values are sums over member atoms.
class VectorValuedMeasure {
 public:
  VectorValuedMeasure(DiscreteBorelSpace space, std::vector<ComplexVector> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
      throw Error(ErrorKind::dimension_mismatch, "vector measure needs one value per atom");
    }
    for (const auto& v : values_) detail::require_dim(values_.front().size(), v.size(), "vector measure value");
  }

  const DiscreteBorelSpace& space() const { return space_; }
  Index value_dim() const { return values_.front().size(); }
  const ComplexVector& value(std::size_t t) const { return values_[t]; }
  const std::vector<ComplexVector>& values() const { return values_; }

  ComplexVector at(const Event& e) const {
    require_same_space(space_, e.space());
    ComplexVector sum = ComplexVector::Zero(value_dim());
    for (std::size_t t = 0; t < values_.size(); ++t) {
      if (e.contains(t)) sum += values_[t];
    }
    return sum;
  }

 private:
  DiscreteBorelSpace space_;
  std::vector<ComplexVector> values_;
};

/// A(f)({t}) = S({t}) V^* f.
inline VectorValuedMeasure analysis_measure(const NaimarkRepresentation& rep, const ComplexVector& f) {
  detail::require_dim(rep.dim(), f.size(), "analyzed vector");
  const ComplexVector coeffs = rep.synthesis_map().adjoint() * f;
  std::vector<ComplexVector> values;
  values.reserve(rep.space().size());
  for (std::size_t t = 0; t < rep.space().size(); ++t) {
    ComplexVector v = ComplexVector::Zero(rep.sharp_dim());
    v.segment(rep.offset(t), rep.block_dim(t)) = coeffs.segment(rep.offset(t), rep.block_dim(t));
    values.push_back(std::move(v));
  }
  return VectorValuedMeasure(rep.space(), std::move(values));
}

/// S(rho) = V rho(Omega).
inline ComplexVector synthesize_measure(const NaimarkRepresentation& rep, const VectorValuedMeasure& rho) {
  require_same_space(rep.space(), rho.space());
  detail::require_dim(rep.sharp_dim(), rho.value_dim(), "vector measure value");
  return rep.synthesis_map() * rho.at(Event::whole(rho.space()));
}

/// Unitary U#: H#_1 -> H#_2 with U V_1 = V_2 U# and U# S_1 U#^* = S_2, built
/// blockwise as pinv(V_2t) U V_1t. Both representations must be minimal
/// dilations of unitarily equivalent POVMs.
inline ComplexMatrix intertwiner(const NaimarkRepresentation& rep1, const NaimarkRepresentation& rep2,
                                 const ComplexMatrix& u, const Tolerances& tol = {}) {
  require_same_space(rep1.space(), rep2.space());
  detail::require_dim(rep1.dim(), u.cols(), "unitary");
  detail::require_dim(rep2.dim(), u.rows(), "unitary");
  if (rep1.sharp_dim() != rep2.sharp_dim()) {
    throw Error(ErrorKind::invalid_isometry, "auxiliary spaces differ in dimension");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rep2.sharp_dim(), rep1.sharp_dim());
  for (std::size_t t = 0; t < rep1.space().size(); ++t) {
    if (rep1.block_dim(t) != rep2.block_dim(t)) {
      throw Error(ErrorKind::invalid_isometry, "block dimensions differ at atom '" + rep1.space().label(t) + "'");
    }
    if (rep1.block_dim(t) == 0) continue;
    out.block(rep2.offset(t), rep1.offset(t), rep2.block_dim(t), rep1.block_dim(t)) =
        pseudo_inverse(rep2.block(t), tol) * u * rep1.block(t);
  }
  return out;
}

struct TransportResult {
  FramedPOVM transported;
  NaimarkRepresentation source_rep;
  NaimarkRepresentation target_rep;
  ComplexMatrix sharp_unitary;
  double conjugation_residual = 0.0;  ///< max_t ||U# S_1({t}) U#^* - S_2({t})||_2
  double diagram_residual = 0.0;      ///< ||U V_1 - V_2 U#||_2
  double unitarity_residual = 0.0;    ///< ||U#^* U# - 1||_2
};

/// Transports M1 (with a given minimal representation) to U M1 U^*.
inline TransportResult transport(const ComplexMatrix& u, const FramedPOVM& m1, const NaimarkRepresentation& rep1,
                                 const Tolerances& tol = {}) {
  detail::require_dim(m1.dim(), u.rows(), "unitary");
  if (!is_unitary(u, tol)) throw Error(ErrorKind::invalid_isometry, "supplied matrix is not unitary");
  std::vector<PositiveOperator> effects;
  effects.reserve(m1.size());
  for (const auto& e : m1.effects()) effects.push_back(PositiveOperator::trusted(u * e.matrix() * u.adjoint()));
  FramedPOVM m2(m1.space(), std::move(effects));
  NaimarkRepresentation rep2 = minimal_dilation(m2, tol);
  ComplexMatrix us = intertwiner(rep1, rep2, u, tol);

  double conj = 0.0;
  for (std::size_t t = 0; t < m1.size(); ++t) {
    const Event atom = Event::atom(m1.space(), t);
    conj = std::max(conj, operator_norm(us * rep1.spectral_projection(atom) * us.adjoint() -
                                        rep2.spectral_projection(atom)));
  }
  const double diagram = operator_norm(u * rep1.synthesis_map() - rep2.synthesis_map() * us);
  const double unitary =
      operator_norm(us.adjoint() * us - ComplexMatrix::Identity(us.cols(), us.cols()));
  return {std::move(m2), rep1, std::move(rep2), std::move(us), conj, diagram, unitary};
}

inline TransportResult transport(const ComplexMatrix& u, const FramedPOVM& m1, const Tolerances& tol = {}) {
  return transport(u, m1, minimal_dilation(m1, tol), tol);
}

}  // namespace fpovm
