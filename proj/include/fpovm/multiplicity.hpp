#pragma once

// Canonical decomposition of a framed POVM into uniform-multiplicity parts:
// atoms are grouped by the dimension of their block in the minimal dilation.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/naimark.hpp"
#include "fpovm/povm.hpp"

namespace fpovm {

struct MultiplicityComponent {
  Index multiplicity = 0;                 ///< common block dimension n
  std::vector<std::size_t> atom_support;  ///< atoms whose block has dimension n
  std::vector<Index> coordinates;         ///< G_n as H# coordinate indices
  ComplexMatrix projection;               ///< P_n on H#
  ComplexMatrix synthesis;                ///< V_n = V P_n
  FramedPOVM effects;                     ///< M_n({t}) = V_n S({t}) V_n^*, zero off the support
  ScalarMeasure base;                     ///< counting measure on atom_support
};

struct MultiplicityDecomposition {
  NaimarkRepresentation rep;
  std::vector<MultiplicityComponent> components;  ///< ascending multiplicity
  std::vector<std::size_t> zero_atoms;            ///< atoms with vanishing effect
};

inline MultiplicityDecomposition decompose(const FramedPOVM& m, const Tolerances& tol = {}) {
  NaimarkRepresentation rep = minimal_dilation(m, tol);
  std::map<Index, std::vector<std::size_t>> groups;
  std::vector<std::size_t> zero_atoms;
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (rep.block_dim(t) == 0) {
      zero_atoms.push_back(t);
    } else {
      groups[rep.block_dim(t)].push_back(t);
    }
  }

  std::vector<MultiplicityComponent> components;
  for (auto& [n, atoms] : groups) {
    RealVector mask = RealVector::Zero(rep.sharp_dim());
    std::vector<Index> coords;
    std::vector<double> counting(m.size(), 0.0);
    for (std::size_t t : atoms) {
      for (Index c = rep.offset(t); c < rep.offset(t) + rep.block_dim(t); ++c) {
        mask(c) = 1.0;
        coords.push_back(c);
      }
      counting[t] = 1.0;
    }
    std::sort(coords.begin(), coords.end());
    ComplexMatrix p = mask.cast<Complex>().asDiagonal();
    ComplexMatrix vn = rep.synthesis_map() * p;
    std::vector<PositiveOperator> effects;
    effects.reserve(m.size());
    for (std::size_t t = 0; t < m.size(); ++t) {
      const ComplexMatrix block = vn * rep.spectral_projection(Event::atom(m.space(), t)) * vn.adjoint();
      effects.push_back(PositiveOperator::trusted(block));
    }
    components.push_back({n, atoms, std::move(coords), std::move(p), std::move(vn),
                          FramedPOVM(m.space(), std::move(effects)), ScalarMeasure(m.space(), std::move(counting))});
  }
  return {std::move(rep), std::move(components), std::move(zero_atoms)};
}

struct DecompositionReport {
  double max_atom_residual = 0.0;    ///< max_t ||M({t}) - sum_n M_n({t})||_2
  double reassembly_residual = 0.0;  ///< ||M(Omega) - sum_n V_n V_n^*||_2
  double cross_orthogonality = 0.0;  ///< max_{n != m} ||V_n^* V_n V_m^* V_m||_2
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  double sandwich_violation = 0.0;  ///< how far (sum_lower, sum_upper) leaves [A, B]
  bool ok = false;
};

inline DecompositionReport verify_decomposition(const FramedPOVM& m, const MultiplicityDecomposition& dec,
                                                const Tolerances& tol = {}) {
  require_same_space(m.space(), dec.rep.space());
  detail::require_dim(m.dim(), dec.rep.dim(), "decomposition dim");
  std::vector<int> seen(static_cast<std::size_t>(dec.rep.sharp_dim()), 0);
  for (const auto& c : dec.components) {
    require_same_space(m.space(), c.effects.space());
    if (c.synthesis.rows() != m.dim() || c.synthesis.cols() != dec.rep.sharp_dim()) {
      throw Error(ErrorKind::mismatched_decomposition, "component synthesis map has the wrong shape");
    }
    for (Index coord : c.coordinates) {
      if (coord < 0 || coord >= dec.rep.sharp_dim() || seen[static_cast<std::size_t>(coord)]++ != 0) {
        throw Error(ErrorKind::mismatched_decomposition, "component coordinates overlap or fall outside H#");
      }
    }
  }

  DecompositionReport r;
  const Index d = m.dim();
  for (std::size_t t = 0; t < m.size(); ++t) {
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& c : dec.components) sum += c.effects.atom_effect(t).matrix();
    r.max_atom_residual = std::max(r.max_atom_residual, operator_norm(m.atom_effect(t).matrix() - sum));
  }
  ComplexMatrix gram_sum = ComplexMatrix::Zero(d, d);
  for (const auto& c : dec.components) gram_sum += c.synthesis * c.synthesis.adjoint();
  const ComplexMatrix total = total_effect(m).matrix();
  r.reassembly_residual = operator_norm(total - gram_sum);
  for (std::size_t a = 0; a < dec.components.size(); ++a) {
    const ComplexMatrix& va = dec.components[a].synthesis;
    for (std::size_t b = a + 1; b < dec.components.size(); ++b) {
      const ComplexMatrix& vb = dec.components[b].synthesis;
      r.cross_orthogonality =
          std::max(r.cross_orthogonality, operator_norm((va.adjoint() * va) * (vb.adjoint() * vb)));
    }
  }
  const LoewnerBounds sb = loewner_bounds(PositiveOperator::trusted(gram_sum));
  r.sum_lower = sb.lower;
  r.sum_upper = sb.upper;
  const PovmReport pr = validate(m, tol);
  if (pr.bounds) {
    r.sandwich_violation = std::max({0.0, pr.bounds->lower - sb.lower, sb.upper - pr.bounds->upper});
  }
  const double limit = tol.dil * std::max(1.0, operator_norm(total));
  r.ok = r.max_atom_residual <= limit && r.reassembly_residual <= limit && r.cross_orthogonality <= limit &&
         r.sandwich_violation <= limit;
  return r;
}

struct SignatureEntry {
  Index multiplicity = 0;
  std::vector<std::string> atoms;

  friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

using CanonicalSignature = std::vector<SignatureEntry>;

/// (multiplicity, atom support) pairs sorted by multiplicity; zero-rank atoms
/// are omitted. Invariant under unitary conjugation of M.
inline CanonicalSignature canonical_signature(const FramedPOVM& m, const Tolerances& tol = {}) {
  std::map<Index, std::vector<std::string>> groups;
  for (std::size_t t = 0; t < m.size(); ++t) {
    const Index r = numerical_rank(m.atom_effect(t), tol);
    if (r > 0) groups[r].push_back(m.space().label(t));
  }
  CanonicalSignature out;
  for (auto& [n, atoms] : groups) out.push_back({n, std::move(atoms)});
  return out;
}

}  // namespace fpovm
