#pragma once

// Canonical dual POVM tM(w) = G V S(w) V^* G with G = (V V^*)^{-1}.

#include <algorithm>
#include <utility>
#include <vector>

#include "fpovm/naimark.hpp"
#include "fpovm/povm.hpp"

namespace fpovm {

/// The dual shares the primal's S and H#; its synthesis map is G V.
struct DualPair {
  FramedPOVM primal;
  NaimarkRepresentation primal_rep;
  FramedPOVM dual;
  NaimarkRepresentation dual_rep;
  PositiveOperator gram_inverse;
};

inline DualPair canonical_dual_povm(const FramedPOVM& m, const Tolerances& tol = {}) {
  const PovmReport report = validate(m, tol);
  if (!report.framed) throw Error(ErrorKind::not_a_frame, "POVM is not framed; no canonical dual");
  NaimarkRepresentation rep = minimal_dilation(m, tol);
  const ComplexMatrix& v = rep.synthesis_map();
  PositiveOperator g = invert_positive(PositiveOperator::trusted(v * v.adjoint()), tol);
  const ComplexMatrix& gm = g.matrix();

  std::vector<PositiveOperator> effects;
  effects.reserve(m.size());
  for (const auto& e : m.effects()) effects.push_back(PositiveOperator::trusted(gm * e.matrix() * gm));
  FramedPOVM dual(m.space(), std::move(effects));

  std::vector<ComplexMatrix> isometries = rep.block_isometries();
  NaimarkRepresentation dual_rep(rep.space(), gm * v, rep.offsets(), rep.block_dims(), std::move(isometries));
  return {m, std::move(rep), std::move(dual), std::move(dual_rep), std::move(g)};
}

struct DualityReport {
  double dual_synthesis_residual = 0.0;  ///< ||tS(A(f)) - f||
  double dual_analysis_residual = 0.0;   ///< ||S(tA(f)) - f||
  double total_product_residual = 0.0;   ///< ||M(Omega) tM(Omega) - 1||_2
  bool ok = false;
};

inline DualityReport verify_duality(const DualPair& pair, const ComplexVector& f, const Tolerances& tol = {}) {
  detail::require_dim(pair.primal.dim(), f.size(), "test vector");
  DualityReport r;
  const ComplexVector via_primal = synthesize_measure(pair.dual_rep, analysis_measure(pair.primal_rep, f));
  const ComplexVector via_dual = synthesize_measure(pair.primal_rep, analysis_measure(pair.dual_rep, f));
  r.dual_synthesis_residual = (via_primal - f).norm();
  r.dual_analysis_residual = (via_dual - f).norm();
  const Index d = pair.primal.dim();
  r.total_product_residual = operator_norm(total_effect(pair.primal).matrix() * total_effect(pair.dual).matrix() -
                                           ComplexMatrix::Identity(d, d));
  r.ok = r.dual_synthesis_residual <= tol.rec * f.norm() && r.dual_analysis_residual <= tol.rec * f.norm() &&
         r.total_product_residual <= tol.dil;
  return r;
}

}  // namespace fpovm
