#pragma once

// Base measure tr(M(w)), operator-valued Radon-Nikodym densities and rebasing.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpovm/povm.hpp"

namespace fpovm {

inline ScalarMeasure base_measure(const FramedPOVM& m) {
  std::vector<double> w(m.size());
  for (std::size_t t = 0; t < m.size(); ++t) w[t] = std::max(0.0, m.atom_effect(t).matrix().trace().real());
  return ScalarMeasure(m.space(), std::move(w));
}

/// M({t}) = r(t) mu({t}) on atoms with mu({t}) > 0; the remaining atoms are
/// null and carry (numerically) zero effects.
struct RadonNikodymDecomposition {
  ScalarMeasure base;
  std::vector<std::optional<PositiveOperator>> derivative;  ///< empty on null atoms
  std::vector<std::size_t> null_atoms;
};

inline RadonNikodymDecomposition rn_derivative(const FramedPOVM& m, const ScalarMeasure& mu,
                                               const Tolerances& tol = {}) {
  require_same_space(m.space(), mu.space());
  RadonNikodymDecomposition dec{mu, {}, {}};
  dec.derivative.reserve(m.size());
  for (std::size_t t = 0; t < m.size(); ++t) {
    const double w = mu.weight(t);
    const ComplexMatrix& a = m.atom_effect(t).matrix();
    if (w > 0.0) {
      dec.derivative.emplace_back(PositiveOperator::trusted(a / w));
    } else {
      if (operator_norm(a) > tol.psd) {
        throw Error(ErrorKind::not_absolutely_continuous,
                    "atom '" + m.space().label(t) + "' has zero measure but a nonzero effect");
      }
      dec.derivative.emplace_back(std::nullopt);
      dec.null_atoms.push_back(t);
    }
  }
  return dec;
}

/// Always succeeds in finite dimensions: the trace measure dominates M.
inline bool is_decomposable(const FramedPOVM& m, const Tolerances& tol = {}) {
  try {
    rn_derivative(m, base_measure(m), tol);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_absolutely_continuous) return false;
    throw;
  }
}

struct RadonNikodymReport {
  double max_atom_residual = 0.0;  ///< max_t ||M({t}) - r(t) mu({t})||_2
  double lower = 0.0;              ///< lambda_min(sum_t r(t) mu({t}))
  double upper = 0.0;
  double bounds_residual = 0.0;    ///< distance from the POVM frame bounds
  double max_trace_defect = 0.0;   ///< max_t |tr r(t) - 1| (meaningful for the trace base measure)
  double max_idempotency = 0.0;    ///< max_t ||r(t)^2 - r(t)||_2
  bool framed = false;
  bool ok = false;
};

inline RadonNikodymReport verify_rn(const FramedPOVM& m, const RadonNikodymDecomposition& dec,
                                    const Tolerances& tol = {}) {
  require_same_space(m.space(), dec.base.space());
  if (dec.derivative.size() != m.size()) {
    throw Error(ErrorKind::dimension_mismatch, "derivative needs one entry per atom");
  }
  RadonNikodymReport r;
  const Index d = m.dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t t = 0; t < m.size(); ++t) {
    ComplexMatrix rebuilt = ComplexMatrix::Zero(d, d);
    if (dec.derivative[t]) {
      const ComplexMatrix& rt = dec.derivative[t]->matrix();
      rebuilt = rt * dec.base.weight(t);
      r.max_trace_defect = std::max(r.max_trace_defect, std::abs(rt.trace().real() - 1.0));
      r.max_idempotency = std::max(r.max_idempotency, operator_norm(rt * rt - rt));
    }
    r.max_atom_residual = std::max(r.max_atom_residual, operator_norm(m.atom_effect(t).matrix() - rebuilt));
    sum += rebuilt;
  }
  const LoewnerBounds lb = loewner_bounds(PositiveOperator::trusted(sum));
  r.lower = lb.lower;
  r.upper = lb.upper;
  const PovmReport pr = validate(m, tol);
  r.framed = pr.framed;
  if (pr.bounds) {
    r.bounds_residual = std::max(std::abs(lb.lower - pr.bounds->lower), std::abs(lb.upper - pr.bounds->upper));
  }
  r.ok = r.max_atom_residual <= tol.psd && r.bounds_residual <= tol.psd;
  return r;
}

}  // namespace fpovm
