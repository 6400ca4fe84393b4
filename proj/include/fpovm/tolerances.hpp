#pragma once

#include <cmath>

#include "fpovm/error.hpp"

namespace fpovm {

/// Relative thresholds shared by every module. Defaults suit double precision
/// eigensolvers up to dimension 64.
struct Tolerances {
  double herm = 1e-10;  ///< Hermiticity residual, relative to max(1, ||A||_F)
  double psd = 1e-9;    ///< negative-eigenvalue slack, relative to max(1, ||A||_2)
  double proj = 1e-9;   ///< idempotency / orthogonality residual
  double rank = 1e-10;  ///< eigenvalues below rank * lambda_max count as zero
  double inv = 1e-12;   ///< invertibility floor for lambda_min / lambda_max
  double rec = 1e-8;    ///< reconstruction residual, relative to ||f||
  double dil = 1e-9;    ///< dilation residual, relative to max(1, ||M(Omega)||_2)

  void validate() const {
    for (double t : {herm, psd, proj, rank, inv, rec, dil}) {
      if (!std::isfinite(t) || t < 0.0 || t >= 1.0) {
        throw Error(ErrorKind::validation, "tolerances must be finite and lie in [0, 1)");
      }
    }
  }
};

}  // namespace fpovm
