#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "fpovm/operator.hpp"

namespace fpovm::test {

inline double norm2(const ComplexMatrix& a) { return operator_norm(a); }

inline ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

inline std::string golden_path(const std::string& rel) { return std::string(FPOVM_GOLDEN_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline ComplexVector e(Index dim, Index i) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace fpovm::test
