#pragma once

// Internal bridge to LAPACK's balanced general complex eigensolver.

#include "metriq/opcore.hpp"

namespace metriq::detail {

struct GeneralEigen {
  ComplexVector values;
  ComplexMatrix vectors;  // empty unless requested; columns have unit 2-norm
};

GeneralEigen general_eigen(const ComplexMatrix& a, bool want_vectors);

}  // namespace metriq::detail
