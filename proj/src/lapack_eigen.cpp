#include "lapack_eigen.hpp"

#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace metriq::detail {

GeneralEigen general_eigen(const ComplexMatrix& a, bool want_vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  ComplexMatrix work = a;  // zgeev overwrites its input
  GeneralEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  cplx dummy{};
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n, out.values.data(),
      &dummy, 1, want_vectors ? out.vectors.data() : &dummy, want_vectors ? n : 1);
  if (info > 0) {
    throw NumericalError("eigensolver did not converge (zgeev info=" + std::to_string(info) + ")");
  }
  if (info < 0) {
    throw NumericalError("zgeev rejected argument " + std::to_string(-info));
  }
  return out;
}

}  // namespace metriq::detail
