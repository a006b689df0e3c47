#pragma once

#include <cblas.h>

namespace ganbench::nn {

// Row-major C = alpha * op(A) * op(B) + beta * C. Thin dispatch so the
// layer code can be instantiated with float (production) or double
// (finite-difference gradient checks).
template <typename T>
void gemm(bool trans_a, bool trans_b, int m, int n, int k, T alpha,
          const T* a, int lda, const T* b, int ldb, T beta, T* c, int ldc);

template <>
inline void gemm<float>(bool trans_a, bool trans_b, int m, int n, int k,
                        float alpha, const float* a, int lda, const float* b,
                        int ldb, float beta, float* c, int ldc) {
  cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
              ldb, beta, c, ldc);
}

template <>
inline void gemm<double>(bool trans_a, bool trans_b, int m, int n, int k,
                         double alpha, const double* a, int lda,
                         const double* b, int ldb, double beta, double* c,
                         int ldc) {
  cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
              trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
              ldb, beta, c, ldc);
}

}  // namespace ganbench::nn
