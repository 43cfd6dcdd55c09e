#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace tenuki {

struct Tensor {
    std::vector<int> shape;
    std::vector<float> v;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        v.assign(numel(), 0.0f);
    }
    std::int64_t numel() const {
        std::int64_t n = 1;
        for (int d : shape) n *= d;
        return n;
    }
    float* data() { return v.data(); }
    const float* data() const { return v.data(); }
    void zero() { std::fill(v.begin(), v.end(), 0.0f); }
};

// Row-major kernels. The omp variants are the production path; the serial
// reference versions are kept as test oracles and for the kernel benchmark.
namespace kern {

// C[M,N] = A[M,K] * B[K,N] + beta * C
void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C, float beta);
// C[M,N] = A[K,M]^T * B[K,N] + beta * C
void gemm_tn(int M, int N, int K, const float* A, const float* B, float* C, float beta);
// C[M,N] = A[M,K] * B[N,K]^T + beta * C
void gemm_nt(int M, int N, int K, const float* A, const float* B, float* C, float beta);

// X[C,H,W] -> Col[C*9, H*W] for a 3x3 same-padding convolution.
void im2col3x3(int C, int H, int W, const float* X, float* Col);
// Scatter-add transpose of im2col3x3.
void col2im3x3(int C, int H, int W, const float* Col, float* X);

// Y[C,HW] = depthwise 3x3 conv of X[C,H,W] with K[C,9].
void dwconv3x3(int C, int H, int W, const float* X, const float* K, float* Y);
void dwconv3x3_backward_data(int C, int H, int W, const float* dY, const float* K, float* dX);
void dwconv3x3_backward_kernel(int C, int H, int W, const float* X, const float* dY, float* dK);

namespace ref {
void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C, float beta);
void gemm_tn(int M, int N, int K, const float* A, const float* B, float* C, float beta);
void gemm_nt(int M, int N, int K, const float* A, const float* B, float* C, float beta);
void dwconv3x3(int C, int H, int W, const float* X, const float* K, float* Y);
}  // namespace ref

}  // namespace kern

}  // namespace tenuki
