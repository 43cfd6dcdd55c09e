#include "tenuki/tensor.hpp"

#include <cstring>

namespace tenuki::kern {

void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        float* c = C + static_cast<std::int64_t>(i) * N;
        if (beta == 0.0f) std::memset(c, 0, sizeof(float) * N);
        for (int k = 0; k < K; ++k) {
            float a = A[static_cast<std::int64_t>(i) * K + k];
            const float* b = B + static_cast<std::int64_t>(k) * N;
#pragma omp simd
            for (int j = 0; j < N; ++j) c[j] += a * b[j];
        }
    }
}

void gemm_tn(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        float* c = C + static_cast<std::int64_t>(i) * N;
        if (beta == 0.0f) std::memset(c, 0, sizeof(float) * N);
        for (int k = 0; k < K; ++k) {
            float a = A[static_cast<std::int64_t>(k) * M + i];
            const float* b = B + static_cast<std::int64_t>(k) * N;
#pragma omp simd
            for (int j = 0; j < N; ++j) c[j] += a * b[j];
        }
    }
}

void gemm_nt(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        const float* a = A + static_cast<std::int64_t>(i) * K;
        float* c = C + static_cast<std::int64_t>(i) * N;
        for (int j = 0; j < N; ++j) {
            const float* b = B + static_cast<std::int64_t>(j) * K;
            float acc = 0.0f;
#pragma omp simd reduction(+ : acc)
            for (int k = 0; k < K; ++k) acc += a[k] * b[k];
            c[j] = beta == 0.0f ? acc : beta * c[j] + acc;
        }
    }
}

void im2col3x3(int C, int H, int W, const float* X, float* Col) {
    int HW = H * W;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        const float* x = X + static_cast<std::int64_t>(c) * HW;
        for (int kr = -1; kr <= 1; ++kr) {
            for (int kc = -1; kc <= 1; ++kc) {
                float* col = Col + (static_cast<std::int64_t>(c) * 9 + (kr + 1) * 3 + (kc + 1)) * HW;
                for (int r = 0; r < H; ++r) {
                    int sr = r + kr;
                    float* dst = col + r * W;
                    if (sr < 0 || sr >= H) {
                        std::memset(dst, 0, sizeof(float) * W);
                        continue;
                    }
                    const float* src = x + sr * W + kc;
                    int j0 = kc < 0 ? 1 : 0;
                    int j1 = kc > 0 ? W - 1 : W;
                    if (j0 > 0) dst[0] = 0.0f;
                    if (j1 < W) dst[W - 1] = 0.0f;
                    for (int j = j0; j < j1; ++j) dst[j] = src[j];
                }
            }
        }
    }
}

void col2im3x3(int C, int H, int W, const float* Col, float* X) {
    int HW = H * W;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        float* x = X + static_cast<std::int64_t>(c) * HW;
        std::memset(x, 0, sizeof(float) * HW);
        for (int kr = -1; kr <= 1; ++kr) {
            for (int kc = -1; kc <= 1; ++kc) {
                const float* col = Col + (static_cast<std::int64_t>(c) * 9 + (kr + 1) * 3 + (kc + 1)) * HW;
                for (int r = 0; r < H; ++r) {
                    int sr = r + kr;
                    if (sr < 0 || sr >= H) continue;
                    const float* src = col + r * W;
                    float* dst = x + sr * W + kc;
                    int j0 = kc < 0 ? 1 : 0;
                    int j1 = kc > 0 ? W - 1 : W;
                    for (int j = j0; j < j1; ++j) dst[j] += src[j];
                }
            }
        }
    }
}

void dwconv3x3(int C, int H, int W, const float* X, const float* K, float* Y) {
    int HW = H * W;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        const float* x = X + static_cast<std::int64_t>(c) * HW;
        const float* k = K + static_cast<std::int64_t>(c) * 9;
        float* y = Y + static_cast<std::int64_t>(c) * HW;
        for (int r = 0; r < H; ++r) {
            for (int col = 0; col < W; ++col) {
                float acc = 0.0f;
                for (int kr = -1; kr <= 1; ++kr) {
                    int sr = r + kr;
                    if (sr < 0 || sr >= H) continue;
                    for (int kc = -1; kc <= 1; ++kc) {
                        int sc = col + kc;
                        if (sc < 0 || sc >= W) continue;
                        acc += k[(kr + 1) * 3 + (kc + 1)] * x[sr * W + sc];
                    }
                }
                y[r * W + col] = acc;
            }
        }
    }
}

void dwconv3x3_backward_data(int C, int H, int W, const float* dY, const float* K, float* dX) {
    int HW = H * W;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        const float* dy = dY + static_cast<std::int64_t>(c) * HW;
        const float* k = K + static_cast<std::int64_t>(c) * 9;
        float* dx = dX + static_cast<std::int64_t>(c) * HW;
        // Correlation with the flipped kernel.
        for (int r = 0; r < H; ++r) {
            for (int col = 0; col < W; ++col) {
                float acc = 0.0f;
                for (int kr = -1; kr <= 1; ++kr) {
                    int sr = r + kr;
                    if (sr < 0 || sr >= H) continue;
                    for (int kc = -1; kc <= 1; ++kc) {
                        int sc = col + kc;
                        if (sc < 0 || sc >= W) continue;
                        acc += k[(1 - kr) * 3 + (1 - kc)] * dy[sr * W + sc];
                    }
                }
                dx[r * W + col] = acc;
            }
        }
    }
}

void dwconv3x3_backward_kernel(int C, int H, int W, const float* X, const float* dY, float* dK) {
    int HW = H * W;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        const float* x = X + static_cast<std::int64_t>(c) * HW;
        const float* dy = dY + static_cast<std::int64_t>(c) * HW;
        float* dk = dK + static_cast<std::int64_t>(c) * 9;
        for (int kr = -1; kr <= 1; ++kr) {
            for (int kc = -1; kc <= 1; ++kc) {
                float acc = 0.0f;
                for (int r = 0; r < H; ++r) {
                    int sr = r + kr;
                    if (sr < 0 || sr >= H) continue;
                    for (int col = 0; col < W; ++col) {
                        int sc = col + kc;
                        if (sc < 0 || sc >= W) continue;
                        acc += x[sr * W + sc] * dy[r * W + col];
                    }
                }
                dk[(kr + 1) * 3 + (kc + 1)] += acc;
            }
        }
    }
}

namespace ref {

void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < K; ++k)
                acc += static_cast<double>(A[i * K + k]) * B[static_cast<std::int64_t>(k) * N + j];
            std::int64_t idx = static_cast<std::int64_t>(i) * N + j;
            C[idx] = static_cast<float>(acc) + (beta == 0.0f ? 0.0f : beta * C[idx]);
        }
    }
}

void gemm_tn(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < K; ++k)
                acc += static_cast<double>(A[static_cast<std::int64_t>(k) * M + i]) *
                       B[static_cast<std::int64_t>(k) * N + j];
            std::int64_t idx = static_cast<std::int64_t>(i) * N + j;
            C[idx] = static_cast<float>(acc) + (beta == 0.0f ? 0.0f : beta * C[idx]);
        }
    }
}

void gemm_nt(int M, int N, int K, const float* A, const float* B, float* C, float beta) {
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < N; ++j) {
            double acc = 0.0;
            for (int k = 0; k < K; ++k)
                acc += static_cast<double>(A[static_cast<std::int64_t>(i) * K + k]) *
                       B[static_cast<std::int64_t>(j) * K + k];
            std::int64_t idx = static_cast<std::int64_t>(i) * N + j;
            C[idx] = static_cast<float>(acc) + (beta == 0.0f ? 0.0f : beta * C[idx]);
        }
    }
}

void dwconv3x3(int C, int H, int W, const float* X, const float* K, float* Y) {
    for (int c = 0; c < C; ++c)
        for (int r = 0; r < H; ++r)
            for (int col = 0; col < W; ++col) {
                double acc = 0.0;
                for (int kr = -1; kr <= 1; ++kr)
                    for (int kc = -1; kc <= 1; ++kc) {
                        int sr = r + kr, sc = col + kc;
                        if (sr < 0 || sr >= H || sc < 0 || sc >= W) continue;
                        acc += static_cast<double>(K[c * 9 + (kr + 1) * 3 + (kc + 1)]) *
                               X[(static_cast<std::int64_t>(c) * H + sr) * W + sc];
                    }
                Y[(static_cast<std::int64_t>(c) * H + r) * W + col] = static_cast<float>(acc);
            }
}

}  // namespace ref

}  // namespace tenuki::kern
