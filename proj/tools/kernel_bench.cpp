#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "tenuki/tensor.hpp"

using namespace tenuki;

namespace {

double time_best(const std::function<void()>& fn, int repeats = 5) {
    fn();  // warmup
    double best = 1e30;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count());
    }
    return best;
}

std::vector<float> randu(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<float> d(-1.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double max_abs_diff(const std::vector<float>& a, const std::vector<float>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(double(a[i]) - b[i]));
    return m;
}

}  // namespace

int main() {
    std::mt19937_64 rng(0xbe27c4);

    std::printf("%-28s %12s %12s %8s %10s\n", "kernel", "serial_ms", "omp_ms", "speedup",
                "max_diff");

    struct GemmCase {
        const char* name;
        int M, N, K;
    };
    for (const GemmCase& c : {GemmCase{"gemm_nn 64x361x576", 64, 361, 576},
                              GemmCase{"gemm_nn 256x361x576", 256, 361, 576},
                              GemmCase{"gemm_nn 256x1444x576", 256, 1444, 576}}) {
        auto A = randu(std::size_t(c.M) * c.K, rng);
        auto B = randu(std::size_t(c.K) * c.N, rng);
        std::vector<float> Cs(std::size_t(c.M) * c.N), Cf(Cs.size());
        double ts = time_best([&] { kern::ref::gemm_nn(c.M, c.N, c.K, A.data(), B.data(), Cs.data(), 0.0f); });
        double tf = time_best([&] { kern::gemm_nn(c.M, c.N, c.K, A.data(), B.data(), Cf.data(), 0.0f); });
        std::printf("%-28s %12.3f %12.3f %7.2fx %10.2e\n", c.name, ts * 1e3, tf * 1e3, ts / tf,
                    max_abs_diff(Cs, Cf));
    }

    for (int C = 64; C <= 512; C *= 2) {
        const int H = 19, W = 19;
        auto X = randu(std::size_t(C) * H * W, rng);
        auto K = randu(std::size_t(C) * 9, rng);
        std::vector<float> Ys(std::size_t(C) * H * W), Yf(Ys.size());
        double ts = time_best([&] {
            for (int it = 0; it < 20; ++it) kern::ref::dwconv3x3(C, H, W, X.data(), K.data(), Ys.data());
        });
        double tf = time_best([&] {
            for (int it = 0; it < 20; ++it) kern::dwconv3x3(C, H, W, X.data(), K.data(), Yf.data());
        });
        char name[64];
        std::snprintf(name, sizeof name, "dwconv3x3 C=%d 19x19 x20", C);
        std::printf("%-28s %12.3f %12.3f %7.2fx %10.2e\n", name, ts * 1e3, tf * 1e3, ts / tf,
                    max_abs_diff(Ys, Yf));
    }
    return 0;
}
