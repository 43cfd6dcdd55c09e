#include "tenuki/network.hpp"

#include <algorithm>
#include <cmath>

#include "tenuki/records.hpp"
#include <cstring>
#include <fstream>

namespace tenuki {

namespace {

constexpr float kBnEps = 1e-5f;
constexpr float kBnMomentum = 0.9f;

int trainable_count(const LayerDesc& l) {
    switch (l.kind) {
        case LayerKind::Conv1x1:
        case LayerKind::Conv3x3:
        case LayerKind::Dense:
            return l.bias ? 2 : 1;
        case LayerKind::DwConv3x3: return 1;
        case LayerKind::BatchNorm: return 2;
        default: return 0;
    }
}

bool l2_applies(const LayerDesc& l, int slot) {
    if (slot != 0) return false;
    return l.kind == LayerKind::Conv1x1 || l.kind == LayerKind::Conv3x3 ||
           l.kind == LayerKind::DwConv3x3 || l.kind == LayerKind::Dense;
}

}  // namespace

struct Network::Workspace {
    int B = 0;
    std::vector<Tensor> act;
    std::vector<Tensor> bn_xhat;
    std::vector<std::vector<float>> bn_mean, bn_invstd;
    std::vector<float> scratch;  // im2col buffer
};

Network::Network(Network&&) noexcept = default;
Network& Network::operator=(Network&&) noexcept = default;
Network::~Network() = default;

Network::Network(const NamedSpec& named, std::uint64_t seed)
    : named_(named), graph_(build_graph(named.spec)) {
    std::mt19937_64 rng(seed);
    params_.resize(graph_.layers.size());
    for (std::size_t i = 0; i < graph_.layers.size(); ++i) {
        const LayerDesc& l = graph_.layers[i];
        LayerParams& p = params_[i];
        auto fan_in_uniform = [&](Tensor& t, int fan_in) {
            float limit = std::sqrt(3.0f / static_cast<float>(fan_in));
            std::uniform_real_distribution<float> d(-limit, limit);
            for (auto& v : t.v) v = d(rng);
        };
        switch (l.kind) {
            case LayerKind::Conv1x1:
                p.w.emplace_back(std::vector<int>{l.out_ch, l.in_ch});
                fan_in_uniform(p.w[0], l.in_ch);
                if (l.bias) p.w.emplace_back(std::vector<int>{l.out_ch});
                break;
            case LayerKind::Conv3x3:
                p.w.emplace_back(std::vector<int>{l.out_ch, l.in_ch * 9});
                fan_in_uniform(p.w[0], l.in_ch * 9);
                if (l.bias) p.w.emplace_back(std::vector<int>{l.out_ch});
                break;
            case LayerKind::DwConv3x3:
                p.w.emplace_back(std::vector<int>{l.out_ch, 9});
                fan_in_uniform(p.w[0], 9);
                break;
            case LayerKind::BatchNorm:
                p.w.emplace_back(std::vector<int>{l.out_ch});  // scale
                p.w.emplace_back(std::vector<int>{l.out_ch});  // shift
                p.w.emplace_back(std::vector<int>{l.out_ch});  // running mean
                p.w.emplace_back(std::vector<int>{l.out_ch});  // running var
                std::fill(p.w[0].v.begin(), p.w[0].v.end(), 1.0f);
                std::fill(p.w[3].v.begin(), p.w[3].v.end(), 1.0f);
                break;
            case LayerKind::Dense:
                p.w.emplace_back(std::vector<int>{l.out_ch, l.in_ch});
                fan_in_uniform(p.w[0], l.in_ch);
                if (l.bias) p.w.emplace_back(std::vector<int>{l.out_ch});
                break;
            default: break;
        }
        for (int t = 0; t < trainable_count(l); ++t) p.g.emplace_back(p.w[t].shape);
    }
}

std::int64_t Network::num_params() const {
    std::int64_t n = 0;
    for (const auto& p : params_)
        for (const auto& t : p.w) n += t.numel();
    return n;
}

Network::Output Network::run_forward(const Tensor& input, RunMode mode, Workspace& ws) const {
    const int S = graph_.board, HW = S * S;
    if (input.shape.size() != 4 || input.shape[1] != graph_.input_planes ||
        input.shape[2] != S || input.shape[3] != S)
        throw ConfigError("input batch shape does not match the network spec");
    const int B = input.shape[0];

    const std::size_t L = graph_.layers.size();
    ws.B = B;
    ws.act.assign(L, Tensor{});
    ws.bn_xhat.assign(L, Tensor{});
    ws.bn_mean.assign(L, {});
    ws.bn_invstd.assign(L, {});

    for (std::size_t i = 0; i < L; ++i) {
        const LayerDesc& l = graph_.layers[i];
        const LayerParams& p = params_[i];
        auto in = [&](int k) -> const Tensor& { return ws.act[l.inputs[k]]; };

        switch (l.kind) {
            case LayerKind::Input:
                ws.act[i] = input;
                break;
            case LayerKind::Conv1x1: {
                Tensor y({B, l.out_ch, HW});
                const Tensor& x = in(0);
                for (int b = 0; b < B; ++b)
                    kern::gemm_nn(l.out_ch, HW, l.in_ch, p.w[0].data(),
                                  x.data() + static_cast<std::int64_t>(b) * l.in_ch * HW,
                                  y.data() + static_cast<std::int64_t>(b) * l.out_ch * HW, 0.0f);
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int c = 0; c < l.out_ch; ++c) {
                            float bias = p.w[1].v[c];
                            float* row = y.data() + (static_cast<std::int64_t>(b) * l.out_ch + c) * HW;
                            for (int j = 0; j < HW; ++j) row[j] += bias;
                        }
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Conv3x3: {
                Tensor y({B, l.out_ch, HW});
                const Tensor& x = in(0);
                ws.scratch.resize(static_cast<std::size_t>(l.in_ch) * 9 * HW);
                for (int b = 0; b < B; ++b) {
                    kern::im2col3x3(l.in_ch, S, S,
                                    x.data() + static_cast<std::int64_t>(b) * l.in_ch * HW,
                                    ws.scratch.data());
                    kern::gemm_nn(l.out_ch, HW, l.in_ch * 9, p.w[0].data(), ws.scratch.data(),
                                  y.data() + static_cast<std::int64_t>(b) * l.out_ch * HW, 0.0f);
                }
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int c = 0; c < l.out_ch; ++c) {
                            float bias = p.w[1].v[c];
                            float* row = y.data() + (static_cast<std::int64_t>(b) * l.out_ch + c) * HW;
                            for (int j = 0; j < HW; ++j) row[j] += bias;
                        }
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::DwConv3x3: {
                Tensor y({B, l.out_ch, HW});
                const Tensor& x = in(0);
                for (int b = 0; b < B; ++b)
                    kern::dwconv3x3(l.out_ch, S, S,
                                    x.data() + static_cast<std::int64_t>(b) * l.out_ch * HW,
                                    p.w[0].data(),
                                    y.data() + static_cast<std::int64_t>(b) * l.out_ch * HW);
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::BatchNorm: {
                const Tensor& x = in(0);
                const int C = l.out_ch;
                Tensor y(x.shape);
                const std::int64_t N = static_cast<std::int64_t>(B) * HW;
                std::vector<float> mean(C), invstd(C);
                if (mode == RunMode::Train) {
                    for (int c = 0; c < C; ++c) {
                        double s = 0.0;
                        for (int b = 0; b < B; ++b) {
                            const float* row = x.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                            for (int j = 0; j < HW; ++j) s += row[j];
                        }
                        mean[c] = static_cast<float>(s / N);
                    }
                    for (int c = 0; c < C; ++c) {
                        double s = 0.0;
                        for (int b = 0; b < B; ++b) {
                            const float* row = x.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                            for (int j = 0; j < HW; ++j) {
                                double d = row[j] - mean[c];
                                s += d * d;
                            }
                        }
                        float var = static_cast<float>(s / N);
                        invstd[c] = 1.0f / std::sqrt(var + kBnEps);
                        auto& rm = const_cast<Tensor&>(p.w[2]);
                        auto& rv = const_cast<Tensor&>(p.w[3]);
                        rm.v[c] = kBnMomentum * rm.v[c] + (1.0f - kBnMomentum) * mean[c];
                        rv.v[c] = kBnMomentum * rv.v[c] + (1.0f - kBnMomentum) * var;
                    }
                    ws.bn_xhat[i] = Tensor(x.shape);
                } else {
                    for (int c = 0; c < C; ++c) {
                        mean[c] = p.w[2].v[c];
                        invstd[c] = 1.0f / std::sqrt(p.w[3].v[c] + kBnEps);
                    }
                }
                for (int b = 0; b < B; ++b)
                    for (int c = 0; c < C; ++c) {
                        const float* row = x.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        float* out = y.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        float* xh = mode == RunMode::Train
                                        ? ws.bn_xhat[i].data() + (static_cast<std::int64_t>(b) * C + c) * HW
                                        : nullptr;
                        float g = p.w[0].v[c], beta = p.w[1].v[c];
                        for (int j = 0; j < HW; ++j) {
                            float xhat = (row[j] - mean[c]) * invstd[c];
                            if (xh) xh[j] = xhat;
                            out[j] = g * xhat + beta;
                        }
                    }
                ws.bn_mean[i] = std::move(mean);
                ws.bn_invstd[i] = std::move(invstd);
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Relu: {
                Tensor y = in(0);
                for (auto& v : y.v) v = v > 0.0f ? v : 0.0f;
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Add: {
                Tensor y = in(0);
                const Tensor& x2 = in(1);
                if (y.shape != x2.shape) throw ConfigError("addition junction shape mismatch");
                for (std::size_t k = 0; k < y.v.size(); ++k) y.v[k] += x2.v[k];
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::GlobalAvgPool: {
                const Tensor& x = in(0);
                const int C = l.out_ch;
                Tensor y({B, C});
                for (int b = 0; b < B; ++b)
                    for (int c = 0; c < C; ++c) {
                        const float* row = x.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        float s = 0.0f;
                        for (int j = 0; j < HW; ++j) s += row[j];
                        y.v[static_cast<std::int64_t>(b) * C + c] = s / static_cast<float>(HW);
                    }
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Flatten: {
                Tensor y = in(0);
                y.shape = {B, l.out_ch};
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Dense: {
                const Tensor& x = in(0);
                Tensor y({B, l.out_ch});
                kern::gemm_nt(B, l.out_ch, l.in_ch, x.data(), p.w[0].data(), y.data(), 0.0f);
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int o = 0; o < l.out_ch; ++o)
                            y.v[static_cast<std::int64_t>(b) * l.out_ch + o] += p.w[1].v[o];
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Softmax: {
                Tensor y = in(0);
                const int n = l.out_ch;
                for (int b = 0; b < B; ++b) {
                    float* row = y.data() + static_cast<std::int64_t>(b) * n;
                    float mx = row[0];
                    for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
                    float s = 0.0f;
                    for (int j = 0; j < n; ++j) {
                        row[j] = std::exp(row[j] - mx);
                        s += row[j];
                    }
                    for (int j = 0; j < n; ++j) row[j] /= s;
                }
                ws.act[i] = std::move(y);
                break;
            }
            case LayerKind::Sigmoid: {
                Tensor y = in(0);
                for (auto& v : y.v) v = 1.0f / (1.0f + std::exp(-v));
                ws.act[i] = std::move(y);
                break;
            }
        }
    }

    Output out;
    out.policy = ws.act[graph_.policy_out];
    out.value = ws.act[graph_.value_out];
    return out;
}

Network::Output Network::forward(const Tensor& input, RunMode mode) {
    if (mode == RunMode::Infer) return forward_infer(input);
    if (!train_ws_) train_ws_ = std::make_unique<Workspace>();
    return run_forward(input, RunMode::Train, *train_ws_);
}

Network::Output Network::forward_infer(const Tensor& input) const {
    // Large batches are processed in cache-friendly chunks; keeping every
    // layer activation for thousands of states at once thrashes memory.
    constexpr int kInferChunk = 16;
    const int B = input.shape[0];
    if (B <= kInferChunk) {
        Workspace ws;
        return run_forward(input, RunMode::Infer, ws);
    }
    const std::size_t per_state = input.numel() / std::size_t(B);
    Output out;
    for (int start = 0; start < B; start += kInferChunk) {
        int n = std::min(kInferChunk, B - start);
        Tensor piece(std::vector<int>{n, input.shape[1], input.shape[2], input.shape[3]});
        std::copy(input.v.begin() + start * per_state,
                  input.v.begin() + (start + n) * per_state, piece.v.begin());
        Workspace ws;
        Output sub = run_forward(piece, RunMode::Infer, ws);
        if (start == 0) {
            std::vector<int> ps = sub.policy.shape, vs = sub.value.shape;
            ps[0] = B;
            vs[0] = B;
            out.policy = Tensor(ps);
            out.value = Tensor(vs);
        }
        std::copy(sub.policy.v.begin(), sub.policy.v.end(),
                  out.policy.v.begin() + std::size_t(start) * (sub.policy.numel() / n));
        std::copy(sub.value.v.begin(), sub.value.v.end(),
                  out.value.v.begin() + std::size_t(start) * (sub.value.numel() / n));
    }
    return out;
}

void Network::backward(const Tensor& dpolicy, const Tensor& dvalue) {
    if (!train_ws_ || train_ws_->act.empty())
        throw std::logic_error("backward without a train-mode forward");
    Workspace& ws = *train_ws_;
    const int S = graph_.board, HW = S * S, B = ws.B;
    const std::size_t L = graph_.layers.size();

    std::vector<Tensor> dact(L);
    auto grad_of = [&](std::size_t i) -> Tensor& {
        if (dact[i].shape.empty()) {
            dact[i] = Tensor(ws.act[i].shape);
        }
        return dact[i];
    };
    grad_of(graph_.policy_out).v = dpolicy.v;
    grad_of(graph_.value_out).v = dvalue.v;

    for (std::size_t ii = L; ii-- > 0;) {
        const LayerDesc& l = graph_.layers[ii];
        if (dact[ii].shape.empty()) continue;  // no gradient flowed here
        const Tensor& dy = dact[ii];
        LayerParams& p = params_[ii];
        auto din = [&](int k) -> Tensor& { return grad_of(l.inputs[k]); };
        auto xin = [&](int k) -> const Tensor& { return ws.act[graph_.layers[ii].inputs[k]]; };

        switch (l.kind) {
            case LayerKind::Input:
                break;
            case LayerKind::Conv1x1: {
                Tensor& dx = din(0);
                const Tensor& x = xin(0);
                for (int b = 0; b < B; ++b) {
                    const float* dyb = dy.data() + static_cast<std::int64_t>(b) * l.out_ch * HW;
                    kern::gemm_tn(l.in_ch, HW, l.out_ch, p.w[0].data(), dyb,
                                  dx.data() + static_cast<std::int64_t>(b) * l.in_ch * HW, 1.0f);
                    kern::gemm_nt(l.out_ch, l.in_ch, HW, dyb,
                                  x.data() + static_cast<std::int64_t>(b) * l.in_ch * HW,
                                  p.g[0].data(), 1.0f);
                }
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int c = 0; c < l.out_ch; ++c) {
                            const float* row = dy.data() + (static_cast<std::int64_t>(b) * l.out_ch + c) * HW;
                            float s = 0.0f;
                            for (int j = 0; j < HW; ++j) s += row[j];
                            p.g[1].v[c] += s;
                        }
                break;
            }
            case LayerKind::Conv3x3: {
                Tensor& dx = din(0);
                const Tensor& x = xin(0);
                std::vector<float> col(static_cast<std::size_t>(l.in_ch) * 9 * HW);
                std::vector<float> dcol(col.size());
                std::vector<float> dxb(static_cast<std::size_t>(l.in_ch) * HW);
                for (int b = 0; b < B; ++b) {
                    const float* dyb = dy.data() + static_cast<std::int64_t>(b) * l.out_ch * HW;
                    kern::im2col3x3(l.in_ch, S, S,
                                    x.data() + static_cast<std::int64_t>(b) * l.in_ch * HW, col.data());
                    kern::gemm_nt(l.out_ch, l.in_ch * 9, HW, dyb, col.data(), p.g[0].data(), 1.0f);
                    kern::gemm_tn(l.in_ch * 9, HW, l.out_ch, p.w[0].data(), dyb, dcol.data(), 0.0f);
                    kern::col2im3x3(l.in_ch, S, S, dcol.data(), dxb.data());
                    float* dst = dx.data() + static_cast<std::int64_t>(b) * l.in_ch * HW;
                    for (std::size_t k = 0; k < dxb.size(); ++k) dst[k] += dxb[k];
                }
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int c = 0; c < l.out_ch; ++c) {
                            const float* row = dy.data() + (static_cast<std::int64_t>(b) * l.out_ch + c) * HW;
                            float s = 0.0f;
                            for (int j = 0; j < HW; ++j) s += row[j];
                            p.g[1].v[c] += s;
                        }
                break;
            }
            case LayerKind::DwConv3x3: {
                Tensor& dx = din(0);
                const Tensor& x = xin(0);
                std::vector<float> dxb(static_cast<std::size_t>(l.in_ch) * HW);
                for (int b = 0; b < B; ++b) {
                    const float* dyb = dy.data() + static_cast<std::int64_t>(b) * l.out_ch * HW;
                    kern::dwconv3x3_backward_data(l.out_ch, S, S, dyb, p.w[0].data(), dxb.data());
                    float* dst = dx.data() + static_cast<std::int64_t>(b) * l.in_ch * HW;
                    for (std::size_t k = 0; k < dxb.size(); ++k) dst[k] += dxb[k];
                    kern::dwconv3x3_backward_kernel(l.out_ch, S, S,
                                                    x.data() + static_cast<std::int64_t>(b) * l.in_ch * HW,
                                                    dyb, p.g[0].data());
                }
                break;
            }
            case LayerKind::BatchNorm: {
                Tensor& dx = din(0);
                const int C = l.out_ch;
                const Tensor& xhat = ws.bn_xhat[ii];
                if (xhat.shape.empty())
                    throw std::logic_error("batch-norm backward requires a train-mode forward");
                const std::int64_t N = static_cast<std::int64_t>(B) * HW;
                for (int c = 0; c < C; ++c) {
                    double dgamma = 0.0, dbeta = 0.0;
                    for (int b = 0; b < B; ++b) {
                        const float* dyr = dy.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        const float* xhr = xhat.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        for (int j = 0; j < HW; ++j) {
                            dgamma += static_cast<double>(dyr[j]) * xhr[j];
                            dbeta += dyr[j];
                        }
                    }
                    p.g[0].v[c] += static_cast<float>(dgamma);
                    p.g[1].v[c] += static_cast<float>(dbeta);
                    float k = p.w[0].v[c] * ws.bn_invstd[ii][c] / static_cast<float>(N);
                    float mg = static_cast<float>(dbeta), mgx = static_cast<float>(dgamma);
                    for (int b = 0; b < B; ++b) {
                        const float* dyr = dy.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        const float* xhr = xhat.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        float* dxr = dx.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        for (int j = 0; j < HW; ++j)
                            dxr[j] += k * (N * dyr[j] - mg - xhr[j] * mgx);
                    }
                }
                break;
            }
            case LayerKind::Relu: {
                Tensor& dx = din(0);
                const Tensor& y = ws.act[ii];
                for (std::size_t k = 0; k < y.v.size(); ++k)
                    if (y.v[k] > 0.0f) dx.v[k] += dy.v[k];
                break;
            }
            case LayerKind::Add: {
                Tensor& d0 = din(0);
                for (std::size_t k = 0; k < dy.v.size(); ++k) d0.v[k] += dy.v[k];
                Tensor& d1 = din(1);
                for (std::size_t k = 0; k < dy.v.size(); ++k) d1.v[k] += dy.v[k];
                break;
            }
            case LayerKind::GlobalAvgPool: {
                Tensor& dx = din(0);
                const int C = l.out_ch;
                const float inv = 1.0f / static_cast<float>(HW);
                for (int b = 0; b < B; ++b)
                    for (int c = 0; c < C; ++c) {
                        float g = dy.v[static_cast<std::int64_t>(b) * C + c] * inv;
                        float* row = dx.data() + (static_cast<std::int64_t>(b) * C + c) * HW;
                        for (int j = 0; j < HW; ++j) row[j] += g;
                    }
                break;
            }
            case LayerKind::Flatten: {
                Tensor& dx = din(0);
                for (std::size_t k = 0; k < dy.v.size(); ++k) dx.v[k] += dy.v[k];
                break;
            }
            case LayerKind::Dense: {
                Tensor& dx = din(0);
                const Tensor& x = xin(0);
                kern::gemm_nn(B, l.in_ch, l.out_ch, dy.data(), p.w[0].data(), dx.data(), 1.0f);
                kern::gemm_tn(l.out_ch, l.in_ch, B, dy.data(), x.data(), p.g[0].data(), 1.0f);
                if (l.bias)
                    for (int b = 0; b < B; ++b)
                        for (int o = 0; o < l.out_ch; ++o)
                            p.g[1].v[o] += dy.v[static_cast<std::int64_t>(b) * l.out_ch + o];
                break;
            }
            case LayerKind::Softmax: {
                Tensor& dx = din(0);
                const Tensor& y = ws.act[ii];
                const int n = l.out_ch;
                for (int b = 0; b < B; ++b) {
                    const float* yr = y.data() + static_cast<std::int64_t>(b) * n;
                    const float* gr = dy.data() + static_cast<std::int64_t>(b) * n;
                    float dot = 0.0f;
                    for (int j = 0; j < n; ++j) dot += gr[j] * yr[j];
                    float* dxr = dx.data() + static_cast<std::int64_t>(b) * n;
                    for (int j = 0; j < n; ++j) dxr[j] += yr[j] * (gr[j] - dot);
                }
                break;
            }
            case LayerKind::Sigmoid: {
                Tensor& dx = din(0);
                const Tensor& y = ws.act[ii];
                for (std::size_t k = 0; k < y.v.size(); ++k)
                    dx.v[k] += dy.v[k] * y.v[k] * (1.0f - y.v[k]);
                break;
            }
        }
    }
}

void Network::zero_grads() {
    for (auto& p : params_)
        for (auto& g : p.g) g.zero();
}

void Network::sgd_step(float lr, float momentum, float l2_weight) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const LayerDesc& l = graph_.layers[i];
        LayerParams& p = params_[i];
        if (p.m.empty() && momentum != 0.0f)
            for (auto& g : p.g) p.m.emplace_back(g.shape);
        for (std::size_t t = 0; t < p.g.size(); ++t) {
            float* w = p.w[t].data();
            float* g = p.g[t].data();
            bool l2 = l2_weight > 0.0f && l2_applies(l, static_cast<int>(t));
            std::int64_t n = p.g[t].numel();
            if (momentum != 0.0f) {
                float* m = p.m[t].data();
                for (std::int64_t k = 0; k < n; ++k) {
                    float grad = g[k] + (l2 ? 2.0f * l2_weight * w[k] : 0.0f);
                    m[k] = momentum * m[k] - lr * grad;
                    w[k] += m[k];
                }
            } else {
                for (std::int64_t k = 0; k < n; ++k) {
                    float grad = g[k] + (l2 ? 2.0f * l2_weight * w[k] : 0.0f);
                    w[k] -= lr * grad;
                }
            }
        }
    }
}

double Network::l2_penalty() const {
    double s = 0.0;
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (!l2_applies(graph_.layers[i], 0)) continue;
        for (float v : params_[i].w[0].v) s += static_cast<double>(v) * v;
    }
    return s;
}

void Network::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::string name = spec_name(named_);
    f.write("TNKW", 4);
    std::uint8_t ver = 1;
    f.write(reinterpret_cast<const char*>(&ver), 1);
    std::uint16_t nl = static_cast<std::uint16_t>(name.size());
    f.write(reinterpret_cast<const char*>(&nl), 2);
    f.write(name.data(), nl);
    std::uint16_t board = static_cast<std::uint16_t>(named_.spec.board);
    f.write(reinterpret_cast<const char*>(&board), 2);
    for (const auto& p : params_)
        for (const auto& t : p.w) {
            std::uint64_t n = static_cast<std::uint64_t>(t.numel());
            f.write(reinterpret_cast<const char*>(&n), 8);
            f.write(reinterpret_cast<const char*>(t.v.data()), static_cast<std::streamsize>(n * 4));
        }
    if (!f) throw std::runtime_error("short write to " + path);
}

Network Network::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "TNKW", 4) != 0)
        throw FormatError("bad checkpoint magic", 0);
    std::uint8_t ver = 0;
    f.read(reinterpret_cast<char*>(&ver), 1);
    if (ver != 1) throw FormatError("unsupported checkpoint version", 4);
    std::uint16_t nl = 0;
    f.read(reinterpret_cast<char*>(&nl), 2);
    std::string name(nl, '\0');
    f.read(name.data(), nl);
    std::uint16_t board = 0;
    f.read(reinterpret_cast<char*>(&board), 2);
    if (!f) throw FormatError("truncated checkpoint header", static_cast<std::size_t>(f.tellg()));

    Network net(parse_spec_name(name, board));
    for (auto& p : net.params_)
        for (auto& t : p.w) {
            std::uint64_t n = 0;
            f.read(reinterpret_cast<char*>(&n), 8);
            if (!f || n != static_cast<std::uint64_t>(t.numel()))
                throw FormatError("checkpoint tensor size mismatch", static_cast<std::size_t>(f.tellg()));
            f.read(reinterpret_cast<char*>(t.v.data()), static_cast<std::streamsize>(n * 4));
            if (!f) throw FormatError("truncated checkpoint", static_cast<std::size_t>(f.tellg()));
        }
    return net;
}

}  // namespace tenuki
