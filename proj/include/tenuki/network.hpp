#pragma once

#include <memory>
#include <random>
#include <string>

#include "tenuki/netspec.hpp"
#include "tenuki/tensor.hpp"

namespace tenuki {

enum class RunMode { Train, Infer };

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LayerParams {
    std::vector<Tensor> w;  // weight tensors (layer-kind dependent)
    std::vector<Tensor> g;  // gradients, same shapes
    std::vector<Tensor> m;  // momentum buffers
};

class Network {
public:
    explicit Network(const NamedSpec& named, std::uint64_t seed = 0x5eedULL);
    Network(Network&&) noexcept;
    Network& operator=(Network&&) noexcept;
    ~Network();

    const NamedSpec& named() const { return named_; }
    const NetworkSpec& spec() const { return named_.spec; }
    const LayerGraph& graph() const { return graph_; }

    struct Output {
        Tensor policy;  // {B, board*board}
        Tensor value;   // {B, 1}
    };

    // Infer mode is const and safe to call from multiple threads.
    // Train mode records activations for backward (single writer).
    Output forward(const Tensor& input, RunMode mode);
    Output forward_infer(const Tensor& input) const;

    // dpolicy: dL/d(policy probs), dvalue: dL/d(value). Accumulates weight grads.
    void backward(const Tensor& dpolicy, const Tensor& dvalue);

    void zero_grads();
    void sgd_step(float lr, float momentum, float l2_weight);
    // Sum of squares of the weights subject to L2 (conv/dense kernels only).
    double l2_penalty() const;

    std::vector<LayerParams>& layer_params() { return params_; }
    const std::vector<LayerParams>& layer_params() const { return params_; }
    std::int64_t num_params() const;

    void save(const std::string& path) const;
    static Network load(const std::string& path);

private:
    struct Workspace;
    Output run_forward(const Tensor& input, RunMode mode, Workspace& ws) const;

    NamedSpec named_;
    LayerGraph graph_;
    std::vector<LayerParams> params_;
    std::unique_ptr<Workspace> train_ws_;
};

}  // namespace tenuki
