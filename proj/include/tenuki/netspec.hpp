#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenuki/goban.hpp"

namespace tenuki {

enum class BlockFamily { AzResidual, GoloisResidual, MobileBottleneck };
enum class PolicyHead { AzDense, FullyConv };
enum class ValueLoss { Mse, Bce };

struct NetworkSpec {
    BlockFamily family = BlockFamily::AzResidual;
    int blocks = 1;
    int trunk = 64;
    int expand = 0;  // mobile blocks only
    PolicyHead policy = PolicyHead::AzDense;
    int input_planes = 21;
    int board = 19;

    bool operator==(const NetworkSpec&) const = default;
};

// A spec plus the training options carried in the canonical name.
struct NamedSpec {
    NetworkSpec spec;
    ValueLoss value_loss = ValueLoss::Mse;
    int value_weight = 1;

    bool operator==(const NamedSpec&) const = default;
};

// Canonical grammar: family[.conv][.avg][.bin][.valW].blocks[.trunk[.filters]]
// plus the named shortcuts a0.small, a0.small.conv, mobile.small,
// mobile.small.conv. Swapped trunk/filters orderings normalize to
// trunk = smaller, filters = larger.
NamedSpec parse_spec_name(const std::string& name, int board = 19);
std::string spec_name(const NamedSpec& n);

enum class LayerKind {
    Input,
    Conv1x1,
    Conv3x3,
    DwConv3x3,
    BatchNorm,
    Relu,
    Add,
    GlobalAvgPool,
    Dense,
    Flatten,
    Softmax,
    Sigmoid,
};

struct LayerDesc {
    LayerKind kind = LayerKind::Input;
    int in_ch = 0;
    int out_ch = 0;
    bool bias = false;
    std::vector<int> inputs;
};

struct LayerGraph {
    int board = 19;
    int input_planes = 21;
    std::vector<LayerDesc> layers;
    int policy_out = -1;
    int value_out = -1;
};

LayerGraph build_graph(const NetworkSpec& spec);

// Closed-form parameter count; count_params(build_graph(spec)) is the
// independent per-layer enumeration and must agree.
std::int64_t count_params(const NetworkSpec& spec);
std::int64_t count_params(const LayerGraph& g);
std::int64_t layer_param_count(const LayerDesc& l);

}  // namespace tenuki
