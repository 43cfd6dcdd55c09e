#include "tenuki/netspec.hpp"

#include <algorithm>
#include <sstream>

namespace tenuki {

namespace {

std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '.')) out.push_back(tok);
    return out;
}

bool is_number(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

NamedSpec named_shortcut(const std::string& family, const std::vector<std::string>& toks, int board) {
    // toks starts after "small".
    bool conv = false, bin = false;
    int valw = 1;
    for (const auto& t : toks) {
        if (t == "conv") conv = true;
        else if (t == "bin") bin = true;
        else if (t == "avg") continue;
        else if (t.rfind("val", 0) == 0 && is_number(t.substr(3))) valw = std::stoi(t.substr(3));
        else throw ConfigError("unknown token '" + t + "' in spec name");
    }
    NamedSpec n;
    n.spec.board = board;
    n.value_weight = valw;
    if (family == "a0" && !conv) {
        n.spec = {BlockFamily::AzResidual, 10, 63, 0, PolicyHead::AzDense, 21, board};
        n.value_loss = ValueLoss::Mse;
    } else if (family == "a0") {
        n.spec = {BlockFamily::GoloisResidual, 13, 64, 0, PolicyHead::FullyConv, 21, board};
        n.value_loss = ValueLoss::Bce;
    } else if (family == "mobile" && !conv) {
        n.spec = {BlockFamily::MobileBottleneck, 25, 64, 200, PolicyHead::AzDense, 21, board};
        n.value_loss = ValueLoss::Mse;
    } else {
        n.spec = {BlockFamily::MobileBottleneck, 33, 64, 200, PolicyHead::FullyConv, 21, board};
        n.value_loss = ValueLoss::Bce;
    }
    if (bin) n.value_loss = ValueLoss::Bce;
    return n;
}

}  // namespace

NamedSpec parse_spec_name(const std::string& name, int board) {
    auto toks = split_dots(name);
    if (toks.size() < 2) throw ConfigError("bad spec name '" + name + "'");
    const std::string family = toks[0];
    if (family != "a0" && family != "mobile")
        throw ConfigError("unknown network family '" + family + "'");

    if (toks[1] == "small")
        return named_shortcut(family, {toks.begin() + 2, toks.end()}, board);

    bool conv = false, bin = false;
    int valw = 1;
    std::vector<int> nums;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (is_number(t)) nums.push_back(std::stoi(t));
        else if (!nums.empty()) throw ConfigError("trailing token '" + t + "' in spec name");
        else if (t == "conv") conv = true;
        else if (t == "avg") continue;
        else if (t == "bin") bin = true;
        else if (t.rfind("val", 0) == 0 && is_number(t.substr(3))) valw = std::stoi(t.substr(3));
        else throw ConfigError("unknown token '" + t + "' in spec name");
    }

    NamedSpec n;
    n.spec.board = board;
    n.value_loss = bin ? ValueLoss::Bce : ValueLoss::Mse;
    n.value_weight = valw;
    n.spec.policy = conv ? PolicyHead::FullyConv : PolicyHead::AzDense;
    if (family == "a0") {
        n.spec.family = conv ? BlockFamily::GoloisResidual : BlockFamily::AzResidual;
        if (nums.size() != 2) throw ConfigError("a0 specs need blocks.trunk, got '" + name + "'");
        n.spec.blocks = nums[0];
        n.spec.trunk = nums[1];
    } else {
        n.spec.family = BlockFamily::MobileBottleneck;
        if (nums.size() != 3) throw ConfigError("mobile specs need blocks.trunk.filters, got '" + name + "'");
        n.spec.blocks = nums[0];
        n.spec.trunk = std::min(nums[1], nums[2]);
        n.spec.expand = std::max(nums[1], nums[2]);
    }
    if (n.spec.blocks < 1 || n.spec.trunk < 1)
        throw ConfigError("blocks and widths must be positive in '" + name + "'");
    return n;
}

std::string spec_name(const NamedSpec& n) {
    std::string out = n.spec.family == BlockFamily::MobileBottleneck ? "mobile" : "a0";
    if (n.spec.policy == PolicyHead::FullyConv) out += ".conv.avg";
    if (n.value_loss == ValueLoss::Bce) out += ".bin";
    if (n.value_weight != 1) out += ".val" + std::to_string(n.value_weight);
    out += "." + std::to_string(n.spec.blocks) + "." + std::to_string(n.spec.trunk);
    if (n.spec.family == BlockFamily::MobileBottleneck) out += "." + std::to_string(n.spec.expand);
    return out;
}

LayerGraph build_graph(const NetworkSpec& spec) {
    if (spec.blocks < 1 || spec.trunk < 1) throw ConfigError("invalid spec: widths must be >= 1");
    if (spec.family == BlockFamily::MobileBottleneck && spec.expand < 1)
        throw ConfigError("mobile specs need an expand width");
    if (spec.family == BlockFamily::GoloisResidual && spec.policy != PolicyHead::FullyConv)
        throw ConfigError("golois blocks pair with the fully convolutional policy head");
    if (spec.family == BlockFamily::AzResidual && spec.policy != PolicyHead::AzDense)
        throw ConfigError("az blocks pair with the dense policy head");

    LayerGraph g;
    g.board = spec.board;
    g.input_planes = spec.input_planes;
    auto add = [&](LayerKind kind, int in_ch, int out_ch, bool bias, std::vector<int> inputs) {
        g.layers.push_back({kind, in_ch, out_ch, bias, std::move(inputs)});
        return static_cast<int>(g.layers.size()) - 1;
    };

    int T = spec.trunk;
    int x = add(LayerKind::Input, spec.input_planes, spec.input_planes, false, {});
    x = add(LayerKind::Conv1x1, spec.input_planes, T, true, {x});
    x = add(LayerKind::BatchNorm, T, T, false, {x});
    x = add(LayerKind::Relu, T, T, false, {x});

    for (int b = 0; b < spec.blocks; ++b) {
        int block_in = x;
        switch (spec.family) {
            case BlockFamily::AzResidual:
                x = add(LayerKind::Conv3x3, T, T, true, {x});
                x = add(LayerKind::BatchNorm, T, T, false, {x});
                x = add(LayerKind::Relu, T, T, false, {x});
                x = add(LayerKind::Conv3x3, T, T, true, {x});
                x = add(LayerKind::BatchNorm, T, T, false, {x});
                x = add(LayerKind::Add, T, T, false, {x, block_in});
                x = add(LayerKind::Relu, T, T, false, {x});
                break;
            case BlockFamily::GoloisResidual:
                x = add(LayerKind::Conv3x3, T, T, true, {x});
                x = add(LayerKind::Relu, T, T, false, {x});
                x = add(LayerKind::Conv3x3, T, T, true, {x});
                x = add(LayerKind::Relu, T, T, false, {x});
                x = add(LayerKind::Add, T, T, false, {x, block_in});
                x = add(LayerKind::BatchNorm, T, T, false, {x});
                break;
            case BlockFamily::MobileBottleneck: {
                int E = spec.expand;
                x = add(LayerKind::Conv1x1, T, E, false, {x});
                x = add(LayerKind::BatchNorm, E, E, false, {x});
                x = add(LayerKind::Relu, E, E, false, {x});
                x = add(LayerKind::DwConv3x3, E, E, false, {x});
                x = add(LayerKind::BatchNorm, E, E, false, {x});
                x = add(LayerKind::Relu, E, E, false, {x});
                x = add(LayerKind::Conv1x1, E, T, false, {x});
                x = add(LayerKind::BatchNorm, T, T, false, {x});
                x = add(LayerKind::Add, T, T, false, {x, block_in});
                break;
            }
        }
    }
    int trunk_out = x;
    int points = spec.board * spec.board;

    int p;
    if (spec.policy == PolicyHead::AzDense) {
        p = add(LayerKind::Conv1x1, T, 2, true, {trunk_out});
        p = add(LayerKind::BatchNorm, 2, 2, false, {p});
        p = add(LayerKind::Relu, 2, 2, false, {p});
        p = add(LayerKind::Flatten, 2, 2 * points, false, {p});
        p = add(LayerKind::Dense, 2 * points, points, true, {p});
    } else {
        p = add(LayerKind::Conv1x1, T, 1, false, {trunk_out});
        p = add(LayerKind::Relu, 1, 1, false, {p});
        p = add(LayerKind::Flatten, 1, points, false, {p});
    }
    g.policy_out = add(LayerKind::Softmax, points, points, false, {p});

    int v = add(LayerKind::GlobalAvgPool, T, T, false, {trunk_out});
    v = add(LayerKind::Dense, T, 50, true, {v});
    v = add(LayerKind::Relu, 50, 50, false, {v});
    v = add(LayerKind::Dense, 50, 1, true, {v});
    g.value_out = add(LayerKind::Sigmoid, 1, 1, false, {v});
    return g;
}

std::int64_t layer_param_count(const LayerDesc& l) {
    std::int64_t in = l.in_ch, out = l.out_ch;
    switch (l.kind) {
        case LayerKind::Conv1x1: return in * out + (l.bias ? out : 0);
        case LayerKind::Conv3x3: return 9 * in * out + (l.bias ? out : 0);
        case LayerKind::DwConv3x3: return 9 * in;
        case LayerKind::BatchNorm: return 4 * out;  // scale, shift, running mean/var
        case LayerKind::Dense: return in * out + (l.bias ? out : 0);
        default: return 0;
    }
}

std::int64_t count_params(const LayerGraph& g) {
    std::int64_t total = 0;
    for (const auto& l : g.layers) total += layer_param_count(l);
    return total;
}

std::int64_t count_params(const NetworkSpec& spec) {
    std::int64_t T = spec.trunk, E = spec.expand, P = spec.input_planes;
    std::int64_t S2 = static_cast<std::int64_t>(spec.board) * spec.board;
    std::int64_t total = P * T + T + 4 * T;  // stem conv + bias + bn
    switch (spec.family) {
        case BlockFamily::AzResidual: total += spec.blocks * (18 * T * T + 10 * T); break;
        case BlockFamily::GoloisResidual: total += spec.blocks * (18 * T * T + 6 * T); break;
        case BlockFamily::MobileBottleneck: total += spec.blocks * (2 * T * E + 17 * E + 4 * T); break;
    }
    if (spec.policy == PolicyHead::AzDense)
        total += (2 * T + 2) + 8 + (2 * S2 * S2 + S2);
    else
        total += T;
    total += 50 * T + 50 + 51;  // gap value head
    return total;
}

}  // namespace tenuki
