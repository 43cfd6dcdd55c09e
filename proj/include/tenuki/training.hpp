#pragma once

#include <iosfwd>
#include <vector>

#include "tenuki/network.hpp"
#include "tenuki/records.hpp"

namespace tenuki {

struct TrainConfig {
    ValueLoss value_loss = ValueLoss::Mse;
    float value_weight = 1.0f;
    float l2_weight = 1e-4f;
    int batch_size = 256;
    std::int64_t epoch_samples = 1'000'000;
    std::vector<std::pair<int, float>> schedule = {{0, 0.005f}, {100, 0.0005f}, {150, 0.00005f}};
    int total_epochs = 200;
    float momentum = 0.0f;
    std::uint64_t seed = 1;
};

struct Metrics {
    int epoch = 0;
    float lr = 0.0f;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double l2_loss = 0.0;
    double val_accuracy = 0.0;
    double val_mse = 0.0;
};

float lr_at(const TrainConfig& cfg, int epoch);

struct LossResult {
    double total = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;  // includes the value weight
    double l2_loss = 0.0;
    Tensor dpolicy;
    Tensor dvalue;
};

// Categorical cross-entropy + weighted value loss + L2 penalty, with the
// gradients w.r.t. the network outputs. Throws NumericError on NaN/Inf.
LossResult compute_loss(const Tensor& policy, const Tensor& value,
                        const std::vector<int>& policy_targets,
                        const std::vector<float>& value_targets,
                        const TrainConfig& cfg, double l2_penalty);

// Batch assembly: {B, 21, S, S} input plus flat targets.
Tensor batch_input(const std::vector<Sample>& samples);

Metrics evaluate(const Network& net, const std::vector<Sample>& validation);

struct TrainResult {
    Network net;
    std::vector<Metrics> log;
};

// checkpoint_path, when non-empty, is written after every epoch.
// csv, when non-null, receives one header plus one row per epoch.
TrainResult train(const NetworkSpec& spec, const Split& split, const TrainConfig& cfg,
                  const std::string& checkpoint_path = "", std::ostream* csv = nullptr);

void write_metrics_header(std::ostream& os);
void write_metrics_row(std::ostream& os, const Metrics& m);

}  // namespace tenuki
