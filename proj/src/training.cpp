#include "tenuki/training.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

namespace tenuki {

namespace {
constexpr float kValueClamp = 1e-7f;
}

float lr_at(const TrainConfig& cfg, int epoch) {
    if (epoch < 0 || epoch >= cfg.total_epochs)
        throw ConfigError("epoch " + std::to_string(epoch) + " outside the schedule");
    float lr = cfg.schedule.front().second;
    for (const auto& [start, rate] : cfg.schedule)
        if (start <= epoch) lr = rate;
    return lr;
}

LossResult compute_loss(const Tensor& policy, const Tensor& value,
                        const std::vector<int>& policy_targets,
                        const std::vector<float>& value_targets,
                        const TrainConfig& cfg, double l2_penalty) {
    const int B = policy.shape[0];
    const int n = policy.shape[1];
    if (static_cast<int>(policy_targets.size()) != B || static_cast<int>(value_targets.size()) != B)
        throw ConfigError("loss target sizes do not match the batch");
    for (float v : policy.v)
        if (!std::isfinite(v)) throw NumericError("non-finite policy output");
    for (float v : value.v)
        if (!std::isfinite(v)) throw NumericError("non-finite value output");

    LossResult r;
    r.dpolicy = Tensor(policy.shape);
    r.dvalue = Tensor(value.shape);
    const float invB = 1.0f / static_cast<float>(B);

    for (int b = 0; b < B; ++b) {
        float p = policy.v[static_cast<std::int64_t>(b) * n + policy_targets[b]];
        p = std::max(p, kValueClamp);
        r.policy_loss -= std::log(p);
        r.dpolicy.v[static_cast<std::int64_t>(b) * n + policy_targets[b]] = -invB / p;
    }
    r.policy_loss *= invB;

    double vloss = 0.0;
    for (int b = 0; b < B; ++b) {
        float v = value.v[b], t = value_targets[b];
        if (cfg.value_loss == ValueLoss::Mse) {
            vloss += static_cast<double>(v - t) * (v - t);
            r.dvalue.v[b] = cfg.value_weight * 2.0f * (v - t) * invB;
        } else {
            float vc = std::clamp(v, kValueClamp, 1.0f - kValueClamp);
            vloss -= t * std::log(vc) + (1.0f - t) * std::log(1.0f - vc);
            r.dvalue.v[b] = cfg.value_weight * (vc - t) / (vc * (1.0f - vc)) * invB;
        }
    }
    r.value_loss = cfg.value_weight * vloss * invB;
    r.l2_loss = cfg.l2_weight * l2_penalty;
    r.total = r.policy_loss + r.value_loss + r.l2_loss;
    return r;
}

Tensor batch_input(const std::vector<Sample>& samples) {
    if (samples.empty()) throw ConfigError("empty batch");
    const int S = samples[0].input.size;
    Tensor t({static_cast<int>(samples.size()), kInputPlanes, S, S});
    std::int64_t per = static_cast<std::int64_t>(kInputPlanes) * S * S;
    for (std::size_t b = 0; b < samples.size(); ++b) {
        const auto& planes = samples[b].input.planes;
        float* dst = t.data() + b * per;
        for (std::int64_t k = 0; k < per; ++k) dst[k] = planes[k];
    }
    return t;
}

Metrics evaluate(const Network& net, const std::vector<Sample>& validation) {
    Metrics m;
    if (validation.empty()) return m;
    const int chunk = 256;
    std::int64_t correct = 0;
    double mse = 0.0;
    for (std::size_t start = 0; start < validation.size(); start += chunk) {
        std::size_t end = std::min(validation.size(), start + chunk);
        std::vector<Sample> part(validation.begin() + start, validation.begin() + end);
        auto out = net.forward_infer(batch_input(part));
        int n = out.policy.shape[1];
        for (std::size_t b = 0; b < part.size(); ++b) {
            const float* row = out.policy.data() + b * n;
            int best = 0;
            for (int j = 1; j < n; ++j)
                if (row[j] > row[best]) best = j;
            if (best == part[b].policy_target) ++correct;
            double d = out.value.v[b] - part[b].value_target;
            mse += d * d;
        }
    }
    m.val_accuracy = static_cast<double>(correct) / validation.size();
    m.val_mse = mse / validation.size();
    return m;
}

void write_metrics_header(std::ostream& os) {
    os << "epoch,lr,policy_loss,value_loss,l2_loss,val_accuracy,val_mse\n";
}

void write_metrics_row(std::ostream& os, const Metrics& m) {
    os << m.epoch << ',' << m.lr << ',' << m.policy_loss << ',' << m.value_loss << ','
       << m.l2_loss << ',' << m.val_accuracy << ',' << m.val_mse << '\n';
}

TrainResult train(const NetworkSpec& spec, const Split& split, const TrainConfig& cfg,
                  const std::string& checkpoint_path, std::ostream* csv) {
    NamedSpec named{spec, cfg.value_loss, static_cast<int>(cfg.value_weight)};
    TrainResult result{Network(named, cfg.seed), {}};
    Network& net = result.net;
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    if (csv) write_metrics_header(*csv);

    if (cfg.total_epochs == 0 && !checkpoint_path.empty()) net.save(checkpoint_path);

    const std::int64_t steps_per_epoch = std::max<std::int64_t>(1, cfg.epoch_samples / cfg.batch_size);
    for (int epoch = 0; epoch < cfg.total_epochs; ++epoch) {
        float lr = lr_at(cfg, epoch);
        double psum = 0.0, vsum = 0.0, lsum = 0.0;
        try {
            for (std::int64_t step = 0; step < steps_per_epoch; ++step) {
                auto samples = sample_batch(split.train, cfg.batch_size, rng);
                std::vector<int> ptargets(samples.size());
                std::vector<float> vtargets(samples.size());
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    ptargets[i] = samples[i].policy_target;
                    vtargets[i] = samples[i].value_target;
                }
                auto out = net.forward(batch_input(samples), RunMode::Train);
                LossResult loss;
                try {
                    loss = compute_loss(out.policy, out.value, ptargets, vtargets, cfg, net.l2_penalty());
                } catch (const NumericError& e) {
                    throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                                       " step " + std::to_string(step));
                }
                psum += loss.policy_loss;
                vsum += loss.value_loss;
                lsum += loss.l2_loss;
                net.zero_grads();
                net.backward(loss.dpolicy, loss.dvalue);
                net.sgd_step(lr, cfg.momentum, cfg.l2_weight);
            }
        } catch (const NumericError&) {
            // Divergence: keep the last good checkpoint if we have one.
            if (!checkpoint_path.empty() && std::filesystem::exists(checkpoint_path)) {
                result.net = Network::load(checkpoint_path);
                break;
            }
            throw;
        }

        Metrics m = evaluate(net, split.validation);
        m.epoch = epoch;
        m.lr = lr;
        m.policy_loss = psum / steps_per_epoch;
        m.value_loss = vsum / steps_per_epoch;
        m.l2_loss = lsum / steps_per_epoch;
        result.log.push_back(m);
        if (csv) write_metrics_row(*csv, m);
        if (!checkpoint_path.empty()) net.save(checkpoint_path);
    }
    return result;
}

}  // namespace tenuki
