#pragma once

// Trajectory general mellowmax (TGM) training of a tabular Q-function.
//
// Each trajectory contributes the statistic
//   S(tau) = sum_i g(Q_{s_i}, a_i) - r(x),
// and the VarGrad loss is the population variance of S over a batch. At the
// optimum every S equals -v*_0, so the loss vanishes without learning v*_0.

#include "tgm/dcg.hpp"
#include "tgm/q_function.hpp"
#include "tgm/regularizers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace tgm {

struct TrainConfig {
    GmParams params;
    std::size_t batch_size = 16;
    double learning_rate = 1e-2;
    std::size_t steps = 1000;
    double explore_eps = 0.01;
    double grad_clip = 10.0;
    double adam_eps = 1e-5;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    void validate() const;
};

struct TrainRecord {
    std::size_t step;
    double loss;
    double mean_reward;
    std::size_t samples;
};

struct TrainLog {
    std::vector<TrainRecord> records;

    void write_csv(std::ostream& out) const;
};

struct LossResult {
    double loss;
    std::vector<double> statistics;
};

/// Gradient entries keyed by state prefix; arity matches the state.
using QGradient = std::map<TokenSeq, ActionVector>;

LossResult vargrad_loss(const SequenceSpace& space, std::span<const Trajectory> batch,
                        const QFunction& q, const GmParams& params);

/// Exact gradient of vargrad_loss. Only states touched by the batch appear.
QGradient vargrad_gradient(const SequenceSpace& space, std::span<const Trajectory> batch,
                           const QFunction& q, const GmParams& params);

/// Samples with softmax_{(q alpha + omega) t}(Q_s). The QFunction and space
/// must outlive the returned policy.
Policy policy_from_q(const SequenceSpace& space, const QFunction& q, const GmParams& params,
                     double temperature_modifier = 1.0);

/// Called once per step with the freshly sampled batch.
using BatchObserver = std::function<void(std::size_t step, std::span<const Trajectory>)>;

struct TrainResult {
    QFunction q;
    TrainLog log;
};

/// Online training: sample from (1 - eps) pi_Q + eps uniform, compute the VarGrad
/// loss and gradient, clip by global L2 norm, apply a bias-corrected Adam step.
TrainResult train(const SequenceSpace& space, const RewardModel& reward, const TrainConfig& config,
                  const BatchObserver& observer = {});

} // namespace tgm
