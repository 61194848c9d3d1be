#include "tgm/train.hpp"

#include "tgm/errors.hpp"
#include "tgm/format.hpp"
#include "tgm/rng.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tgm {

namespace {

void check_batch(std::span<const Trajectory> batch) {
    if (batch.size() < 2) {
        throw std::invalid_argument("variance undefined for a batch of fewer than 2 trajectories");
    }
    for (const auto& traj : batch) {
        if (traj.steps.empty()) {
            throw std::invalid_argument("trajectory has no steps");
        }
    }
}

double statistic(const SequenceSpace& space, const Trajectory& traj, const QFunction& q,
                 const GmParams& params) {
    double s = 0.0;
    for (const auto& step : traj.steps) {
        s += gm_consistency_term(q.values(space, step.state), step.action, params);
    }
    return s - traj.reward;
}

struct AdamState {
    ActionVector m;
    ActionVector v;
};

} // namespace

void TrainConfig::validate() const {
    params.validate();
    if (batch_size < 2) {
        throw std::invalid_argument("batch_size must be at least 2");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("learning_rate must be positive");
    }
    if (!(explore_eps >= 0.0 && explore_eps < 1.0)) {
        throw std::invalid_argument("explore_eps must lie in [0, 1)");
    }
    if (!(grad_clip > 0.0)) {
        throw std::invalid_argument("grad_clip must be positive");
    }
    if (!(adam_eps > 0.0)) {
        throw std::invalid_argument("adam_eps must be positive");
    }
}

void TrainLog::write_csv(std::ostream& out) const {
    out << "step,loss,mean_reward,samples\n";
    for (const auto& r : records) {
        out << r.step << ',' << format_double(r.loss) << ',' << format_double(r.mean_reward)
            << ',' << r.samples << '\n';
    }
}

LossResult vargrad_loss(const SequenceSpace& space, std::span<const Trajectory> batch,
                        const QFunction& q, const GmParams& params) {
    params.validate();
    check_batch(batch);
    LossResult out;
    out.statistics.reserve(batch.size());
    double mean = 0.0;
    for (const auto& traj : batch) {
        out.statistics.push_back(statistic(space, traj, q, params));
        mean += out.statistics.back();
    }
    mean /= static_cast<double>(batch.size());
    double var = 0.0;
    for (double s : out.statistics) {
        var += (s - mean) * (s - mean);
    }
    out.loss = var / static_cast<double>(batch.size());
    return out;
}

QGradient vargrad_gradient(const SequenceSpace& space, std::span<const Trajectory> batch,
                           const QFunction& q, const GmParams& params) {
    const LossResult loss = vargrad_loss(space, batch, q, params);
    const double n = static_cast<double>(batch.size());
    double mean = 0.0;
    for (double s : loss.statistics) {
        mean += s;
    }
    mean /= n;

    QGradient grad;
    ActionVector dg;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        // dL/dS_j; the mean's own dependence cancels because sum_j (S_j - mean) = 0.
        const double coeff = 2.0 * (loss.statistics[j] - mean) / n;
        for (const auto& step : batch[j].steps) {
            const ActionVector qs = q.values(space, step.state);
            dg.assign(qs.size(), 0.0);
            gm_consistency_gradient(qs, step.action, params, dg);
            auto [it, inserted] = grad.try_emplace(step.state.prefix);
            if (inserted) {
                it->second.assign(qs.size(), 0.0);
            }
            for (std::size_t b = 0; b < qs.size(); ++b) {
                it->second[b] += coeff * dg[b];
            }
        }
    }
    return grad;
}

Policy policy_from_q(const SequenceSpace& space, const QFunction& q, const GmParams& params,
                     double temperature_modifier) {
    if (!(temperature_modifier > 0.0) || !std::isfinite(temperature_modifier)) {
        throw std::invalid_argument("temperature modifier must be positive");
    }
    params.validate();
    const double tau = params.policy_temperature() * temperature_modifier;
    return [&space, &q, tau](const State& s) { return softmax(q.values(space, s), tau); };
}

TrainResult train(const SequenceSpace& space, const RewardModel& reward, const TrainConfig& config,
                  const BatchObserver& observer) {
    config.validate();
    TrainResult result{QFunction(0.0), {}};
    QFunction& q = result.q;
    std::map<TokenSeq, AdamState> adam;

    const double tau = config.params.policy_temperature();
    const double eps = config.explore_eps;
    const Policy behaviour = [&](const State& s) {
        ActionVector p = softmax(q.values(space, s), tau);
        const double u = 1.0 / static_cast<double>(p.size());
        for (double& x : p) {
            x = (1.0 - eps) * x + eps * u;
        }
        return p;
    };

    std::size_t samples = 0;
    for (std::size_t step = 0; step < config.steps; ++step) {
        const std::vector<Trajectory> batch =
            rollout_batch(space, reward, behaviour, stream_seed(config.seed, step),
                          config.batch_size, config.threads);
        samples += batch.size();
        if (observer) {
            observer(step, batch);
        }

        const LossResult loss = vargrad_loss(space, batch, q, config.params);
        if (!std::isfinite(loss.loss)) {
            std::size_t bad = 0;
            while (bad < loss.statistics.size() && std::isfinite(loss.statistics[bad])) {
                ++bad;
            }
            const std::string which =
                bad < batch.size() ? space.render(batch[bad].object) : std::string("?");
            throw NumericalError("non-finite loss at step " + std::to_string(step) +
                                 " (trajectory ending at '" + which + "')");
        }
        double mean_reward = 0.0;
        for (const auto& traj : batch) {
            mean_reward += traj.reward;
        }
        mean_reward /= static_cast<double>(batch.size());
        result.log.records.push_back({step, loss.loss, mean_reward, samples});

        QGradient grad = vargrad_gradient(space, batch, q, config.params);
        double sq_norm = 0.0;
        for (const auto& [prefix, g] : grad) {
            for (double x : g) {
                sq_norm += x * x;
            }
        }
        const double norm = std::sqrt(sq_norm);
        const double scale = norm > config.grad_clip ? config.grad_clip / norm : 1.0;

        // Adam moments are kept per entry; entries absent from this batch's
        // gradient are not updated (sparse, lazy variant).
        const double t = static_cast<double>(step + 1);
        const double bc1 = 1.0 - std::pow(config.adam_beta1, t);
        const double bc2 = 1.0 - std::pow(config.adam_beta2, t);
        for (auto& [prefix, g] : grad) {
            const State s{prefix, false};
            ActionVector& params = q.entry(space, s);
            auto [it, inserted] = adam.try_emplace(prefix);
            if (inserted) {
                it->second.m.assign(g.size(), 0.0);
                it->second.v.assign(g.size(), 0.0);
            }
            AdamState& st = it->second;
            for (std::size_t b = 0; b < g.size(); ++b) {
                const double gb = g[b] * scale;
                st.m[b] = config.adam_beta1 * st.m[b] + (1.0 - config.adam_beta1) * gb;
                st.v[b] = config.adam_beta2 * st.v[b] + (1.0 - config.adam_beta2) * gb * gb;
                const double m_hat = st.m[b] / bc1;
                const double v_hat = st.v[b] / bc2;
                params[b] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_eps);
            }
        }
    }
    return result;
}

} // namespace tgm
