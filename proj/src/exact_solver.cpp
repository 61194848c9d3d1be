#include "tgm/exact_solver.hpp"

#include "tgm/errors.hpp"
#include "tgm/format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace tgm {

namespace {

void check_cap(const SequenceSpace& space, std::uint64_t cap) {
    const std::uint64_t nt = space.nonterminal_count();
    const std::uint64_t t = space.terminal_count();
    if (nt > cap || t > cap || nt + t > cap) {
        throw CapacityError("space too large for enumeration");
    }
}

// Calls fn(prefix) for every token prefix of the given length, lexicographically.
void for_each_prefix(std::size_t length, std::size_t vocab,
                     const std::function<void(const TokenSeq&)>& fn) {
    TokenSeq prefix(length, '\0');
    while (true) {
        fn(prefix);
        std::size_t pos = length;
        while (pos > 0) {
            --pos;
            auto digit = static_cast<unsigned char>(prefix[pos]);
            if (digit + 1u < vocab) {
                prefix[pos] = static_cast<char>(digit + 1u);
                break;
            }
            prefix[pos] = '\0';
            if (pos == 0) {
                return;
            }
        }
        if (length == 0) {
            return;
        }
    }
}

double checked_reward(const SequenceSpace& space, const RewardModel& reward, const TokenSeq& x) {
    const double r = reward.reward(x);
    if (!std::isfinite(r)) {
        throw NumericalError("non-finite reward for sequence '" + space.render(x) + "'");
    }
    return r;
}

} // namespace

double ValueTable::value(const State& s) const {
    if (s.terminal) {
        return 0.0;
    }
    const auto it = values_.find(s.prefix);
    if (it == values_.end()) {
        throw std::out_of_range("no value for state");
    }
    return it->second;
}

const ActionVector& PolicyTable::at(const State& s) const {
    const auto it = table_.find(s.prefix);
    if (s.terminal || it == table_.end()) {
        throw std::invalid_argument("missing policy entry for a reachable state");
    }
    return it->second;
}

Policy PolicyTable::as_policy() const {
    return [this](const State& s) { return at(s); };
}

Solution solve_backward(const SequenceSpace& space, const RewardModel& reward,
                        const GmParams& params, std::uint64_t cap) {
    params.validate();
    check_cap(space, cap);
    Solution sol;
    const std::size_t deepest = space.variable_length() ? space.max_len() : space.max_len() - 1;
    for (std::size_t len = deepest + 1; len-- > 0;) {
        for_each_prefix(len, space.vocab_size(), [&](const TokenSeq& prefix) {
            const State s{prefix, false};
            const auto kids = children(space, s);
            ActionVector q(kids.size());
            for (const auto& child : kids) {
                q[child.action] = child.state.terminal
                                      ? checked_reward(space, reward, child.state.prefix)
                                      : sol.values.value(child.state);
            }
            sol.values.set(prefix, gm_backup(q, params));
            sol.policy.set(prefix, gm_optimal_policy(q, params));
            sol.q.set(space, s, std::move(q));
        });
    }
    return sol;
}

TerminalDistribution terminal_distribution(const SequenceSpace& space, const Policy& policy,
                                           std::uint64_t cap) {
    check_cap(space, cap);
    TerminalDistribution dist;
    std::function<void(const State&, double)> visit = [&](const State& s, double p) {
        if (s.terminal) {
            dist[s.prefix] += p;
            return;
        }
        const ActionVector probs = policy(s);
        const auto kids = children(space, s);
        if (probs.size() != kids.size()) {
            throw std::invalid_argument("policy arity does not match the state's action count");
        }
        check_distribution(probs);
        for (const auto& child : kids) {
            if (probs[child.action] > 0.0) {
                visit(child.state, p * probs[child.action]);
            }
        }
    };
    visit(space.root(), 1.0);
    return dist;
}

TerminalDistribution terminal_distribution(const SequenceSpace& space, const PolicyTable& policy,
                                           std::uint64_t cap) {
    return terminal_distribution(space, policy.as_policy(), cap);
}

double check_trajectory_consistency(const SequenceSpace& space, const RewardModel& reward,
                                    const GmParams& params, const QFunction& q,
                                    std::uint64_t cap) {
    const Solution sol = solve_backward(space, reward, params, cap);
    const double v0 = sol.values.value(space.root());
    double worst = 0.0;
    std::function<void(const State&, double)> visit = [&](const State& s, double g_sum) {
        if (s.terminal) {
            const double residual = v0 + g_sum - checked_reward(space, reward, s.prefix);
            worst = std::max(worst, std::abs(residual));
            return;
        }
        const ActionVector qs = q.values(space, s);
        for (const auto& child : children(space, s)) {
            visit(child.state, g_sum + gm_consistency_term(qs, child.action, params));
        }
    };
    visit(space.root(), 0.0);
    return worst;
}

std::vector<QuantileMass> quantile_mass_report(const SequenceSpace& space,
                                               const RewardModel& reward, const Policy& policy,
                                               std::size_t buckets, std::uint64_t cap) {
    if (buckets == 0) {
        throw std::invalid_argument("bucket count must be positive");
    }
    const TerminalDistribution dist = terminal_distribution(space, policy, cap);
    std::vector<std::pair<double, double>> rows; // (reward, probability)
    rows.reserve(dist.size());
    for (const auto& [x, p] : dist) {
        rows.emplace_back(checked_reward(space, reward, x), p);
    }
    // Terminals with zero probability are pruned from `dist`; rank over all of them.
    std::vector<double> all_rewards;
    all_rewards.reserve(space.terminal_count());
    for_each_terminal(
        space, [&](const TokenSeq& x) { all_rewards.push_back(checked_reward(space, reward, x)); },
        cap);
    std::sort(all_rewards.begin(), all_rewards.end());
    const double n = static_cast<double>(all_rewards.size());

    std::vector<QuantileMass> out(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        out[b].quantile_lo = static_cast<double>(b) / static_cast<double>(buckets);
        out[b].quantile_hi = static_cast<double>(b + 1) / static_cast<double>(buckets);
        out[b].mass = 0.0;
    }
    for (const auto& [r, p] : rows) {
        const auto rank = static_cast<double>(
            std::lower_bound(all_rewards.begin(), all_rewards.end(), r) - all_rewards.begin());
        const auto bucket = std::min(
            buckets - 1, static_cast<std::size_t>(rank * static_cast<double>(buckets) / n));
        out[bucket].mass += p;
    }
    return out;
}

void write_quantiles_csv(std::ostream& out, const std::vector<QuantileMass>& rows) {
    out << "quantile_lo,quantile_hi,mass\n";
    for (const auto& row : rows) {
        out << format_double(row.quantile_lo) << ',' << format_double(row.quantile_hi) << ','
            << format_double(row.mass) << '\n';
    }
}

double expected_reward(const TerminalDistribution& dist, const RewardModel& reward) {
    double total = 0.0;
    for (const auto& [x, p] : dist) {
        total += p * reward.reward(x);
    }
    return total;
}

} // namespace tgm
