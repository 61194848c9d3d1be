#pragma once

// Exact solving of GM-regularized DCGs by backward recursion over the tree,
// plus exhaustive checks that only make sense on enumerable spaces.

#include "tgm/dcg.hpp"
#include "tgm/q_function.hpp"
#include "tgm/regularizers.hpp"

#include <iosfwd>
#include <map>
#include <vector>

namespace tgm {

/// State values. Terminal states always have value 0 and are not stored.
class ValueTable {
public:
    double value(const State& s) const;
    void set(const TokenSeq& prefix, double v) { values_[prefix] = v; }
    const std::map<TokenSeq, double>& nonterminal() const { return values_; }

private:
    std::map<TokenSeq, double> values_;
};

/// Explicit per-state action distributions.
class PolicyTable {
public:
    const ActionVector& at(const State& s) const;
    void set(const TokenSeq& prefix, ActionVector dist) { table_[prefix] = std::move(dist); }
    const std::map<TokenSeq, ActionVector>& entries() const { return table_; }

    /// Provider view for rollout. The table must outlive the returned policy.
    Policy as_policy() const;

private:
    std::map<TokenSeq, ActionVector> table_;
};

struct Solution {
    ValueTable values;
    PolicyTable policy;
    QFunction q; ///< Q_s[a] = v(child) + r(s, a)
};

/// Backward recursion in decreasing prefix length. Rewards beta * phi(x) sit on
/// the transition that produces the terminal state.
Solution solve_backward(const SequenceSpace& space, const RewardModel& reward,
                        const GmParams& params, std::uint64_t cap = kDefaultEnumerationCap);

using TerminalDistribution = std::map<TokenSeq, double>;

/// Probability of every terminal: product of edge probabilities along its path.
TerminalDistribution terminal_distribution(const SequenceSpace& space, const Policy& policy,
                                           std::uint64_t cap = kDefaultEnumerationCap);
TerminalDistribution terminal_distribution(const SequenceSpace& space, const PolicyTable& policy,
                                           std::uint64_t cap = kDefaultEnumerationCap);

/// max over all root-to-terminal trajectories of
/// |v*_0 + sum_i g(Q_{s_i}, a_i) - r(x)|, with v*_0 from solve_backward.
double check_trajectory_consistency(const SequenceSpace& space, const RewardModel& reward,
                                    const GmParams& params, const QFunction& q,
                                    std::uint64_t cap = kDefaultEnumerationCap);

struct QuantileMass {
    double quantile_lo;
    double quantile_hi;
    double mass;
};

/// Terminal probability mass grouped by reward quantile bucket. Terminals are
/// ranked by reward over the uniform distribution on terminals; tied rewards
/// share the bucket of their lowest rank.
std::vector<QuantileMass> quantile_mass_report(const SequenceSpace& space,
                                               const RewardModel& reward, const Policy& policy,
                                               std::size_t buckets = 10,
                                               std::uint64_t cap = kDefaultEnumerationCap);

void write_quantiles_csv(std::ostream& out, const std::vector<QuantileMass>& rows);

/// Expected terminal reward (beta-scaled) under a terminal distribution.
double expected_reward(const TerminalDistribution& dist, const RewardModel& reward);

} // namespace tgm
