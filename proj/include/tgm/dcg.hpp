#pragma once

// Tree-structured discrete compositional generation (DCG) environments over
// token sequences. A state is identified by its token prefix; a sequence is
// finished either by reaching max_len (fixed-length spaces) or by the STOP
// action (variable-length spaces).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tgm {

/// Real vector indexed by the legal actions of one state.
using ActionVector = std::vector<double>;

/// Token indices, one per byte. Comparison is lexicographic over token
/// indices because std::char_traits<char> compares as unsigned char.
using TokenSeq = std::string;

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

struct State {
    TokenSeq prefix;
    bool terminal = false;

    friend auto operator<=>(const State&, const State&) = default;
};

struct Child {
    std::size_t action; ///< position in the legal-action list
    State state;
};

struct Step {
    State state;
    std::size_t action;
};

struct Trajectory {
    std::vector<Step> steps;
    TokenSeq object;
    double reward = 0.0;
};

class SequenceSpace {
public:
    /// Tokens must be non-empty, distinct and of equal width so rendered
    /// sequences parse back unambiguously. At most 256 tokens.
    SequenceSpace(std::vector<std::string> alphabet, std::size_t min_len, std::size_t max_len,
                  bool variable_length);

    const std::vector<std::string>& alphabet() const { return alphabet_; }
    std::size_t vocab_size() const { return alphabet_.size(); }
    std::size_t min_len() const { return min_len_; }
    std::size_t max_len() const { return max_len_; }
    bool variable_length() const { return variable_length_; }
    std::size_t token_width() const { return alphabet_.front().size(); }

    State root() const { return State{}; }

    /// Number of legal actions at a non-terminal state.
    std::size_t num_actions(const State& s) const;

    /// True when the action at position `action` of `s` is STOP.
    bool is_stop(const State& s, std::size_t action) const;

    /// Child reached from `s` by the action at position `action`.
    State step(const State& s, std::size_t action) const;

    /// Total terminal objects, saturating at UINT64_MAX.
    std::uint64_t terminal_count() const;

    /// Total non-terminal states, saturating at UINT64_MAX.
    std::uint64_t nonterminal_count() const;

    std::string render(const TokenSeq& tokens) const;
    TokenSeq parse(std::string_view text) const;

    /// True when `x` is a valid terminal object of this space.
    bool is_terminal_object(const TokenSeq& x) const;

private:
    void check_state(const State& s) const;

    std::vector<std::string> alphabet_;
    std::size_t min_len_;
    std::size_t max_len_;
    bool variable_length_;
};

/// Legal children of a non-terminal state in canonical order (token order,
/// STOP last).
std::vector<Child> children(const SequenceSpace& space, const State& s);

struct NormalizationStats {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Terminal reward interface. Solvers see beta * (phi(x) - mu) / sigma.
class RewardModel {
public:
    virtual ~RewardModel() = default;

    /// Raw score phi(x). Must be deterministic.
    virtual double evaluate(const TokenSeq& x) const = 0;

    double beta() const { return beta_; }
    const std::optional<NormalizationStats>& stats() const { return stats_; }

    /// Normalized score without beta.
    double normalized(const TokenSeq& x) const;

    /// Reward exposed to solvers and trainers.
    double reward(const TokenSeq& x) const { return beta_ * normalized(x); }

protected:
    explicit RewardModel(double beta, std::optional<NormalizationStats> stats = std::nullopt);

private:
    double beta_;
    std::optional<NormalizationStats> stats_;
};

/// Reward backed by an arbitrary callable.
class FunctionReward final : public RewardModel {
public:
    using Fn = std::function<double(const TokenSeq&)>;

    explicit FunctionReward(Fn fn, double beta = 1.0,
                            std::optional<NormalizationStats> stats = std::nullopt);

    double evaluate(const TokenSeq& x) const override { return fn_(x); }

private:
    Fn fn_;
};

/// Per-state action distribution provider.
using Policy = std::function<ActionVector(const State&)>;

/// Uniform distribution over the legal actions of every state.
Policy uniform_policy(const SequenceSpace& space);

/// Samples one trajectory from the root. Deterministic given `seed`.
Trajectory rollout(const SequenceSpace& space, const RewardModel& reward, const Policy& policy,
                   std::uint64_t seed);

/// `count` rollouts with per-trajectory seeds stream_seed(base_seed, i).
/// Output order follows i regardless of `threads`.
std::vector<Trajectory> rollout_batch(const SequenceSpace& space, const RewardModel& reward,
                                      const Policy& policy, std::uint64_t base_seed,
                                      std::size_t count, std::size_t threads = 1);

/// Visits every terminal object once in lexicographic order.
void for_each_terminal(const SequenceSpace& space, const std::function<void(const TokenSeq&)>& fn,
                       std::uint64_t cap = kDefaultEnumerationCap);

std::vector<TokenSeq> enumerate_terminals(const SequenceSpace& space,
                                          std::uint64_t cap = kDefaultEnumerationCap);

/// Inverse-CDF draw from `probs` with uniform variate `u` in [0, 1).
std::size_t sample_index(const ActionVector& probs, double u);

} // namespace tgm
