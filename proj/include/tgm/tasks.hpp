#pragma once

// Benchmark reward models and diversity-aware evaluation.

#include "tgm/dcg.hpp"
#include "tgm/q_function.hpp"
#include "tgm/regularizers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tgm {

/// Unit-cost edit distance.
std::size_t levenshtein(std::string_view x, std::string_view y);

// ---------------------------------------------------------------------------
// Bit-sequence task

/// Sequences of n bits built k bits per action. The alphabet holds the 2^k
/// words in increasing binary order, most significant bit first.
class BitSequenceTask {
public:
    BitSequenceTask(std::size_t n, std::size_t k, std::vector<std::string> modes);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    const std::vector<std::string>& modes() const { return modes_; }

    /// Fixed-length space with n / k tokens.
    SequenceSpace space() const;

    /// 1 - min_y d(bits, y) / n for a bit string of length n.
    double reward_bits(std::string_view bits) const;

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<std::string> modes_;
};

/// `count` distinct random bit strings of length n.
std::vector<std::string> generate_modes(std::size_t n, std::size_t count, std::uint64_t seed);

/// One bit string per line.
std::vector<std::string> read_modes(std::istream& in);
void write_modes(std::ostream& out, const std::vector<std::string>& modes);

/// Reward model for a bit-sequence task over its token space.
class BitSequenceReward final : public RewardModel {
public:
    BitSequenceReward(BitSequenceTask task, double beta);

    double evaluate(const TokenSeq& x) const override;

    const BitSequenceTask& task() const { return task_; }
    const SequenceSpace& space() const { return space_; }

private:
    BitSequenceTask task_;
    SequenceSpace space_;
};

double bitseq_reward(const BitSequenceTask& task, const SequenceSpace& space, const TokenSeq& x);

// ---------------------------------------------------------------------------
// Reward tables

/// Raw scores from a `SEQUENCE<TAB>SCORE` file, normalized as
/// beta (phi - mu) / sigma. Without stats, mu = 0 and sigma = 1.
class RewardTable final : public RewardModel {
public:
    RewardTable(SequenceSpace space, std::unordered_map<TokenSeq, double> scores,
                double beta, std::optional<NormalizationStats> stats);

    /// Throws std::invalid_argument naming the sequence when it is absent.
    double evaluate(const TokenSeq& x) const override;

    std::size_t size() const { return scores_.size(); }

    /// Throws naming the first terminal with no score.
    void check_total(const SequenceSpace& space, std::uint64_t cap = kDefaultEnumerationCap) const;

private:
    SequenceSpace space_;
    std::unordered_map<TokenSeq, double> scores_;
};

std::unordered_map<TokenSeq, double> read_reward_tsv(std::istream& in, const SequenceSpace& space);

/// Parses {"mu": float, "sigma": float}.
NormalizationStats read_stats_json(std::istream& in);

double normalize_reward(const RewardTable& table, const TokenSeq& x);

// ---------------------------------------------------------------------------
// Diverse selection and metrics

struct Candidate {
    std::string object;
    double reward;
};

using Metric = std::function<double(std::string_view, std::string_view)>;

/// Greedy approximation of the diverse top-k problem: deduplicate, sort by
/// reward (descending, ties by object), keep a candidate iff its distance to
/// every kept object exceeds delta.
std::vector<Candidate> greedy_diverse_topk(std::vector<Candidate> candidates, std::size_t k,
                                           double delta, const Metric& metric);

struct ModeMetrics {
    std::size_t modes_found = 0;
    double avg_min_distance = 0.0;
    std::vector<std::size_t> min_distances;
};

inline constexpr double kDefaultFoundRadius = 28.0;

/// Per-mode nearest-sample edit distance over bit strings.
ModeMetrics mode_metrics(const BitSequenceTask& task, const std::vector<std::string>& samples,
                         double found_radius = kDefaultFoundRadius);

struct EvalProtocol {
    std::vector<double> temperatures{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    std::size_t samples_per_temperature = 512;
    std::size_t k = 100;
    std::optional<double> delta; ///< default 0.25 (minLen + maxLen) / 2 in rendered characters
    std::size_t threads = 1;

    double resolved_delta(const SequenceSpace& space) const;
};

struct EvalReport {
    double mean_mode_reward = 0.0;
    std::size_t k_requested = 0;
    std::size_t pool_size = 0;
    double delta = 0.0;
    std::vector<Candidate> selected;
    std::vector<std::string> pool; ///< distinct rendered samples, sorted
};

/// Temperature sweep: sample with policy_from_q at each modifier, pool and
/// deduplicate, then select greedily by normalized reward (without beta) under
/// Levenshtein distance on rendered sequences.
EvalReport evaluate_sampler(const SequenceSpace& space, const RewardModel& reward,
                            const QFunction& q, const GmParams& params,
                            const EvalProtocol& protocol, std::uint64_t seed);

} // namespace tgm
