#include "tgm/tasks.hpp"

#include "tgm/format.hpp"
#include "tgm/rng.hpp"
#include "tgm/train.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace tgm {

std::size_t levenshtein(std::string_view x, std::string_view y) {
    if (x.size() < y.size()) {
        std::swap(x, y);
    }
    std::vector<std::size_t> prev(y.size() + 1);
    std::vector<std::size_t> cur(y.size() + 1);
    for (std::size_t j = 0; j <= y.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= x.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= y.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[y.size()];
}

namespace {

bool is_bit_string(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<std::string> bit_words(std::size_t k) {
    std::vector<std::string> words;
    const std::size_t count = std::size_t{1} << k;
    words.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        std::string word(k, '0');
        for (std::size_t b = 0; b < k; ++b) {
            if ((w >> (k - 1 - b)) & 1u) {
                word[b] = '1';
            }
        }
        words.push_back(std::move(word));
    }
    return words;
}

} // namespace

BitSequenceTask::BitSequenceTask(std::size_t n, std::size_t k, std::vector<std::string> modes)
    : n_(n), k_(k), modes_(std::move(modes)) {
    if (k_ < 1 || k_ > 8) {
        throw std::invalid_argument("word size k must lie in [1, 8]");
    }
    if (n_ == 0 || n_ % k_ != 0) {
        throw std::invalid_argument("k must divide n");
    }
    if (modes_.empty()) {
        throw std::invalid_argument("bit-sequence task needs at least one mode");
    }
    std::set<std::string> seen;
    for (const auto& m : modes_) {
        if (m.size() != n_ || !is_bit_string(m)) {
            throw std::invalid_argument("mode '" + m + "' is not a bit string of length " +
                                        std::to_string(n_));
        }
        if (!seen.insert(m).second) {
            throw std::invalid_argument("duplicate mode '" + m + "'");
        }
    }
}

SequenceSpace BitSequenceTask::space() const {
    return SequenceSpace(bit_words(k_), n_ / k_, n_ / k_, false);
}

double BitSequenceTask::reward_bits(std::string_view bits) const {
    if (bits.size() != n_) {
        throw std::invalid_argument("bit sequence has length " + std::to_string(bits.size()) +
                                    ", expected " + std::to_string(n_));
    }
    std::size_t best = n_;
    for (const auto& m : modes_) {
        best = std::min(best, levenshtein(bits, m));
    }
    return 1.0 - static_cast<double>(best) / static_cast<double>(n_);
}

std::vector<std::string> generate_modes(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (n < 64 && count > (std::uint64_t{1} << n)) {
        throw std::invalid_argument("more modes requested than distinct bit strings exist");
    }
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<std::string> modes;
    while (modes.size() < count) {
        std::string m(n, '0');
        for (auto& c : m) {
            c = (rng.next_u64() >> 63) ? '1' : '0';
        }
        if (seen.insert(m).second) {
            modes.push_back(std::move(m));
        }
    }
    return modes;
}

std::vector<std::string> read_modes(std::istream& in) {
    std::vector<std::string> modes;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!is_bit_string(line)) {
            throw std::invalid_argument("modes file line '" + line + "' is not a bit string");
        }
        modes.push_back(line);
    }
    return modes;
}

void write_modes(std::ostream& out, const std::vector<std::string>& modes) {
    for (const auto& m : modes) {
        out << m << '\n';
    }
}

BitSequenceReward::BitSequenceReward(BitSequenceTask task, double beta)
    : RewardModel(beta), task_(std::move(task)), space_(task_.space()) {}

double BitSequenceReward::evaluate(const TokenSeq& x) const {
    return bitseq_reward(task_, space_, x);
}

double bitseq_reward(const BitSequenceTask& task, const SequenceSpace& space, const TokenSeq& x) {
    return task.reward_bits(space.render(x));
}

RewardTable::RewardTable(SequenceSpace space, std::unordered_map<TokenSeq, double> scores,
                         double beta, std::optional<NormalizationStats> stats)
    : RewardModel(beta, stats), space_(std::move(space)), scores_(std::move(scores)) {}

double RewardTable::evaluate(const TokenSeq& x) const {
    const auto it = scores_.find(x);
    if (it == scores_.end()) {
        throw std::invalid_argument("sequence not in reward table: '" + space_.render(x) + "'");
    }
    return it->second;
}

void RewardTable::check_total(const SequenceSpace& space, std::uint64_t cap) const {
    for_each_terminal(
        space,
        [&](const TokenSeq& x) {
            if (!scores_.contains(x)) {
                throw std::invalid_argument("sequence not in reward table: '" + space.render(x) +
                                            "'");
            }
        },
        cap);
}

std::unordered_map<TokenSeq, double> read_reward_tsv(std::istream& in, const SequenceSpace& space) {
    std::unordered_map<TokenSeq, double> scores;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split(line, '\t');
        if (fields.size() != 2) {
            throw std::invalid_argument("reward table line " + std::to_string(lineno) +
                                        ": expected SEQUENCE<TAB>SCORE");
        }
        const TokenSeq x = space.parse(fields[0]);
        if (!space.is_terminal_object(x)) {
            throw std::invalid_argument("reward table line " + std::to_string(lineno) +
                                        ": '" + std::string(fields[0]) +
                                        "' is not a terminal object of the task");
        }
        const double score = parse_double(fields[1]);
        if (!std::isfinite(score)) {
            throw std::invalid_argument("reward table line " + std::to_string(lineno) +
                                        ": non-finite score");
        }
        if (!scores.emplace(x, score).second) {
            throw std::invalid_argument("reward table line " + std::to_string(lineno) +
                                        ": duplicate sequence '" + std::string(fields[0]) + "'");
        }
    }
    return scores;
}

NormalizationStats read_stats_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
        NormalizationStats s{j.at("mu").get<double>(), j.at("sigma").get<double>()};
        if (!(s.sigma > 0.0)) {
            throw std::invalid_argument("stats sigma must be positive");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad stats file: ") + e.what());
    }
}

double normalize_reward(const RewardTable& table, const TokenSeq& x) {
    return table.reward(x);
}

std::vector<Candidate> greedy_diverse_topk(std::vector<Candidate> candidates, std::size_t k,
                                           double delta, const Metric& metric) {
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("delta must be nonnegative");
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.reward != b.reward) {
            return a.reward > b.reward;
        }
        return a.object < b.object;
    });
    // First occurrence of a duplicate carries its highest reward.
    std::set<std::string> seen;
    std::vector<Candidate> selected;
    for (auto& c : candidates) {
        if (selected.size() == k) {
            break;
        }
        if (!seen.insert(c.object).second) {
            continue;
        }
        const bool far = std::all_of(selected.begin(), selected.end(), [&](const Candidate& s) {
            return metric(c.object, s.object) > delta;
        });
        if (far) {
            selected.push_back(std::move(c));
        }
    }
    return selected;
}

ModeMetrics mode_metrics(const BitSequenceTask& task, const std::vector<std::string>& samples,
                         double found_radius) {
    ModeMetrics out;
    out.min_distances.reserve(task.modes().size());
    double total = 0.0;
    for (const auto& mode : task.modes()) {
        std::size_t best = task.n();
        for (const auto& s : samples) {
            best = std::min(best, levenshtein(s, mode));
            if (best == 0) {
                break;
            }
        }
        out.min_distances.push_back(best);
        total += static_cast<double>(best);
        if (static_cast<double>(best) <= found_radius) {
            ++out.modes_found;
        }
    }
    out.avg_min_distance = total / static_cast<double>(task.modes().size());
    return out;
}

double EvalProtocol::resolved_delta(const SequenceSpace& space) const {
    if (delta) {
        return *delta;
    }
    const double w = static_cast<double>(space.token_width());
    return 0.25 * (static_cast<double>(space.min_len()) * w +
                   static_cast<double>(space.max_len()) * w) /
           2.0;
}

EvalReport evaluate_sampler(const SequenceSpace& space, const RewardModel& reward,
                            const QFunction& q, const GmParams& params,
                            const EvalProtocol& protocol, std::uint64_t seed) {
    if (protocol.temperatures.empty() || protocol.samples_per_temperature == 0) {
        throw std::invalid_argument("evaluation protocol samples nothing");
    }
    std::map<std::string, double> pooled;
    for (std::size_t i = 0; i < protocol.temperatures.size(); ++i) {
        const Policy policy = policy_from_q(space, q, params, protocol.temperatures[i]);
        const auto batch =
            rollout_batch(space, reward, policy, stream_seed(seed, i),
                          protocol.samples_per_temperature, protocol.threads);
        for (const auto& traj : batch) {
            const std::string rendered = space.render(traj.object);
            if (!pooled.contains(rendered)) {
                pooled.emplace(rendered, reward.normalized(traj.object));
            }
        }
    }
    EvalReport report;
    report.k_requested = protocol.k;
    report.pool_size = pooled.size();
    report.delta = protocol.resolved_delta(space);
    std::vector<Candidate> candidates;
    candidates.reserve(pooled.size());
    for (const auto& [obj, r] : pooled) {
        candidates.push_back({obj, r});
        report.pool.push_back(obj);
    }
    report.selected = greedy_diverse_topk(
        std::move(candidates), protocol.k, report.delta, [](std::string_view a, std::string_view b) {
            return static_cast<double>(levenshtein(a, b));
        });
    double total = 0.0;
    for (const auto& c : report.selected) {
        total += c.reward;
    }
    report.mean_mode_reward =
        report.selected.empty() ? 0.0 : total / static_cast<double>(report.selected.size());
    return report;
}

} // namespace tgm
