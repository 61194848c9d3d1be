#include "tgm/dcg.hpp"

#include "tgm/errors.hpp"
#include "tgm/rng.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace tgm {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    if (b > std::numeric_limits<std::uint64_t>::max() - a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a + b;
}

// Sum of B^L for L in [lo, hi].
std::uint64_t power_sum(std::uint64_t base, std::size_t lo, std::size_t hi) {
    std::uint64_t total = 0;
    std::uint64_t p = 1;
    for (std::size_t len = 0; len <= hi; ++len) {
        if (len >= lo) {
            total = sat_add(total, p);
        }
        p = sat_mul(p, base);
    }
    return total;
}

} // namespace

SequenceSpace::SequenceSpace(std::vector<std::string> alphabet, std::size_t min_len,
                             std::size_t max_len, bool variable_length)
    : alphabet_(std::move(alphabet)), min_len_(min_len), max_len_(max_len),
      variable_length_(variable_length) {
    if (alphabet_.empty()) {
        throw std::invalid_argument("alphabet must not be empty");
    }
    if (alphabet_.size() > 256) {
        throw std::invalid_argument("alphabet larger than 256 tokens");
    }
    const std::size_t width = alphabet_.front().size();
    std::set<std::string> seen;
    for (const auto& tok : alphabet_) {
        if (tok.empty() || tok.size() != width) {
            throw std::invalid_argument("alphabet tokens must be non-empty and of equal width");
        }
        if (!seen.insert(tok).second) {
            throw std::invalid_argument("duplicate alphabet token '" + tok + "'");
        }
    }
    if (min_len_ < 1 || min_len_ > max_len_) {
        throw std::invalid_argument("length bounds must satisfy 1 <= min_len <= max_len");
    }
}

void SequenceSpace::check_state(const State& s) const {
    if (s.prefix.size() > max_len_) {
        throw std::invalid_argument("state longer than max_len");
    }
    for (unsigned char c : s.prefix) {
        if (c >= alphabet_.size()) {
            throw std::invalid_argument("state contains an unknown token index");
        }
    }
}

std::size_t SequenceSpace::num_actions(const State& s) const {
    if (s.terminal) {
        throw std::invalid_argument("no children of terminal state");
    }
    check_state(s);
    const std::size_t len = s.prefix.size();
    if (!variable_length_) {
        if (len >= max_len_) {
            throw std::invalid_argument("no children of terminal state");
        }
        return alphabet_.size();
    }
    if (len == max_len_) {
        return 1;
    }
    return alphabet_.size() + (len >= min_len_ ? 1 : 0);
}

bool SequenceSpace::is_stop(const State& s, std::size_t action) const {
    const std::size_t n = num_actions(s);
    if (action >= n) {
        throw std::out_of_range("action index out of range");
    }
    return variable_length_ && (s.prefix.size() == max_len_ || action == alphabet_.size());
}

State SequenceSpace::step(const State& s, std::size_t action) const {
    if (is_stop(s, action)) {
        return State{s.prefix, true};
    }
    State next{s.prefix + static_cast<char>(static_cast<unsigned char>(action)), false};
    if (!variable_length_ && next.prefix.size() == max_len_) {
        next.terminal = true;
    }
    return next;
}

std::uint64_t SequenceSpace::terminal_count() const {
    const std::uint64_t b = alphabet_.size();
    if (!variable_length_) {
        return power_sum(b, max_len_, max_len_);
    }
    return power_sum(b, min_len_, max_len_);
}

std::uint64_t SequenceSpace::nonterminal_count() const {
    const std::uint64_t b = alphabet_.size();
    return power_sum(b, 0, variable_length_ ? max_len_ : max_len_ - 1);
}

std::string SequenceSpace::render(const TokenSeq& tokens) const {
    std::string out;
    out.reserve(tokens.size() * token_width());
    for (unsigned char c : tokens) {
        if (c >= alphabet_.size()) {
            throw std::invalid_argument("unknown token index in sequence");
        }
        out += alphabet_[c];
    }
    return out;
}

TokenSeq SequenceSpace::parse(std::string_view text) const {
    const std::size_t width = token_width();
    if (text.size() % width != 0) {
        throw std::invalid_argument("sequence '" + std::string(text) +
                                    "' is not a whole number of tokens");
    }
    TokenSeq out;
    out.reserve(text.size() / width);
    for (std::size_t i = 0; i < text.size(); i += width) {
        const std::string_view piece = text.substr(i, width);
        std::size_t idx = 0;
        while (idx < alphabet_.size() && alphabet_[idx] != piece) {
            ++idx;
        }
        if (idx == alphabet_.size()) {
            throw std::invalid_argument("unknown token '" + std::string(piece) + "' in sequence '" +
                                        std::string(text) + "'");
        }
        out += static_cast<char>(static_cast<unsigned char>(idx));
    }
    return out;
}

bool SequenceSpace::is_terminal_object(const TokenSeq& x) const {
    for (unsigned char c : x) {
        if (c >= alphabet_.size()) {
            return false;
        }
    }
    if (!variable_length_) {
        return x.size() == max_len_;
    }
    return x.size() >= min_len_ && x.size() <= max_len_;
}

std::vector<Child> children(const SequenceSpace& space, const State& s) {
    const std::size_t n = space.num_actions(s);
    std::vector<Child> out;
    out.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
        out.push_back(Child{a, space.step(s, a)});
    }
    return out;
}

RewardModel::RewardModel(double beta, std::optional<NormalizationStats> stats)
    : beta_(beta), stats_(stats) {
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
        throw std::invalid_argument("reward scale beta must be positive and finite");
    }
    if (stats_ && (!(stats_->sigma > 0.0) || !std::isfinite(stats_->mu))) {
        throw std::invalid_argument("normalization sigma must be positive");
    }
}

double RewardModel::normalized(const TokenSeq& x) const {
    const double phi = evaluate(x);
    if (!stats_) {
        return phi;
    }
    return (phi - stats_->mu) / stats_->sigma;
}

FunctionReward::FunctionReward(Fn fn, double beta, std::optional<NormalizationStats> stats)
    : RewardModel(beta, stats), fn_(std::move(fn)) {}

Policy uniform_policy(const SequenceSpace& space) {
    return [&space](const State& s) {
        const std::size_t n = space.num_actions(s);
        return ActionVector(n, 1.0 / static_cast<double>(n));
    };
}

std::size_t sample_index(const ActionVector& probs, double u) {
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) {
            acc += probs[i];
            last_positive = i;
            if (u < acc) {
                return i;
            }
        }
    }
    // u landed in the rounding slack above the accumulated sum.
    return last_positive;
}

Trajectory rollout(const SequenceSpace& space, const RewardModel& reward, const Policy& policy,
                   std::uint64_t seed) {
    Rng rng(seed);
    Trajectory traj;
    State s = space.root();
    while (!s.terminal) {
        const std::size_t n = space.num_actions(s);
        const ActionVector probs = policy(s);
        if (probs.size() != n) {
            throw std::invalid_argument("policy returned " + std::to_string(probs.size()) +
                                        " probabilities for a state with " + std::to_string(n) +
                                        " actions");
        }
        double total = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0) || !std::isfinite(p)) {
                throw std::invalid_argument("policy returned a negative or non-finite probability");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw std::invalid_argument("policy distribution does not sum to 1");
        }
        const std::size_t a = sample_index(probs, rng.uniform());
        State next = space.step(s, a);
        traj.steps.push_back(Step{std::move(s), a});
        s = std::move(next);
    }
    traj.object = s.prefix;
    traj.reward = reward.reward(traj.object);
    if (!std::isfinite(traj.reward)) {
        throw NumericalError("non-finite reward for sequence '" + space.render(traj.object) + "'");
    }
    return traj;
}

std::vector<Trajectory> rollout_batch(const SequenceSpace& space, const RewardModel& reward,
                                      const Policy& policy, std::uint64_t base_seed,
                                      std::size_t count, std::size_t threads) {
    std::vector<Trajectory> out(count);
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = rollout(space, reward, policy, stream_seed(base_seed, i));
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += threads) {
                        out[i] = rollout(space, reward, policy, stream_seed(base_seed, i));
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

void for_each_terminal(const SequenceSpace& space, const std::function<void(const TokenSeq&)>& fn,
                       std::uint64_t cap) {
    if (space.terminal_count() > cap) {
        throw CapacityError("space too large for enumeration");
    }
    const std::size_t b = space.vocab_size();
    TokenSeq prefix;
    // Pre-order walk; emitting a prefix before its extensions gives
    // lexicographic order.
    std::function<void()> visit = [&] {
        const std::size_t len = prefix.size();
        const bool can_stop = space.variable_length() ? len >= space.min_len()
                                                      : len == space.max_len();
        if (can_stop) {
            fn(prefix);
        }
        if (len == space.max_len()) {
            return;
        }
        for (std::size_t t = 0; t < b; ++t) {
            prefix.push_back(static_cast<char>(static_cast<unsigned char>(t)));
            visit();
            prefix.pop_back();
        }
    };
    visit();
}

std::vector<TokenSeq> enumerate_terminals(const SequenceSpace& space, std::uint64_t cap) {
    std::vector<TokenSeq> out;
    for_each_terminal(space, [&](const TokenSeq& x) { out.push_back(x); }, cap);
    return out;
}

} // namespace tgm
