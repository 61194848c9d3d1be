#include "doctest.h"

#include "oracles.hpp"
#include "tgm/exact_solver.hpp"
#include "tgm/rng.hpp"
#include "tgm/tasks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace tgm;

namespace {

std::string random_string(Rng& rng, std::size_t max_len, char first, std::size_t letters) {
    std::string s(rng.below(max_len + 1), first);
    for (char& c : s) {
        c = static_cast<char>(first + rng.below(letters));
    }
    return s;
}

double edit_metric(std::string_view a, std::string_view b) {
    return static_cast<double>(levenshtein(a, b));
}

} // namespace

TEST_CASE("levenshtein examples") {
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("sitting", "kitten") == 3);
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("", "abcd") == 4);
    CHECK(levenshtein("flaw", "lawn") == 2);
    CHECK(levenshtein("0101", "0101") == 0);
}

TEST_CASE("levenshtein agrees with the full DP table and is a metric") {
    Rng rng(61);
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_string(rng, 12, 'a', 3);
        const auto y = random_string(rng, 12, 'a', 3);
        const auto z = random_string(rng, 12, 'a', 3);
        const auto xy = levenshtein(x, y);
        CHECK(xy == oracle::edit_distance_table(x, y));
        CHECK(xy == levenshtein(y, x));
        CHECK(levenshtein(x, z) <= xy + levenshtein(y, z));
        CHECK(levenshtein(x, x) == 0);
    }
}

TEST_CASE("bit-sequence task") {
    const BitSequenceTask task(8, 4, {"00000000", "11110000"});
    CHECK(task.reward_bits("00000000") == 1.0);
    CHECK(task.reward_bits("00010000") == 0.875);
    CHECK(task.reward_bits("11110001") == 0.875);
    CHECK_THROWS_AS(task.reward_bits("0001000"), std::invalid_argument);

    const auto space = task.space();
    CHECK(space.vocab_size() == 16);
    CHECK(space.alphabet()[1] == "0001");
    CHECK(space.alphabet()[8] == "1000");
    CHECK(space.terminal_count() == 256);
    CHECK(bitseq_reward(task, space, space.parse("00010000")) == 0.875);

    const BitSequenceReward reward(task, 8.0);
    CHECK(reward.reward(space.parse("11110000")) == 8.0);

    CHECK_THROWS_AS(BitSequenceTask(8, 3, {"00000000"}), std::invalid_argument);
    CHECK_THROWS_AS(BitSequenceTask(8, 4, {"0000000"}), std::invalid_argument);
    CHECK_THROWS_AS(BitSequenceTask(8, 4, {"00000000", "00000000"}), std::invalid_argument);
    CHECK_THROWS_AS(BitSequenceTask(8, 4, {"0000000x"}), std::invalid_argument);
}

TEST_CASE("bit-sequence reward is 1 exactly on modes") {
    Rng rng(67);
    const auto modes = generate_modes(8, 3, 5);
    const BitSequenceTask task(8, 2, modes);
    const auto space = task.space();
    for (const auto& x : enumerate_terminals(space)) {
        const auto bits = space.render(x);
        const double r = task.reward_bits(bits);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        const bool is_mode = std::find(modes.begin(), modes.end(), bits) != modes.end();
        CHECK((r == 1.0) == is_mode);
    }
}

TEST_CASE("modes files") {
    const auto modes = generate_modes(16, 5, 42);
    CHECK(modes == generate_modes(16, 5, 42));
    CHECK(modes != generate_modes(16, 5, 43));
    CHECK(std::set<std::string>(modes.begin(), modes.end()).size() == 5);
    std::stringstream io;
    write_modes(io, modes);
    CHECK(read_modes(io) == modes);

    std::istringstream bad("0101\n01x1\n");
    CHECK_THROWS_AS(read_modes(bad), std::invalid_argument);
    CHECK_THROWS_AS(generate_modes(2, 5, 0), std::invalid_argument);
}

TEST_CASE("reward tables") {
    const SequenceSpace space({"A", "C", "G", "T"}, 2, 2, false);
    std::istringstream tsv("# sequence\tscore\nAA\t2\nAC\t1.0\n");
    auto scores = read_reward_tsv(tsv, space);
    CHECK(scores.size() == 2);

    const RewardTable table(space, scores, 4.0, NormalizationStats{1.0, 0.5});
    CHECK(normalize_reward(table, space.parse("AA")) == 8.0);
    CHECK(normalize_reward(table, space.parse("AC")) == 0.0);
    const RewardTable doubled(space, scores, 8.0, NormalizationStats{1.0, 0.5});
    CHECK(normalize_reward(doubled, space.parse("AA")) == 16.0);
    const RewardTable raw(space, scores, 1.0, std::nullopt);
    CHECK(raw.reward(space.parse("AA")) == 2.0);

    CHECK_THROWS_WITH_AS(table.reward(space.parse("GG")), "sequence not in reward table: 'GG'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(table.check_total(space), "sequence not in reward table: 'AG'",
                         std::invalid_argument);
    CHECK_THROWS_AS(RewardTable(space, scores, 1.0, NormalizationStats{0.0, 0.0}),
                    std::invalid_argument);

    std::istringstream wrong_len("AAA\t1\n");
    CHECK_THROWS_AS(read_reward_tsv(wrong_len, space), std::invalid_argument);
    std::istringstream dup("AA\t1\nAA\t2\n");
    CHECK_THROWS_AS(read_reward_tsv(dup, space), std::invalid_argument);
    std::istringstream no_tab("AA 1\n");
    CHECK_THROWS_AS(read_reward_tsv(no_tab, space), std::invalid_argument);

    std::istringstream stats(R"({"mu": 0.25, "sigma": 2})");
    const auto s = read_stats_json(stats);
    CHECK(s.mu == 0.25);
    CHECK(s.sigma == 2.0);
    std::istringstream bad_stats(R"({"mu": 0.25, "sigma": -1})");
    CHECK_THROWS_AS(read_stats_json(bad_stats), std::invalid_argument);
    std::istringstream missing(R"({"mu": 0.25})");
    CHECK_THROWS_AS(read_stats_json(missing), std::invalid_argument);
}

TEST_CASE("greedy diverse top-k examples") {
    const std::map<std::pair<std::string, std::string>, double> dist{
        {{"1", "2"}, 2}, {{"1", "3"}, 5}, {{"2", "3"}, 4}};
    const Metric table = [&](std::string_view a, std::string_view b) {
        if (a == b) {
            return 0.0;
        }
        const std::string x(std::min(a, b));
        const std::string y(std::max(a, b));
        return dist.at({x, y});
    };
    const auto picked = greedy_diverse_topk({{"1", 0.9}, {"2", 0.8}, {"3", 0.7}}, 2, 3.0, table);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0].object == "1");
    CHECK(picked[1].object == "3");

    const auto top = greedy_diverse_topk({{"b", 0.1}, {"a", 0.5}, {"c", 0.3}}, 2, 0.0, edit_metric);
    REQUIRE(top.size() == 2);
    CHECK(top[0].object == "a");
    CHECK(top[1].object == "c");

    const auto crowded =
        greedy_diverse_topk({{"aa", 0.1}, {"ab", 0.5}, {"bb", 0.3}}, 3, 2.0, edit_metric);
    REQUIRE(crowded.size() == 1);
    CHECK(crowded[0].object == "ab");

    const auto ties = greedy_diverse_topk({{"b", 1.0}, {"a", 1.0}}, 1, 0.0, edit_metric);
    CHECK(ties[0].object == "a");

    const auto dedup = greedy_diverse_topk({{"a", 1.0}, {"a", 1.0}, {"b", 0.5}}, 5, 0.0, edit_metric);
    CHECK(dedup.size() == 2);

    CHECK_THROWS_AS(greedy_diverse_topk({}, 0, 0.0, edit_metric), std::invalid_argument);
    CHECK_THROWS_AS(greedy_diverse_topk({}, 1, -1.0, edit_metric), std::invalid_argument);
}

TEST_CASE("greedy selection properties against brute force") {
    Rng rng(71);
    double worst_ratio = 1.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < n; ++i) {
            cands.push_back({random_string(rng, 5, 'a', 2), rng.uniform()});
        }
        const std::size_t k = 1 + rng.below(4);
        const double delta = static_cast<double>(rng.below(3));
        const auto picked = greedy_diverse_topk(cands, k, delta, edit_metric);
        CHECK(picked.size() <= k);
        CHECK(!picked.empty());
        double greedy_total = 0.0;
        for (std::size_t i = 0; i < picked.size(); ++i) {
            greedy_total += picked[i].reward;
            if (i > 0) {
                CHECK(picked[i - 1].reward >= picked[i].reward);
            }
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(edit_metric(picked[i].object, picked[j].object) > delta);
            }
        }

        // Exhaustive optimum over feasible subsets of distinct objects.
        std::map<std::string, double> best_of;
        for (const auto& c : cands) {
            best_of[c.object] = std::max(best_of.contains(c.object) ? best_of[c.object] : 0.0, c.reward);
        }
        const std::vector<std::pair<std::string, double>> uniq(best_of.begin(), best_of.end());
        double optimum = 0.0;
        for (std::uint32_t mask = 1; mask < (1u << uniq.size()); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) > k) {
                continue;
            }
            bool ok = true;
            double total = 0.0;
            for (std::size_t i = 0; i < uniq.size() && ok; ++i) {
                if (!(mask >> i & 1u)) {
                    continue;
                }
                total += uniq[i].second;
                for (std::size_t j = 0; j < i && ok; ++j) {
                    if ((mask >> j & 1u) && edit_metric(uniq[i].first, uniq[j].first) <= delta) {
                        ok = false;
                    }
                }
            }
            if (ok) {
                optimum = std::max(optimum, total);
            }
        }
        CHECK(greedy_total <= optimum + 1e-12);
        double top = 0.0;
        for (const auto& [obj, r] : uniq) {
            top = std::max(top, r);
        }
        CHECK(picked.front().reward == top);
        worst_ratio = std::min(worst_ratio, greedy_total / optimum);
    }
    MESSAGE("worst greedy / optimum ratio: " << worst_ratio);
}

TEST_CASE("mode metrics") {
    const std::string a = std::string(115, '0') + std::string(5, '1');
    const std::string b = std::string(40, '1') + std::string(80, '0');
    const BitSequenceTask task(120, 4, {a, b});
    const std::string sample(120, '0');
    const auto m = mode_metrics(task, {sample});
    CHECK(m.modes_found == 1);
    CHECK(m.min_distances == std::vector<std::size_t>{5, 40});
    CHECK(m.avg_min_distance == 22.5);

    const auto exact = mode_metrics(task, {a, b});
    CHECK(exact.modes_found == 2);
    CHECK(exact.avg_min_distance == 0.0);

    const auto none = mode_metrics(task, {});
    CHECK(none.modes_found == 0);
    CHECK(none.avg_min_distance == 120.0);
}

TEST_CASE("mode metrics are monotone in the sample set") {
    Rng rng(73);
    const BitSequenceTask task(16, 4, generate_modes(16, 4, 9));
    std::vector<std::string> samples;
    ModeMetrics prev = mode_metrics(task, samples, 4.0);
    for (int i = 0; i < 200; ++i) {
        std::string s(16, '0');
        for (char& c : s) {
            c = rng.below(2) ? '1' : '0';
        }
        samples.push_back(s);
        const auto cur = mode_metrics(task, samples, 4.0);
        CHECK(cur.modes_found >= prev.modes_found);
        CHECK(cur.avg_min_distance <= prev.avg_min_distance);
        prev = cur;
    }
}

TEST_CASE("evaluation protocol") {
    const EvalProtocol defaults;
    CHECK(defaults.temperatures.size() == 10);
    CHECK(defaults.temperatures.front() == 0.005);
    CHECK(defaults.temperatures.back() == 5.0);
    CHECK(defaults.samples_per_temperature == 512);
    CHECK(defaults.k == 100);
    const SequenceSpace dna({"A", "C", "G", "T"}, 8, 8, false);
    CHECK(defaults.resolved_delta(dna) == 2.0);
    const BitSequenceTask task(16, 4, {std::string(16, '0')});
    CHECK(defaults.resolved_delta(task.space()) == 4.0);
}

TEST_CASE("evaluate_sampler examples") {
    GmParams gfn;
    gfn.q = 0.0;
    gfn.alpha = 0.0;
    gfn.omega = 1.0;

    SUBCASE("single-path space") {
        const SequenceSpace space({"a"}, 3, 3, false);
        const FunctionReward reward([](const TokenSeq&) { return 0.4; }, 3.0);
        const QFunction q;
        const auto report = evaluate_sampler(space, reward, q, gfn, EvalProtocol{}, 1);
        CHECK(report.pool_size == 1);
        REQUIRE(report.selected.size() == 1);
        CHECK(report.selected[0].object == "aaa");
        CHECK(report.mean_mode_reward == 0.4);
    }
    SUBCASE("two-terminal fixture") {
        const SequenceSpace space({"0", "1"}, 1, 1, false);
        const FunctionReward reward(
            [](const TokenSeq& x) { return x[0] == 0 ? 0.0 : std::log(2.0); });
        const auto sol = solve_backward(space, reward, gfn);
        EvalProtocol protocol;
        protocol.k = 2;
        protocol.delta = 0.0;
        const auto report = evaluate_sampler(space, reward, sol.q, gfn, protocol, 3);
        CHECK(report.selected.size() == 2);
        CHECK(report.mean_mode_reward == doctest::Approx(std::log(2.0) / 2));
    }
    SUBCASE("seeded and thread-count independent") {
        const SequenceSpace space({"A", "C", "G", "T"}, 4, 4, false);
        const FunctionReward reward([](const TokenSeq& x) { return std::count(x.begin(), x.end(), 2) * 1.0; });
        const auto sol = solve_backward(space, reward, gfn);
        EvalProtocol protocol;
        protocol.samples_per_temperature = 64;
        protocol.k = 10;
        const auto a = evaluate_sampler(space, reward, sol.q, gfn, protocol, 5);
        protocol.threads = 3;
        const auto b = evaluate_sampler(space, reward, sol.q, gfn, protocol, 5);
        CHECK(a.pool == b.pool);
        CHECK(a.mean_mode_reward == b.mean_mode_reward);
        REQUIRE(a.selected.size() == b.selected.size());
        for (std::size_t i = 0; i < a.selected.size(); ++i) {
            CHECK(a.selected[i].object == b.selected[i].object);
        }
    }
}
