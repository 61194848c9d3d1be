#include "tgm/cli.hpp"

#include "tgm/errors.hpp"
#include "tgm/exact_solver.hpp"
#include "tgm/format.hpp"
#include "tgm/tasks.hpp"
#include "tgm/train.hpp"
#include "tgm/uncertainty.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tgm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<double> q, alpha, omega, beta;

    // train
    std::optional<std::size_t> steps, batch_size;
    std::optional<double> learning_rate;

    // eval
    std::optional<std::string> snapshot;
    std::optional<std::size_t> k, samples;
    std::optional<double> delta;

    // uset
    std::optional<std::string> kind;
    std::optional<std::vector<double>> d, r0, range;
    std::optional<std::size_t> grid;
    std::optional<int> uset_steps;

    // gen-modes
    std::optional<std::size_t> n, count;
};

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: '" + where + "' must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument("config: unknown key '" + where + "." + key + "'");
        }
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

json& section(json& root, const std::string& name) {
    if (!root.contains(name)) {
        root[name] = json::object();
    }
    return root[name];
}

json load_config(const Flags& flags) {
    json cfg = json::object();
    if (!flags.config) {
        return cfg;
    }
    const std::string text = read_file(*flags.config);
    try {
        cfg = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config '" + *flags.config + "': " + e.what());
    }
    check_keys(cfg, "config",
               {"task", "params", "train", "eval", "uset", "gen_modes", "seed", "threads", "out",
                "cap"});

    // Paths inside the file are relative to the file.
    const fs::path base = fs::path(*flags.config).parent_path();
    auto resolve = [&](json& node, const char* key) {
        if (node.is_object() && node.contains(key)) {
            const fs::path p(node.at(key).get<std::string>());
            node[key] = (p.is_absolute() ? p : (base / p)).lexically_normal().string();
        }
    };
    if (cfg.contains("task")) {
        resolve(cfg["task"], "table");
        resolve(cfg["task"], "stats");
        resolve(cfg["task"], "modes");
    }
    if (cfg.contains("eval")) {
        resolve(cfg["eval"], "snapshot");
    }
    return cfg;
}

void apply_overrides(json& cfg, const Flags& f) {
    if (f.out) cfg["out"] = *f.out;
    if (f.seed) cfg["seed"] = *f.seed;
    if (f.threads) cfg["threads"] = *f.threads;
    if (f.q) section(cfg, "params")["q"] = *f.q;
    if (f.alpha) section(cfg, "params")["alpha"] = *f.alpha;
    if (f.omega) section(cfg, "params")["omega"] = *f.omega;
    if (f.beta) section(cfg, "params")["beta"] = *f.beta;
    if (f.steps) section(cfg, "train")["steps"] = *f.steps;
    if (f.batch_size) section(cfg, "train")["batch_size"] = *f.batch_size;
    if (f.learning_rate) section(cfg, "train")["learning_rate"] = *f.learning_rate;
    if (f.snapshot) section(cfg, "eval")["snapshot"] = *f.snapshot;
    if (f.k) section(cfg, "eval")["k"] = *f.k;
    if (f.samples) section(cfg, "eval")["samples_per_temperature"] = *f.samples;
    if (f.delta) section(cfg, "eval")["delta"] = *f.delta;
    if (f.kind) section(cfg, "uset")["kind"] = *f.kind;
    if (f.d) section(cfg, "uset")["d"] = *f.d;
    if (f.r0) section(cfg, "uset")["r0"] = *f.r0;
    if (f.range) section(cfg, "uset")["range"] = *f.range;
    if (f.grid) section(cfg, "uset")["grid"] = *f.grid;
    if (f.uset_steps) section(cfg, "uset")["steps"] = *f.uset_steps;
    if (f.n) section(cfg, "gen_modes")["n"] = *f.n;
    if (f.count) section(cfg, "gen_modes")["count"] = *f.count;
}

// ---------------------------------------------------------------------------
// Resolution: fill defaults, validate, and record what was used.

struct Common {
    fs::path out;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::uint64_t cap = kDefaultEnumerationCap;
};

Common resolve_common(json& cfg) {
    Common c;
    c.out = get_or<std::string>(cfg, "out", "out");
    c.seed = get_or<std::uint64_t>(cfg, "seed", 0);
    c.threads = get_or<std::size_t>(cfg, "threads", 1);
    c.cap = get_or<std::uint64_t>(cfg, "cap", kDefaultEnumerationCap);
    if (c.threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
    cfg["out"] = c.out.string();
    cfg["seed"] = c.seed;
    cfg["threads"] = c.threads;
    cfg["cap"] = c.cap;
    return c;
}

GmParams resolve_params(json& cfg) {
    json& j = section(cfg, "params");
    check_keys(j, "params", {"q", "alpha", "omega", "beta"});
    GmParams p;
    p.q = get_or(j, "q", p.q);
    p.alpha = get_or(j, "alpha", p.alpha);
    p.omega = get_or(j, "omega", p.omega);
    p.beta = get_or(j, "beta", p.beta);
    p.validate();
    j = {{"q", p.q}, {"alpha", p.alpha}, {"omega", p.omega}, {"beta", p.beta}};
    return p;
}

struct Task {
    std::optional<BitSequenceTask> bitseq;
    std::unique_ptr<RewardModel> reward;
    std::unique_ptr<SequenceSpace> space;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    return in;
}

Task resolve_task(json& cfg, double beta) {
    if (!cfg.contains("task")) {
        throw std::invalid_argument("config: missing 'task' section");
    }
    json& j = cfg["task"];
    const std::string kind = get_or<std::string>(j, "kind", "");
    Task t;
    if (kind == "bitseq") {
        check_keys(j, "task", {"kind", "n", "k", "modes", "num_modes", "modes_seed"});
        const auto n = j.at("n").get<std::size_t>();
        const auto k = j.at("k").get<std::size_t>();
        std::vector<std::string> modes;
        if (j.contains("modes")) {
            auto in = open_input(j.at("modes").get<std::string>());
            modes = read_modes(in);
        } else {
            const auto m = get_or<std::size_t>(j, "num_modes", 3);
            const auto seed = get_or<std::uint64_t>(j, "modes_seed", 0);
            modes = generate_modes(n, m, seed);
            j["num_modes"] = m;
            j["modes_seed"] = seed;
        }
        t.bitseq.emplace(n, k, modes);
        t.space = std::make_unique<SequenceSpace>(t.bitseq->space());
        t.reward = std::make_unique<BitSequenceReward>(*t.bitseq, beta);
    } else if (kind == "reward-table") {
        check_keys(j, "task",
                   {"kind", "alphabet", "min_len", "max_len", "variable_length", "table", "stats"});
        t.space = std::make_unique<SequenceSpace>(
            j.at("alphabet").get<std::vector<std::string>>(), j.at("min_len").get<std::size_t>(),
            j.at("max_len").get<std::size_t>(), get_or(j, "variable_length", false));
        j["variable_length"] = t.space->variable_length();
        auto in = open_input(j.at("table").get<std::string>());
        auto scores = read_reward_tsv(in, *t.space);
        std::optional<NormalizationStats> stats;
        if (j.contains("stats")) {
            auto sin = open_input(j.at("stats").get<std::string>());
            stats = read_stats_json(sin);
        }
        t.reward = std::make_unique<RewardTable>(*t.space, std::move(scores), beta, stats);
    } else {
        throw std::invalid_argument("config: task.kind must be 'bitseq' or 'reward-table'");
    }
    return t;
}

// ---------------------------------------------------------------------------
// Output helpers

void prepare_out(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::invalid_argument("cannot create output directory '" + dir.string() +
                                    "': " + ec.message());
    }
}

void write_out(const fs::path& dir, const std::string& name, const std::string& contents) {
    write_file_atomic((dir / name).string(), contents);
}

void write_resolved(const fs::path& dir, const std::string& command, json cfg) {
    cfg["command"] = command;
    write_out(dir, "resolved_config.json", cfg.dump(2) + "\n");
}

std::string banner(const GmParams& p) {
    if (p.is_gfn()) {
        return "GFN mode (q=0, omega=1): target is proportional to exp(beta * reward)";
    }
    return "GM mode (q=" + format_double(p.q) + ", alpha=" + format_double(p.alpha) +
           ", omega=" + format_double(p.omega) + ")";
}

// ---------------------------------------------------------------------------
// Commands

void cmd_solve(json cfg, std::ostream& out) {
    const Common common = resolve_common(cfg);
    const GmParams params = resolve_params(cfg);
    const Task task = resolve_task(cfg, params.beta);
    if (const auto* table = dynamic_cast<const RewardTable*>(task.reward.get())) {
        table->check_total(*task.space, common.cap);
    }
    prepare_out(common.out);
    out << banner(params) << '\n';

    const Solution sol = solve_backward(*task.space, *task.reward, params, common.cap);
    const auto& space = *task.space;

    std::ostringstream values;
    values << "state,value\n";
    for (const auto& [prefix, v] : sol.values.nonterminal()) {
        values << space.render(prefix) << ',' << format_double(v) << '\n';
    }
    std::ostringstream policy;
    policy << "state,action,prob\n";
    for (const auto& [prefix, dist] : sol.policy.entries()) {
        for (std::size_t a = 0; a < dist.size(); ++a) {
            policy << space.render(prefix) << ',' << a << ',' << format_double(dist[a]) << '\n';
        }
    }
    const auto dist = terminal_distribution(space, sol.policy, common.cap);
    std::ostringstream terminals;
    terminals << "sequence,prob,reward\n";
    for (const auto& [x, p] : dist) {
        terminals << space.render(x) << ',' << format_double(p) << ','
                  << format_double(task.reward->reward(x)) << '\n';
    }
    std::ostringstream quantiles;
    write_quantiles_csv(quantiles, quantile_mass_report(space, *task.reward, sol.policy.as_policy(),
                                                        10, common.cap));

    write_out(common.out, "values.csv", values.str());
    write_out(common.out, "policy.csv", policy.str());
    write_out(common.out, "terminal_dist.csv", terminals.str());
    write_out(common.out, "quantiles.csv", quantiles.str());
    write_resolved(common.out, "solve", cfg);
    out << "v(root) = " << format_double(sol.values.value(space.root()))
        << "; expected reward = " << format_double(expected_reward(dist, *task.reward)) << '\n';
}

TrainConfig resolve_train(json& cfg, const GmParams& params, const Common& common) {
    json& j = section(cfg, "train");
    check_keys(j, "train",
               {"batch_size", "learning_rate", "steps", "explore_eps", "grad_clip", "adam_eps",
                "adam_beta1", "adam_beta2"});
    TrainConfig t;
    t.params = params;
    t.batch_size = get_or(j, "batch_size", t.batch_size);
    t.learning_rate = get_or(j, "learning_rate", t.learning_rate);
    t.steps = get_or(j, "steps", t.steps);
    t.explore_eps = get_or(j, "explore_eps", t.explore_eps);
    t.grad_clip = get_or(j, "grad_clip", t.grad_clip);
    t.adam_eps = get_or(j, "adam_eps", t.adam_eps);
    t.adam_beta1 = get_or(j, "adam_beta1", t.adam_beta1);
    t.adam_beta2 = get_or(j, "adam_beta2", t.adam_beta2);
    t.seed = common.seed;
    t.threads = common.threads;
    t.validate();
    j = {{"batch_size", t.batch_size}, {"learning_rate", t.learning_rate},
         {"steps", t.steps},           {"explore_eps", t.explore_eps},
         {"grad_clip", t.grad_clip},   {"adam_eps", t.adam_eps},
         {"adam_beta1", t.adam_beta1}, {"adam_beta2", t.adam_beta2}};
    return t;
}

std::string mode_metrics_csv(const BitSequenceTask& task, const std::vector<std::string>& samples,
                             double radius) {
    const ModeMetrics m = mode_metrics(task, samples, radius);
    std::ostringstream csv;
    csv << "metric,value\n";
    csv << "modes_found," << m.modes_found << '\n';
    csv << "num_modes," << task.modes().size() << '\n';
    csv << "avg_min_distance," << format_double(m.avg_min_distance) << '\n';
    csv << "found_radius," << format_double(radius) << '\n';
    return csv.str();
}

void cmd_train(json cfg, std::ostream& out) {
    const Common common = resolve_common(cfg);
    const GmParams params = resolve_params(cfg);
    const Task task = resolve_task(cfg, params.beta);
    const TrainConfig tc = resolve_train(cfg, params, common);
    const double radius = get_or(section(cfg, "eval"), "found_radius", kDefaultFoundRadius);
    prepare_out(common.out);
    out << banner(params) << '\n';

    const auto& space = *task.space;
    std::set<std::string> seen;
    BatchObserver observer;
    if (task.bitseq) {
        observer = [&](std::size_t, std::span<const Trajectory> batch) {
            for (const auto& t : batch) {
                seen.insert(space.render(t.object));
            }
        };
    }
    const TrainResult result = train(space, *task.reward, tc, observer);

    std::ostringstream snapshot;
    result.q.write_tsv(snapshot, space);
    std::ostringstream log;
    result.log.write_csv(log);
    write_out(common.out, "q_snapshot.tsv", snapshot.str());
    write_out(common.out, "train_log.csv", log.str());
    if (task.bitseq) {
        write_out(common.out, "train_modes.csv",
                  mode_metrics_csv(*task.bitseq, {seen.begin(), seen.end()}, radius));
    }
    write_resolved(common.out, "train", cfg);
    if (!result.log.records.empty()) {
        out << "steps = " << result.log.records.size()
            << "; final loss = " << format_double(result.log.records.back().loss) << '\n';
    }
}

void cmd_eval(json cfg, std::ostream& out) {
    const Common common = resolve_common(cfg);
    const GmParams params = resolve_params(cfg);
    const Task task = resolve_task(cfg, params.beta);
    json& j = section(cfg, "eval");
    check_keys(j, "eval",
               {"snapshot", "temperatures", "samples_per_temperature", "k", "delta",
                "found_radius"});
    if (!j.contains("snapshot")) {
        throw std::invalid_argument("eval needs a Q snapshot (--snapshot or eval.snapshot)");
    }
    const std::string snapshot_path = j.at("snapshot").get<std::string>();
    EvalProtocol protocol;
    protocol.temperatures = get_or(j, "temperatures", protocol.temperatures);
    protocol.samples_per_temperature =
        get_or(j, "samples_per_temperature", protocol.samples_per_temperature);
    protocol.k = get_or(j, "k", protocol.k);
    if (j.contains("delta")) {
        protocol.delta = j.at("delta").get<double>();
    }
    protocol.threads = common.threads;
    const double radius = get_or(j, "found_radius", kDefaultFoundRadius);
    for (double t : protocol.temperatures) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("temperature modifiers must be positive");
        }
    }
    const auto& space = *task.space;
    const double delta = protocol.resolved_delta(space);
    j["temperatures"] = protocol.temperatures;
    j["samples_per_temperature"] = protocol.samples_per_temperature;
    j["k"] = protocol.k;
    j["delta"] = delta;
    j["found_radius"] = radius;

    auto in = open_input(snapshot_path);
    const QFunction q = QFunction::read_tsv(in, space);
    prepare_out(common.out);
    out << banner(params) << '\n';

    const EvalReport report = evaluate_sampler(space, *task.reward, q, params, protocol, common.seed);

    json doc;
    doc["protocol"] = {{"temperatures", protocol.temperatures},
                       {"samples_per_temperature", protocol.samples_per_temperature},
                       {"k", protocol.k},
                       {"delta", delta},
                       {"delta_rule", protocol.delta ? "explicit"
                                                     : "0.25 * (min_len + max_len) / 2"},
                       {"seed", common.seed}};
    doc["mean_mode_reward"] = report.mean_mode_reward;
    doc["k_selected"] = report.selected.size();
    doc["k_requested"] = report.k_requested;
    doc["k_selected_lt_k"] = report.selected.size() < report.k_requested;
    doc["pool_size"] = report.pool_size;
    doc["objects"] = json::array();
    for (const auto& c : report.selected) {
        doc["objects"].push_back({{"seq", c.object}, {"reward", c.reward}});
    }

    std::ostringstream metrics;
    metrics << "metric,value\n";
    metrics << "mean_mode_reward," << format_double(report.mean_mode_reward) << '\n';
    metrics << "k_selected," << report.selected.size() << '\n';
    metrics << "k_requested," << report.k_requested << '\n';
    metrics << "pool_size," << report.pool_size << '\n';
    if (task.bitseq) {
        const ModeMetrics m = mode_metrics(*task.bitseq, report.pool, radius);
        metrics << "modes_found," << m.modes_found << '\n';
        metrics << "avg_min_distance," << format_double(m.avg_min_distance) << '\n';
        doc["modes_found"] = m.modes_found;
        doc["avg_min_distance"] = m.avg_min_distance;
    }

    write_out(common.out, "eval_report.json", doc.dump(2) + "\n");
    write_out(common.out, "eval_metrics.csv", metrics.str());
    write_resolved(common.out, "eval", cfg);
    out << "mean mode reward = " << format_double(report.mean_mode_reward) << " over "
        << report.selected.size() << " selected of " << report.pool_size << " distinct samples";
    if (report.selected.size() < report.k_requested) {
        out << " (k_selected < k)";
    }
    out << '\n';
}

void cmd_uset(json cfg, std::ostream& out) {
    const Common common = resolve_common(cfg);
    json& params = section(cfg, "params");
    check_keys(params, "params", {"q", "alpha", "omega", "beta"});
    json& j = section(cfg, "uset");
    check_keys(j, "uset", {"kind", "d", "r0", "grid", "range", "steps"});

    UncertaintySetSpec spec;
    spec.kind = parse_conjugate_kind(get_or<std::string>(j, "kind", "gm"));
    spec.q = get_or(params, "q", 0.0);
    spec.omega = get_or(params, "omega", 1.0);
    spec.d = get_or(j, "d", ActionVector{0.5, 0.5});
    spec.r0 = get_or(j, "r0", ActionVector{});
    const auto grid = get_or<std::size_t>(j, "grid", 101);
    const auto range = get_or(j, "range", std::vector<double>{-3.0, 3.0});
    const int steps = get_or(j, "steps", 1);
    if (range.size() != 2) {
        throw std::invalid_argument("uset range must be lo,hi");
    }
    spec.validate(2);
    params["q"] = spec.q;
    params["omega"] = spec.omega;
    j = {{"kind", std::string(to_string(spec.kind))},
         {"d", spec.d},
         {"r0", spec.r0},
         {"grid", grid},
         {"range", range},
         {"steps", steps}};

    const auto rows = boundary_trace_2d(spec, grid, range[0], range[1], steps);
    prepare_out(common.out);
    std::ostringstream csv;
    write_trace_csv(csv, rows);
    write_out(common.out, "boundary.csv", csv.str());
    write_resolved(common.out, "uset", cfg);

    const ActionVector origin{0.0, 0.0};
    const auto at_origin = minkowski_membership(spec, steps, origin);
    out << "margin at delta = (0, 0): " << format_double(at_origin.margin) << " ("
        << to_string(at_origin.status) << ")\n";
}

void cmd_gen_modes(json cfg, std::ostream& out) {
    const Common common = resolve_common(cfg);
    json& j = section(cfg, "gen_modes");
    check_keys(j, "gen_modes", {"n", "count"});
    const auto n = get_or<std::size_t>(j, "n", 16);
    const auto count = get_or<std::size_t>(j, "count", 3);
    if (n == 0 || count == 0) {
        throw std::invalid_argument("gen-modes needs n >= 1 and count >= 1");
    }
    j = {{"n", n}, {"count", count}};
    const auto modes = generate_modes(n, count, common.seed);
    prepare_out(common.out);
    std::ostringstream text;
    write_modes(text, modes);
    write_out(common.out, "modes.txt", text.str());
    write_resolved(common.out, "gen-modes", cfg);
    out << "wrote " << modes.size() << " modes of length " << n << '\n';
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--threads", f.threads, "worker threads (default 1)");
    sub->add_option("--q", f.q, "GM mixing weight q in [0, 1]");
    sub->add_option("--alpha", f.alpha, "reference softmax inverse temperature");
    sub->add_option("--omega", f.omega, "regularization strength omega > 0");
    sub->add_option("--beta", f.beta, "reward scale beta > 0");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"General mellowmax solver, trainer and evaluation toolkit", "tgm"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "exact backward-recursion solve of an enumerable task");
    add_common(solve, f);

    auto* train_cmd = app.add_subcommand("train", "TGM training of a tabular Q-function");
    add_common(train_cmd, f);
    train_cmd->add_option("--steps", f.steps, "training steps");
    train_cmd->add_option("--batch-size", f.batch_size, "trajectories per step");
    train_cmd->add_option("--lr", f.learning_rate, "Adam learning rate");

    auto* eval = app.add_subcommand("eval", "temperature-sweep evaluation of a Q snapshot");
    add_common(eval, f);
    eval->add_option("--snapshot", f.snapshot, "Q snapshot TSV from train");
    eval->add_option("--k", f.k, "number of diverse objects to select");
    eval->add_option("--samples", f.samples, "samples per temperature");
    eval->add_option("--delta", f.delta, "minimum pairwise edit distance");

    auto* uset = app.add_subcommand("uset", "2-action uncertainty-set boundary trace");
    add_common(uset, f);
    uset->add_option("--kind", f.kind, "neg-shannon | kl | gm");
    uset->add_option("--d", f.d, "reference distribution, comma separated")->delimiter(',');
    uset->add_option("--r0", f.r0, "base reward, comma separated")->delimiter(',');
    uset->add_option("--grid", f.grid, "grid resolution per axis");
    uset->add_option("--range", f.range, "lo,hi (use --range=lo,hi for negative lo)")
        ->delimiter(',');
    uset->add_option("--steps", f.uset_steps, "Minkowski step count k");

    auto* gen = app.add_subcommand("gen-modes", "write random distinct bit-string modes");
    add_common(gen, f);
    gen->add_option("--n", f.n, "bits per mode");
    gen->add_option("--count", f.count, "number of modes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        json cfg = load_config(f);
        apply_overrides(cfg, f);
        if (solve->parsed()) {
            cmd_solve(std::move(cfg), out);
        } else if (train_cmd->parsed()) {
            cmd_train(std::move(cfg), out);
        } else if (eval->parsed()) {
            cmd_eval(std::move(cfg), out);
        } else if (uset->parsed()) {
            cmd_uset(std::move(cfg), out);
        } else {
            cmd_gen_modes(std::move(cfg), out);
        }
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace tgm::cli
