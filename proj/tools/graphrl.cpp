#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "graphrl/agent.hpp"
#include "graphrl/checkpoint.hpp"
#include "graphrl/collective.hpp"
#include "graphrl/config.hpp"
#include "graphrl/corpus.hpp"
#include "graphrl/costmodel.hpp"
#include "graphrl/inference.hpp"
#include "graphrl/oracle.hpp"

namespace fs = std::filesystem;
using namespace graphrl;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kRuntimeError = 4 };

fs::path output_root() {
    if (const char* root = std::getenv("GRAPHRL_OUTPUT_ROOT"); root && *root) return root;
    return "runs";
}

fs::path resolve_out(const std::string& given, const std::string& command) {
    return given.empty() ? output_root() / command : fs::path(given);
}

struct GenOptions {
    std::string type;
    NodeId nodes = 0;
    double rho = 0.15;
    NodeId degree = 4;
    std::size_t count = 1;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen(const GenOptions& o) {
    if (o.type.empty()) throw ConfigError("gen needs --type er|ba");
    if (o.type != "er" && o.type != "ba") throw ConfigError("unknown graph type '" + o.type + "'");
    if (o.nodes == 0) throw ConfigError("gen needs --nodes > 0");
    const std::string spec = o.type == "er" ? fmt::format("er:{}:{}:{}:{}", o.nodes, o.rho, o.count, o.seed)
                                            : fmt::format("ba:{}:{}:{}:{}", o.nodes, o.degree, o.count, o.seed);
    const auto graphs = generate_corpus(spec);
    const auto dir = resolve_out(o.out, "graphs");
    write_corpus(dir, graphs);
    std::cout << fmt::format("wrote {} graphs ({}) to {}\n", graphs.size(), spec, dir.string());
    return kOk;
}

struct TrainOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::map<std::string, std::string> flags;
    std::string resume;
    std::string out;
};

RunConfig build_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

std::vector<double> references(const std::vector<NamedGraph>& graphs, NodeId exact_limit) {
    std::vector<double> out;
    for (const auto& g : graphs) out.push_back(reference_size(*g.graph, exact_limit).size);
    return out;
}

int cmd_train(const TrainOptions& o) {
    auto overrides = o.overrides;
    for (const auto& [key, value] : o.flags) {
        if (!value.empty()) overrides.push_back(key + "=" + value);
    }
    auto cfg = build_config(o.config, overrides);
    if (cfg.train_data.empty()) throw ConfigError("train_data is empty");
    const auto out_dir = resolve_out(o.out.empty() ? cfg.output_dir : o.out, "train");
    fs::create_directories(out_dir);
    {
        std::ofstream echo(out_dir / "effective_config.txt");
        echo << cfg.to_text();
    }
    const auto train_graphs = resolve_graphs(cfg.train_data);
    const auto eval_graphs = resolve_graphs(cfg.eval_data);
    EvalSet eval{to_dataset(eval_graphs), references(eval_graphs, cfg.exact_limit)};
    std::optional<Checkpoint> resume;
    if (!o.resume.empty()) resume = load_checkpoint(o.resume);

    std::ofstream metrics(out_dir / "metrics.csv");
    write_metrics_header(metrics);
    WorkerGroup group(cfg.workers);
    TrainResult result;
    group.run([&](Communicator& comm) {
        auto on_row = [&](const MetricsRow& row) {
            if (comm.rank() != 0) return;
            write_metrics_row(metrics, row);
            metrics.flush();
        };
        auto r = train(to_dataset(train_graphs), eval, cfg.train, comm, resume ? &*resume : nullptr, on_row);
        if (comm.rank() == 0) result = std::move(r);
    });
    save_checkpoint(out_dir / "checkpoint.bin", result.checkpoint());

    std::cout << fmt::format("trained {} steps over {} episodes (total steps {})\n", cfg.train.max_steps,
                             result.episodes, result.steps);
    if (!result.metrics.empty()) {
        const auto& first = result.metrics.front();
        const auto& last = result.metrics.back();
        auto best = first;
        for (const auto& m : result.metrics) {
            if (m.mean_approx_ratio < best.mean_approx_ratio) best = m;
        }
        std::cout << fmt::format("mean approx ratio: step {} {:.4f} -> step {} {:.4f} (best {:.4f} at step {})\n",
                                 first.step, first.mean_approx_ratio, last.step, last.mean_approx_ratio,
                                 best.mean_approx_ratio, best.step);
    }
    std::cout << "outputs in " << out_dir.string() << '\n';
    return kOk;
}

struct SolveOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::string checkpoint;
    std::vector<std::string> graphs;
    std::string schedule;
    int workers = 0;
    std::string out;
};

int cmd_solve(const SolveOptions& o) {
    auto cfg = build_config(o.config, o.overrides);
    if (!o.schedule.empty()) cfg.set("d_schedule", o.schedule);
    if (o.workers > 0) cfg.workers = o.workers;
    if (o.checkpoint.empty()) throw ConfigError("solve needs --checkpoint");
    if (!fs::exists(o.checkpoint)) throw DataError("checkpoint not found: " + o.checkpoint);
    const auto ckpt = load_checkpoint(o.checkpoint);
    const auto schedule = SelectionSchedule::parse(cfg.d_schedule);
    const auto graphs = resolve_graphs(o.graphs);
    if (graphs.empty()) throw ConfigError("solve needs --graphs");

    WorkerGroup group(cfg.workers);
    std::vector<GraphSolution> solved;
    const auto start = std::chrono::steady_clock::now();
    group.run([&](Communicator& comm) {
        auto r = solve_all(to_dataset(graphs), ckpt.params, schedule, comm);
        if (comm.rank() == 0) solved = std::move(r);
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path out = o.out.empty() ? output_root() / "solve" / "results.txt" : fs::path(o.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream file(out);
    if (!file) throw DataError("cannot write " + out.string());
    std::size_t evals = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto& s = solved[i];
        if (!is_vertex_cover(*graphs[i].graph, std::span<const NodeId>(s.cover))) {
            throw std::runtime_error("internal error: solution for " + graphs[i].id + " is not a cover");
        }
        file << format_result({graphs[i].id, s.cover.size(), s.policy_evals, s.cover}) << '\n';
        evals += s.policy_evals;
    }
    std::cout << fmt::format("solved {} graphs with schedule {} on {} workers: {} policy evaluations, {:.3f} s\n",
                             graphs.size(), schedule.to_string(), cfg.workers, evals, seconds);
    std::cout << "results in " << out.string() << '\n';
    return kOk;
}

struct EvalOptions {
    std::string results;
    std::vector<std::string> graphs;
    NodeId exact_limit = kDefaultExactLimit;
    std::string bound = "best";
    std::string out;
};

int cmd_eval(const EvalOptions& o) {
    if (o.results.empty()) throw ConfigError("eval needs --results");
    if (o.bound != "best" && o.bound != "matching") throw ConfigError("--bound must be best or matching");
    if (o.exact_limit > kMaxExactLimit) throw ConfigError("--exact-limit must be <= 64");
    const auto results = read_results(o.results);
    std::map<std::string, std::shared_ptr<const Graph>> by_id;
    for (auto& g : resolve_graphs(o.graphs)) by_id[g.id] = g.graph;

    const fs::path out = o.out.empty() ? output_root() / "eval" / "ratios.csv" : fs::path(o.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream file(out);
    if (!file) throw DataError("cannot write " + out.string());
    file << "graph_id,cover_size,reference_size,ratio,reference_kind\n";
    double sum = 0;
    for (const auto& r : results) {
        const auto it = by_id.find(r.graph_id);
        if (it == by_id.end()) throw DataError("no graph named '" + r.graph_id + "' among --graphs");
        const Graph& g = *it->second;
        for (NodeId v : r.nodes) {
            if (v >= g.num_nodes()) throw DataError(r.graph_id + ": node " + std::to_string(v) + " out of range");
        }
        if (!is_vertex_cover(g, std::span<const NodeId>(r.nodes))) {
            throw DataError(r.graph_id + ": result is not a vertex cover");
        }
        auto ref = reference_size(g, o.exact_limit);
        if (o.bound == "matching" && !ref.exact()) {
            ref = {static_cast<double>(matching_lower_bound(g)), "matching_lb"};
        }
        const double ratio = approx_ratio(r.cover_size, ref.size);
        sum += ratio;
        file << fmt::format("{},{},{},{:.6f},{}\n", r.graph_id, r.cover_size, ref.size, ratio, ref.kind);
    }
    std::cout << fmt::format("evaluated {} results, mean ratio {:.4f}; written to {}\n", results.size(),
                             results.empty() ? 0.0 : sum / static_cast<double>(results.size()), out.string());
    return kOk;
}

struct CostOptions {
    CostConfig cfg;
    bool csv = false;
    bool compare = false;
    std::uint64_t seed = 1;
};

int cmd_cost(const CostOptions& o) {
    const auto& c = o.cfg;
    c.validate();
    const auto te = t_embed(c);
    const auto ta = t_action(c);
    const auto mem = memory_bytes(c);
    const std::vector<std::pair<std::string, double>> rows{
        {"t_embed.compute", te.compute},
        {"t_embed.latency", te.latency},
        {"t_embed.bandwidth", te.bandwidth},
        {"t_embed_seq", t_embed_seq(c)},
        {"t_action.compute", ta.compute},
        {"t_action.latency", ta.latency},
        {"t_action.bandwidth", ta.bandwidth},
        {"t_action_seq", t_action_seq(c)},
        {"efficiency_embed", efficiency_embed(c)},
        {"efficiency_action", efficiency_action(c)},
        {"memory.adjacency_bytes", mem.adjacency},
        {"memory.solutions_bytes", mem.solutions},
        {"memory.candidates_bytes", mem.candidates},
        {"memory.replay_bytes", mem.replay},
        {"implied_edges", implied_edges(c)},
    };
    if (o.csv) {
        std::cout << "quantity,value\n";
        for (const auto& [k, v] : rows) std::cout << fmt::format("{},{:.10g}\n", k, v);
    } else {
        std::cout << fmt::format("B={} N={} rho={} K={} L={} P={} alpha={} beta={} R={}\n", c.B, c.N, c.rho, c.K,
                                 c.L, c.P, c.alpha, c.beta, c.R);
        for (const auto& [k, v] : rows) std::cout << fmt::format("  {:<26} {:>18.6g}\n", k, v);
    }
    if (o.compare) {
        const auto m = measure_instrumented(c, o.seed);
        const auto report = compare_instrumented(c, m);
        if (o.csv) {
            std::cout << "quantity,model,measured,diverges\n";
            for (const auto& r : report) {
                std::cout << fmt::format("{},{:.10g},{:.10g},{}\n", r.quantity, r.model, r.measured, r.diverges);
            }
        } else {
            std::cout << "instrumented comparison (flag: >2x divergence)\n";
            for (const auto& r : report) {
                std::cout << fmt::format("  {:<30} model {:>14.6g}  measured {:>14.6g}  {}\n", r.quantity, r.model,
                                         r.measured, r.diverges ? "DIVERGES" : "ok");
            }
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed deep Q-learning for minimum vertex cover"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "generate a graph corpus");
    g->add_option("--type", gen.type, "er or ba");
    g->add_option("--nodes,-n", gen.nodes, "nodes per graph");
    g->add_option("--rho", gen.rho, "ER edge probability");
    g->add_option("--degree,-d", gen.degree, "BA edges per new node");
    g->add_option("--count", gen.count, "number of graphs");
    g->add_option("--seed", gen.seed, "seed of the first graph");
    g->add_option("--out,-o", gen.out, "output directory");

    TrainOptions tr;
    auto* t = app.add_subcommand("train", "train a policy");
    t->add_option("--config,-c", tr.config, "config file");
    t->add_option("--set", tr.overrides, "key=value override (repeatable)");
    for (const auto& [flag, key] : std::vector<std::pair<std::string, std::string>>{
             {"--workers", "workers"}, {"--seed", "seed"}, {"--steps", "max_steps"}, {"--tau", "tau"},
             {"--train-data", "train_data"}, {"--eval-data", "eval_data"}}) {
        t->add_option(flag, tr.flags[key], "sets " + key);
    }
    t->add_option("--resume", tr.resume, "checkpoint to continue from");
    t->add_option("--out,-o", tr.out, "output directory");

    SolveOptions so;
    auto* s = app.add_subcommand("solve", "solve graphs with a trained policy");
    s->add_option("--config,-c", so.config, "config file");
    s->add_option("--set", so.overrides, "key=value override (repeatable)");
    s->add_option("--checkpoint", so.checkpoint, "checkpoint file");
    s->add_option("--graphs", so.graphs, "edge-list files, directories or generator specs");
    s->add_option("--d-schedule", so.schedule, "adaptive, fixed:<d> or f:d,... tiers");
    s->add_option("--workers,-p", so.workers, "worker count");
    s->add_option("--out,-o", so.out, "result file");

    EvalOptions ev;
    auto* e = app.add_subcommand("eval", "score solve results against exact or bound references");
    e->add_option("--results", ev.results, "result file from solve");
    e->add_option("--graphs", ev.graphs, "the graphs that were solved");
    e->add_option("--exact-limit", ev.exact_limit, "largest graph solved exactly (<= 64)");
    e->add_option("--bound", ev.bound, "lower bound beyond the exact limit: best (default) or matching");
    e->add_option("--out,-o", ev.out, "ratio CSV");

    CostOptions co;
    auto* c = app.add_subcommand("cost-model", "evaluate the analytical cost model");
    c->add_option("-B", co.cfg.B, "batch size");
    c->add_option("-N", co.cfg.N, "nodes");
    c->add_option("--rho", co.cfg.rho, "edge probability");
    c->add_option("-K", co.cfg.K, "embedding dimension");
    c->add_option("-L", co.cfg.L, "layers");
    c->add_option("-P", co.cfg.P, "workers");
    c->add_option("--alpha", co.cfg.alpha, "latency (s)");
    c->add_option("--beta", co.cfg.beta, "inverse bandwidth (s/element)");
    c->add_option("-R", co.cfg.R, "replay capacity");
    c->add_flag("--csv", co.csv, "CSV output");
    c->add_flag("--compare", co.compare, "run an instrumented comparison");
    c->add_option("--seed", co.seed, "seed for the instrumented run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*t) return cmd_train(tr);
        if (*s) return cmd_solve(so);
        if (*e) return cmd_eval(ev);
        if (*c) return cmd_cost(co);
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return kConfigError;
    } catch (const DataError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kDataError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kRuntimeError;
    }
    return kRuntimeError;
}
