// spinflow CLI: exact information-flow analysis and pinning experiments for
// kinetic Ising dynamics on small networks. Subcommands write plot-ready CSV
// or JSON tables plus a manifest per run.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinflow/calibration.hpp"
#include "spinflow/features.hpp"
#include "spinflow/graph.hpp"
#include "spinflow/infoflow.hpp"
#include "spinflow/ising.hpp"
#include "spinflow/paths.hpp"
#include "spinflow/sim.hpp"
#include "spinflow/susceptibility.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinflow;

namespace {

constexpr const char* version = "0.1.0";

struct CommonOptions {
    std::string graph_source = "kite";
    std::string beta = "auto";  // "auto" or a positive number
    double t_min = 0.1, t_max_temp = 10.0;
    std::string out_dir = "spinflow-out";
    int workers = 0;
    std::string config_echo;  // resolved flag values, filled after parsing
};

void add_output(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--out", opt.out_dir, "Output directory")
        ->envname("SPINFLOW_OUT_DIR")
        ->capture_default_str();
    cmd->add_option("--workers", opt.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--graph", opt.graph_source,
                    "Graph source: 'kite', 'path:N', a file path, or inline JSON")
        ->capture_default_str();
    cmd->add_option("--beta", opt.beta, "Inverse temperature, or 'auto' to calibrate")
        ->capture_default_str();
    cmd->add_option("--temp-min", opt.t_min, "Calibration bracket lower temperature")
        ->capture_default_str();
    cmd->add_option("--temp-max", opt.t_max_temp, "Calibration bracket upper temperature")
        ->capture_default_str();
    add_output(cmd, opt);
}

Graph load_graph(const std::string& source) {
    if (source == "kite") return krackhardt_kite();
    if (source.rfind("path:", 0) == 0) return path_graph(std::stoi(source.substr(5)));
    const auto trimmed = source.find_first_not_of(" \t\r\n");
    if (trimmed != std::string::npos && source[trimmed] == '{') return parse_graph(source);
    std::ifstream in(source);
    if (!in) throw std::invalid_argument("cannot open graph file: " + source);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

// beta resolution: explicit value or complexity-matched
double resolve_beta(const CommonOptions& opt, const Graph& g, json& manifest) {
    if (opt.beta != "auto") {
        const double beta = std::stod(opt.beta);
        if (!(beta > 0)) throw std::invalid_argument("--beta must be positive or 'auto'");
        manifest["beta"] = beta;
        manifest["beta_source"] = "explicit";
        return beta;
    }
    const auto cal = match_noise(g, opt.t_min, opt.t_max_temp);
    manifest["beta"] = cal.beta_star;
    manifest["beta_source"] = "calibrated";
    manifest["temperature"] = cal.temperature;
    return cal.beta_star;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct RunContext {
    fs::path dir;
    json manifest;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    RunContext(const CommonOptions& opt, const std::string& command) {
        dir = opt.out_dir;
        fs::create_directories(dir);
        manifest["command"] = command;
        manifest["version"] = version;
        manifest["config"] = opt.config_echo;
        manifest["outputs"] = json::array();
    }

    void emit(const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        manifest["outputs"].push_back(name);
    }

    void finish(const std::string& command) {
        manifest["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  started)
                .count();
        write_file(dir / ("manifest_" + command + ".json"), manifest.dump(2) + "\n");
    }
};

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ------------------------------------------------------------ subcommands

int run_calibrate(const CommonOptions& opt) {
    RunContext ctx(opt, "calibrate");
    const Graph g = load_graph(opt.graph_source);
    ctx.manifest["graph"] = opt.graph_source;
    const auto cal = match_noise(g, opt.t_min, opt.t_max_temp);
    json report;
    report["beta_star"] = cal.beta_star;
    report["temperature"] = cal.temperature;
    report["complexity_curve"] = json::array();
    for (const auto& p : cal.curve)
        report["complexity_curve"].push_back(
            {p.temperature, p.entropy_normalized, p.disequilibrium, p.complexity});
    ctx.emit("calibrate.json", report.dump(2) + "\n");
    ModelParams params;
    params.beta = cal.beta_star;
    ctx.emit("boltzmann.csv", distribution_csv(boltzmann_distribution(g, params), g.node_count()));
    ctx.manifest["beta_star"] = cal.beta_star;
    ctx.finish("calibrate");
    std::cout << "beta_star = " << cal.beta_star << " (T = " << cal.temperature << ")\n";
    return 0;
}

int run_infoflow(const CommonOptions& opt, int t_max, std::vector<double> gammas) {
    RunContext ctx(opt, "infoflow");
    const Graph g = load_graph(opt.graph_source);
    ctx.manifest["graph"] = opt.graph_source;
    ctx.manifest["t_max"] = t_max;
    const double beta = resolve_beta(opt, g, ctx.manifest);
    ModelParams params;
    params.beta = beta;

    std::ostringstream csv;
    csv << "node,gamma,t,mi_bits\n";
    auto emit_curve = [&](const InfoCurve& curve) {
        for (int t = 0; t <= curve.t_max(); ++t)
            csv << curve.node << "," << csv_number(curve.gamma) << "," << t << ","
                << csv_number(curve.values[t]) << "\n";
    };
    if (gammas.empty()) {
        for (const auto& curve : info_curves(g, params, t_max, opt.workers)) emit_curve(curve);
    } else {
        for (double gamma : gammas)
            for (int node = 0; node < g.node_count(); ++node)
                emit_curve(info_curve(g, params, node, gamma, t_max));
    }
    ctx.emit("infoflow.csv", csv.str());
    ctx.finish("infoflow");
    return 0;
}

int run_roles(const CommonOptions& opt, int t_max) {
    RunContext ctx(opt, "roles");
    const Graph g = load_graph(opt.graph_source);
    ctx.manifest["graph"] = opt.graph_source;
    ctx.manifest["t_max"] = t_max;
    const double beta = resolve_beta(opt, g, ctx.manifest);
    ModelParams params;
    params.beta = beta;

    const auto analysis = analyze_roles(g, params, t_max, opt.workers);
    for (const auto& warning : analysis.fit_warnings) std::cerr << "warning: " << warning << "\n";
    const auto& table = analysis.table;
    std::ostringstream csv;
    csv << "node,gamma,mu,omega,mu_star_max,omega_star_max,role\n";
    for (Eigen::Index i = 0; i < table.mu.rows(); ++i)
        for (Eigen::Index k = 0; k < table.mu.cols(); ++k)
            csv << i << "," << csv_number(table.gammas[static_cast<std::size_t>(k)]) << ","
                << csv_number(table.mu(i, k)) << "," << csv_number(table.omega(i, k)) << ","
                << csv_number(table.mu_star[static_cast<std::size_t>(i)]) << ","
                << csv_number(table.omega_star[static_cast<std::size_t>(i)]) << ","
                << csv_number(table.role[static_cast<std::size_t>(i)]) << "\n";
    ctx.emit("roles.csv", csv.str());
    ctx.finish("roles");
    return 0;
}

int run_paths(const CommonOptions& opt, int horizon, bool uniform_weights) {
    RunContext ctx(opt, "paths");
    const Graph g = load_graph(opt.graph_source);
    ctx.manifest["graph"] = opt.graph_source;
    const double beta = resolve_beta(opt, g, ctx.manifest);
    ModelParams params;
    params.beta = beta;
    if (horizon == 0) horizon = g.node_count() / 2;
    ctx.manifest["horizon"] = horizon;

    const auto trajectories = enumerate_tipping_trajectories(g, params, horizon);
    const auto argmax = max_likelihood_trajectories(trajectories);
    const auto expect = flip_expectations(trajectories, g.node_count(), !uniform_weights);

    json report;
    report["count"] = trajectories.size();
    report["max_log_prob"] = argmax.front().log_prob;
    report["argmax_trajectories"] = json::array();
    for (const auto& t : argmax) report["argmax_trajectories"].push_back(t.flip_order);
    report["flip_expectations"] = json::array();
    for (Eigen::Index i = 0; i < expect.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index level = 0; level < expect.cols(); ++level) row.push_back(expect(i, level));
        report["flip_expectations"].push_back(row);
    }
    ctx.emit("paths.json", report.dump(2) + "\n");
    ctx.finish("paths");
    std::cout << trajectories.size() << " trajectories, " << argmax.size() << " co-maximal\n";
    return 0;
}

int run_susceptibility(const CommonOptions& opt, double beta, int k_max, int f_points) {
    RunContext ctx(opt, "susceptibility");
    ctx.manifest["beta"] = beta;
    std::ostringstream csv;
    csv << "k,f,beta,expectation,h2_f\n";
    for (int k = 0; k <= k_max; ++k)
        for (int i = 0; i <= f_points; ++i) {
            const double f = static_cast<double>(i) / f_points;
            csv << k << "," << csv_number(f) << "," << csv_number(beta) << ","
                << csv_number(flip_susceptibility(k, f, beta)) << ","
                << csv_number(binary_entropy(f)) << "\n";
        }
    ctx.emit("susceptibility.csv", csv.str());
    ctx.finish("susceptibility");
    return 0;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream csv;
    csv << "graph_id,pinned_node,seed,eta_below_rel,eta_above_rel,frac_time_below_rel,"
           "transitions,transitions_control\n";
    for (const auto& cell : cells) {
        if (cell.error) continue;  // errors are reported in the manifest
        csv << cell.graph_index << "," << cell.pinned_node << "," << cell.seed << ","
            << (cell.eta_below_rel ? csv_number(*cell.eta_below_rel) : "") << ","
            << (cell.eta_above_rel ? csv_number(*cell.eta_above_rel) : "") << ","
            << csv_number(cell.frac_time_below_rel) << "," << cell.transitions << ","
            << cell.transitions_control << "\n";
    }
    return csv.str();
}

int run_intervene(const CommonOptions& opt, std::uint64_t steps,
                  std::vector<std::uint64_t> seeds, const std::string& graphs_dir) {
    RunContext ctx(opt, "intervene");
    std::vector<Graph> graphs;
    if (graphs_dir.empty()) {
        graphs.push_back(load_graph(opt.graph_source));
        ctx.manifest["graph"] = opt.graph_source;
    } else {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(graphs_dir))
            if (entry.path().extension() == ".txt") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            std::ifstream in(file);
            std::stringstream buf;
            buf << in.rdbuf();
            graphs.push_back(parse_graph(buf.str()));
        }
        ctx.manifest["graphs_dir"] = graphs_dir;
        ctx.manifest["graph_count"] = graphs.size();
        if (graphs.empty()) throw std::invalid_argument("no .txt graphs in " + graphs_dir);
    }
    const double beta = resolve_beta(opt, graphs.front(), ctx.manifest);
    ModelParams params;
    params.beta = beta;
    if (seeds.empty()) seeds = default_intervention_seeds();
    ctx.manifest["seeds"] = seeds;
    ctx.manifest["steps"] = steps;

    const auto cells = intervention_sweep(graphs, params, seeds, steps, opt.workers);
    ctx.emit("intervene.csv", sweep_csv(cells));
    json errors = json::array();
    for (const auto& cell : cells)
        if (cell.error)
            errors.push_back({{"graph", cell.graph_index},
                              {"node", cell.pinned_node},
                              {"seed", cell.seed},
                              {"error", *cell.error}});
    ctx.manifest["cell_errors"] = errors;
    ctx.finish("intervene");
    return 0;
}

int run_gen_graphs(const CommonOptions& opt, int n, double p, int count, std::uint64_t seed) {
    RunContext ctx(opt, "gen-graphs");
    ctx.manifest["n"] = n;
    ctx.manifest["p"] = p;
    ctx.manifest["count"] = count;
    ctx.manifest["seed"] = seed;
    const auto graphs = erdos_renyi_ensemble(n, p, count, seed);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "graph_%03zu.txt", i);
        ctx.emit(name, to_edge_list(graphs[i]));
    }
    ctx.finish("gen-graphs");
    std::cout << "wrote " << graphs.size() << " graphs to " << opt.out_dir << "\n";
    return 0;
}

int run_pipeline(const CommonOptions& opt, int t_max, std::uint64_t steps,
                 std::vector<std::uint64_t> seeds) {
    RunContext ctx(opt, "pipeline");
    const Graph g = load_graph(opt.graph_source);
    ctx.manifest["graph"] = opt.graph_source;
    ctx.manifest["t_max"] = t_max;
    ctx.manifest["steps"] = steps;

    // calibrate (or take the explicit beta), then infoflow -> roles -> intervene
    const double beta = resolve_beta(opt, g, ctx.manifest);
    ModelParams params;
    params.beta = beta;

    const auto analysis = analyze_roles(g, params, t_max, opt.workers);
    for (const auto& warning : analysis.fit_warnings) std::cerr << "warning: " << warning << "\n";
    std::ostringstream curves_csv;
    curves_csv << "node,gamma,t,mi_bits\n";
    for (const auto& curve : analysis.curves)
        for (int t = 0; t <= curve.t_max(); ++t)
            curves_csv << curve.node << "," << csv_number(curve.gamma) << "," << t << ","
                       << csv_number(curve.values[t]) << "\n";
    ctx.emit("infoflow.csv", curves_csv.str());

    const auto& table = analysis.table;
    std::ostringstream roles_csv;
    roles_csv << "node,gamma,mu,omega,mu_star_max,omega_star_max,role\n";
    for (Eigen::Index i = 0; i < table.mu.rows(); ++i)
        for (Eigen::Index k = 0; k < table.mu.cols(); ++k)
            roles_csv << i << "," << csv_number(table.gammas[static_cast<std::size_t>(k)]) << ","
                      << csv_number(table.mu(i, k)) << "," << csv_number(table.omega(i, k)) << ","
                      << csv_number(table.mu_star[static_cast<std::size_t>(i)]) << ","
                      << csv_number(table.omega_star[static_cast<std::size_t>(i)]) << ","
                      << csv_number(table.role[static_cast<std::size_t>(i)]) << "\n";
    ctx.emit("roles.csv", roles_csv.str());

    if (seeds.empty()) seeds = default_intervention_seeds();
    ctx.manifest["seeds"] = seeds;
    const auto cells = intervention_sweep({g}, params, seeds, steps, opt.workers);
    ctx.emit("intervene.csv", sweep_csv(cells));
    ctx.finish("pipeline");
    std::cout << "pipeline done: beta = " << beta << ", outputs in " << opt.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact information flows, node roles, and pinning interventions for kinetic "
                 "Ising dynamics on small networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file (INI/TOML format)");
    app.get_config_formatter_base()->comment('#');

    CommonOptions opt;

    auto* calibrate = app.add_subcommand("calibrate", "Match the noise level by maximizing "
                                                      "statistical complexity");
    add_common(calibrate, opt);

    int t_max = 300;
    std::vector<double> gammas;
    auto* infoflow = app.add_subcommand("infoflow", "Exact lagged mutual information curves");
    add_common(infoflow, opt);
    infoflow->add_option("--t-max", t_max, "Curve horizon in steps")->capture_default_str();
    infoflow->add_option("--gamma", gammas, "Restrict to these partition fractions");

    auto* roles = app.add_subcommand("roles", "Integrated/asymptotic information and role scores");
    add_common(roles, opt);
    roles->add_option("--t-max", t_max, "Curve horizon in steps")->capture_default_str();

    int horizon = 0;
    bool uniform_weights = false;
    auto* paths = app.add_subcommand("paths", "Enumerate monotone trajectories to the tipping "
                                              "partition");
    add_common(paths, opt);
    paths->add_option("--horizon", horizon, "Flips to the tipping point (default n/2)");
    paths->add_flag("--uniform-weights", uniform_weights,
                    "Weight flip expectations uniformly instead of by probability");

    double susc_beta = 0.5;
    int k_max = 8, f_points = 100;
    auto* susceptibility =
        app.add_subcommand("susceptibility", "Degree-resolved flip susceptibility curves");
    add_output(susceptibility, opt);
    susceptibility->add_option("--beta", susc_beta, "Inverse temperature")->capture_default_str();
    susceptibility->add_option("--k-max", k_max, "Largest degree")->capture_default_str();
    susceptibility->add_option("--f-points", f_points, "Grid points over f in [0,1]")
        ->capture_default_str();

    std::uint64_t steps = 1'000'000;
    std::vector<std::uint64_t> seeds;
    std::string graphs_dir;
    auto* intervene = app.add_subcommand("intervene", "Pinning-intervention Monte Carlo sweep");
    add_common(intervene, opt);
    intervene->add_option("--steps", steps, "Attempted flips per run")->capture_default_str();
    intervene->add_option("--seeds", seeds, "Seeds (default: the six standard seeds)");
    intervene->add_option("--graphs-dir", graphs_dir,
                          "Run over every edge-list .txt in this directory instead of --graph");

    int gen_n = 10;
    double gen_p = 0.2;
    int gen_count = 100;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen-graphs", "Generate a non-isomorphic connected "
                                                 "Erdos-Renyi ensemble");
    add_output(gen, opt);
    gen->add_option("--n", gen_n, "Nodes per graph")->capture_default_str();
    gen->add_option("--p", gen_p, "Edge probability")->capture_default_str();
    gen->add_option("--count", gen_count, "Number of graphs")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();

    auto* pipeline = app.add_subcommand("pipeline", "calibrate -> infoflow -> roles -> intervene");
    add_common(pipeline, opt);
    pipeline->add_option("--t-max", t_max, "Curve horizon in steps")->capture_default_str();
    pipeline->add_option("--steps", steps, "Attempted flips per intervention run")
        ->capture_default_str();
    pipeline->add_option("--seeds", seeds, "Seeds (default: the six standard seeds)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }
    for (auto* sub : app.get_subcommands())
        opt.config_echo = sub->get_name() + "\n" + sub->config_to_str(true, false);

    try {
        if (calibrate->parsed()) return run_calibrate(opt);
        if (infoflow->parsed()) return run_infoflow(opt, t_max, gammas);
        if (roles->parsed()) return run_roles(opt, t_max);
        if (paths->parsed()) return run_paths(opt, horizon, uniform_weights);
        if (susceptibility->parsed()) return run_susceptibility(opt, susc_beta, k_max, f_points);
        if (intervene->parsed()) return run_intervene(opt, steps, seeds, graphs_dir);
        if (gen->parsed()) return run_gen_graphs(opt, gen_n, gen_p, gen_count, gen_seed);
        if (pipeline->parsed()) return run_pipeline(opt, t_max, steps, seeds);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid-config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: computation-failed: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
