// Command-line front end: plan generation, LTTG inspection, single
// simulation runs, and parameter sweeps emitting plot-ready CSV.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dnf/simulator.hpp"

namespace {

int log_level() {
    const char* v = std::getenv("DNF_LOG");
    return v ? std::atoi(v) : 0;
}

void logv(const std::string& msg) {
    if (log_level() > 0) std::cerr << "[dnfsim] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot open plan file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

dnf::RouterKind parse_router(const std::string& name) {
    if (name == "dnf") return dnf::RouterKind::Dnf;
    if (name == "cgr") return dnf::RouterKind::Cgr;
    if (name == "cgr-cr") return dnf::RouterKind::CgrCr;
    throw CLI::ValidationError("unknown router: " + name);
}

struct SolverFlags {
    int iterations = 10000;
    double exploration = 100.0;
    int depth = 50;
    double discount = 0.95;
    std::string rollout = "reward";

    dnf::SolverConfig to_config() const {
        dnf::SolverConfig cfg;
        cfg.iterations = iterations;
        cfg.exploration_c = exploration;
        cfg.max_depth = depth;
        cfg.discount = discount;
        cfg.rollout = rollout == "random" ? dnf::SolverConfig::Rollout::RandomPolicy
                                          : dnf::SolverConfig::Rollout::RewardEstimate;
        return cfg;
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--iterations", f.iterations, "MCTS iterations per decision");
    cmd->add_option("--exploration", f.exploration, "UCB1 exploration constant");
    cmd->add_option("--depth", f.depth, "maximum search depth");
    cmd->add_option("--discount", f.discount, "reward discount factor");
    cmd->add_option("--rollout", f.rollout, "leaf evaluation: reward|random")
        ->check(CLI::IsMember({"reward", "random"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DTN routing under dependent node failures: POMDP router, "
                 "CGR baselines, and a discrete-event benchmark harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random contact plan");
    int g_nodes = 8, g_contacts = 70;
    long long g_horizon = 100, g_duration = 10, g_delay = 2;
    std::uint64_t g_seed = 1;
    std::string g_out;
    gen->add_option("--nodes", g_nodes, "number of nodes")->required();
    gen->add_option("--contacts", g_contacts, "bidirectional contact count")->required();
    gen->add_option("--horizon", g_horizon, "plan horizon in ticks");
    gen->add_option("--duration", g_duration, "contact window length");
    gen->add_option("--delay", g_delay, "link propagation delay");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("-o,--output", g_out, "output plan file")->required();

    // lttg
    auto* lttg_cmd = app.add_subcommand("lttg", "dump the latest-time-to-goal matrix");
    std::string l_plan;
    lttg_cmd->add_option("--plan", l_plan, "plan file")->required();

    // run
    auto* run = app.add_subcommand("run", "run one simulation");
    std::string r_plan, r_router = "dnf";
    double r_mtbf = 20.0, r_mttr = 10.0, r_ptx = 0.05, r_epsilon = 1e-3;
    std::uint64_t r_seed = 1;
    std::string r_csv;
    SolverFlags r_solver;
    run->add_option("--plan", r_plan, "plan file")->required();
    run->add_option("--router", r_router, "dnf|cgr|cgr-cr")
        ->check(CLI::IsMember({"dnf", "cgr", "cgr-cr"}));
    run->add_option("--mtbf", r_mtbf, "mean time between failures (ticks)");
    run->add_option("--mttr", r_mttr, "mean time to repair (ticks)");
    run->add_option("--ptx", r_ptx, "transmission failure probability");
    run->add_option("--epsilon", r_epsilon, "failure-model cut-off precision");
    run->add_option("--seed", r_seed, "simulation seed");
    run->add_option("--csv", r_csv, "append metrics as a CSV row to this file");
    add_solver_flags(run, r_solver);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter sweep, CSV output");
    std::string s_plan;
    int s_nodes = 8, s_contacts = 70;
    long long s_horizon = 100, s_duration = 10, s_delay = 2;
    std::vector<double> s_mtbf{10, 20, 30, 40, 50};
    std::vector<double> s_mttr{10, 20, 30, 40, 50};
    std::vector<double> s_ptx{0.05};
    std::vector<std::string> s_routers{"dnf", "cgr", "cgr-cr"};
    std::vector<std::uint64_t> s_seeds{1, 2, 3, 4, 5};
    double s_epsilon = 1e-3;
    int s_jobs = 1;
    bool s_no_timing = false;
    std::string s_out;
    SolverFlags s_solver;
    sweep->add_option("--plan", s_plan, "fixed plan file (default: generate per seed)");
    sweep->add_option("--nodes", s_nodes, "generator: node count");
    sweep->add_option("--contacts", s_contacts, "generator: bidirectional contacts");
    sweep->add_option("--horizon", s_horizon, "generator: horizon");
    sweep->add_option("--duration", s_duration, "generator: window length");
    sweep->add_option("--delay", s_delay, "generator: propagation delay");
    sweep->add_option("--mtbf", s_mtbf, "MTBF values");
    sweep->add_option("--mttr", s_mttr, "MTTR values");
    sweep->add_option("--ptx", s_ptx, "transmission failure probabilities");
    sweep->add_option("--router", s_routers, "routers to compare");
    sweep->add_option("--seeds", s_seeds, "random seeds");
    sweep->add_option("--epsilon", s_epsilon, "failure-model cut-off precision");
    sweep->add_option("--jobs", s_jobs, "parallel cells");
    sweep->add_flag("--no-timing", s_no_timing,
                    "write 0 in the timing column for reproducible output");
    sweep->add_option("-o,--output", s_out, "output CSV file")->required();
    add_solver_flags(sweep, s_solver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            auto plan = dnf::ContactPlan::generate(g_nodes, g_contacts, g_horizon,
                                                   g_duration, g_delay, g_seed);
            write_file(g_out, plan.serialize());
            std::cout << "nodes," << plan.node_count() << "\ncontacts,"
                      << plan.contacts().size() << "\nhorizon," << plan.horizon() << "\n";
        } else if (*lttg_cmd) {
            auto plan = dnf::ContactPlan::parse(read_file(l_plan));
            std::cout << dnf::LttgMatrix::compute(plan).to_csv();
        } else if (*run) {
            auto plan = dnf::ContactPlan::parse(read_file(r_plan));
            auto lttg = dnf::LttgMatrix::compute(plan);
            auto model = dnf::FailureModel::from_mtbf_mttr(r_mtbf, r_mttr, r_ptx, r_epsilon);
            dnf::RouterConfig router;
            router.kind = parse_router(r_router);
            router.solver = r_solver.to_config();
            logv("running " + r_router + " on " + r_plan);
            auto report = dnf::run_simulation(plan, model, lttg, router, r_seed);
            std::printf("delivery_ratio,%.3f\n", report.delivery_ratio);
            std::printf("transmissions,%lld\n", report.transmissions);
            std::printf("energy_efficiency,%.3f\n", report.energy_efficiency);
            std::printf("mean_delay,%.3f\n", report.mean_delay);
            std::printf("mean_hops,%.3f\n", report.mean_hops);
            std::printf("mean_decision_ms,%.3f\n", report.mean_decision_ms);
            if (!r_csv.empty()) {
                std::ostringstream row;
                row << r_router << ',' << r_mtbf << ',' << r_mttr << ',' << r_ptx << ','
                    << r_seed << ',' << report.delivery_ratio << ',' << report.transmissions
                    << ',' << report.energy_efficiency << ',' << report.mean_delay << ','
                    << report.mean_hops << ',' << report.mean_decision_ms << '\n';
                std::ofstream out(r_csv, std::ios::app);
                if (!out) throw std::runtime_error("cannot write file: " + r_csv);
                out << row.str();
            }
        } else if (*sweep) {
            dnf::SweepConfig cfg;
            std::optional<dnf::ContactPlan> fixed;
            if (!s_plan.empty()) {
                fixed = dnf::ContactPlan::parse(read_file(s_plan));
                cfg.plan.fixed = &*fixed;
            }
            cfg.plan.node_count = s_nodes;
            cfg.plan.bidirectional_contacts = s_contacts;
            cfg.plan.horizon = s_horizon;
            cfg.plan.contact_duration = s_duration;
            cfg.plan.t_prop = s_delay;
            cfg.mtbf_values = s_mtbf;
            cfg.mttr_values = s_mttr;
            cfg.ptx_values = s_ptx;
            for (const auto& r : s_routers) cfg.routers.push_back(parse_router(r));
            cfg.seeds = s_seeds;
            cfg.epsilon = s_epsilon;
            cfg.solver = s_solver.to_config();
            cfg.jobs = s_jobs;
            cfg.include_timing = !s_no_timing;
            logv("sweep: " + std::to_string(cfg.mtbf_values.size() * cfg.mttr_values.size() *
                                            cfg.ptx_values.size() * cfg.routers.size()) +
                 " cells");
            auto t0 = std::chrono::steady_clock::now();
            auto cells = dnf::run_sweep(cfg);
            auto t1 = std::chrono::steady_clock::now();
            write_file(s_out, dnf::sweep_csv(cells, cfg.include_timing));
            // aggregate timing summary for comparison against reference figures
            double ms_sum = 0.0, ms_sq = 0.0;
            long long cells_with_timing = 0;
            for (const auto& c : cells) {
                if (c.router != dnf::RouterKind::Dnf) continue;
                ms_sum += c.mean.mean_decision_ms;
                ms_sq += c.mean.mean_decision_ms * c.mean.mean_decision_ms;
                ++cells_with_timing;
            }
            if (cells_with_timing > 0) {
                const double mean = ms_sum / static_cast<double>(cells_with_timing);
                const double var = ms_sq / static_cast<double>(cells_with_timing) - mean * mean;
                std::printf("dnf_decision_ms_mean,%.3f\n", mean);
                std::printf("dnf_decision_ms_variance,%.3f\n", var);
            }
            std::printf("rows,%zu\n", cells.size());
            std::printf("wall_s,%.1f\n",
                        std::chrono::duration<double>(t1 - t0).count());
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
