// adiabound: necessary run-time bounds and Schroedinger propagation for
// linearly interpolated Hamiltonians.
//
//   adiabound bound    --grover-n 100 --epsilon 0.1
//   adiabound simulate --grover-n 4 --schedule linear --tf 50 [--out traj.csv]
//   adiabound min-time --grover-n 64 --schedule local-adiabatic --epsilon 0.1
//   adiabound sweep    --config sweep.json
//   adiabound audit    --grover-n 4 --trajectory traj.csv
//
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "adiabound/bounds.hpp"
#include "adiabound/experiments.hpp"
#include "adiabound/grover.hpp"
#include "adiabound/propagator.hpp"

namespace {

using adiabound::experiments::Model;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct ModelOptions {
    long long grover_n = 0;
    long long marked = 1;
    std::string matrix_file;
    bool full = false;
    bool dense = false;

    void add_to(CLI::App* app) {
        auto* n = app->add_option("--grover-n", grover_n, "Grover database size N (>= 2)");
        auto* f = app->add_option("--matrix-file", matrix_file, "JSON matrix pair {dim, h0, h1}");
        n->excludes(f);
        app->add_option("--marked", marked, "marked entry m in [1, N]")->capture_default_str();
    }

    bool is_grover() const { return grover_n != 0; }

    Model model() const {
        if (is_grover()) return Model::grover(adiabound::grover::GroverInstance(grover_n, marked));
        if (!matrix_file.empty()) return Model::matrix_pair(adiabound::experiments::load_matrix_pair(matrix_file));
        throw CLI::ValidationError("model", "one of --grover-n or --matrix-file is required");
    }
};

struct ScheduleOptions {
    std::string kind = "linear";
    double power = 2.0;
    double steepness = 10.0;
    std::string file;

    void add_to(CLI::App* app) {
        app->add_option("--schedule", kind, "linear | power | tanh-ramp | local-adiabatic | tabulated")
            ->capture_default_str();
        app->add_option("--power", power, "exponent of the power schedule")->capture_default_str();
        app->add_option("--steepness", steepness, "steepness of the tanh-ramp schedule")->capture_default_str();
        app->add_option("--schedule-file", file, "t,lambda CSV for the tabulated schedule");
    }

    adiabound::Path path(long long n) const {
        return adiabound::experiments::make_path(adiabound::experiments::parse_schedule_spec(kind, power, steepness, file),
                                                 n);
    }
};

struct PropagatorOptions {
    int samples = 200;
    double step = 0.0;
    bool no_check = false;

    void add_to(CLI::App* app) {
        app->add_option("--samples", samples, "trajectory sample count")->capture_default_str();
        app->add_option("--step", step, "upper bound on the time step (0: default rule)");
        app->add_flag("--no-convergence-check", no_check, "skip the step-halving check");
    }

    adiabound::PropagatorConfig config() const {
        adiabound::PropagatorConfig cfg;
        cfg.samples = samples;
        cfg.base_step = step;
        cfg.check_convergence = !no_check;
        return cfg;
    }
};

adiabound::Trajectory simulate(const ModelOptions& m, const ScheduleOptions& s, const PropagatorOptions& p, double tf) {
    const Model model = m.model();
    const adiabound::Schedule schedule = s.path(model.dim()).at_run_time(tf);
    if (model.is_grover() && (m.full || m.dense)) {
        const auto rep = m.dense ? adiabound::grover::Representation::dense : adiabound::grover::Representation::structured;
        return adiabound::propagate(adiabound::grover::build_full(model.grover_instance(), rep), schedule, p.config());
    }
    return model.simulate(schedule, p.config());
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw adiabound::ParseError("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Necessary adiabatic run-time bounds and Schroedinger propagation"};
    app.require_subcommand(1);

    // bound
    auto* bound = app.add_subcommand("bound", "print the necessary run-time bound as JSON");
    ModelOptions bound_model;
    double bound_eps = 0.0;
    bound_model.add_to(bound);
    bound->add_option("--epsilon", bound_eps, "allowance epsilon in [0, 1]")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "propagate once and write the trajectory CSV");
    ModelOptions sim_model;
    ScheduleOptions sim_sched;
    PropagatorOptions sim_prop;
    double sim_tf = 0.0;
    std::string sim_out;
    sim_model.add_to(sim);
    sim_sched.add_to(sim);
    sim_prop.add_to(sim);
    sim->add_option("--tf", sim_tf, "run time t_f")->required();
    sim->add_option("--out", sim_out, "output CSV (default stdout)");
    sim->add_flag("--full", sim_model.full, "Grover: propagate in the full N-dimensional space");
    sim->add_flag("--dense", sim_model.dense, "Grover: full space with dense matrices");

    // min-time
    auto* mt = app.add_subcommand("min-time", "search the minimal run time meeting the allowance");
    ModelOptions mt_model;
    ScheduleOptions mt_sched;
    PropagatorOptions mt_prop;
    double mt_eps = 0.1;
    adiabound::experiments::SearchOptions mt_search;
    mt_model.add_to(mt);
    mt_sched.add_to(mt);
    mt_prop.add_to(mt);
    mt->add_option("--epsilon", mt_eps, "allowance epsilon in [0, 1]")->capture_default_str();
    mt->add_option("--t-lo", mt_search.t_lo, "lower end of the search range")->capture_default_str();
    mt->add_option("--t-hi", mt_search.t_hi, "initial upper end (doubled as needed)")->capture_default_str();
    mt->add_option("--tol", mt_search.rel_tol, "relative tolerance on t_f")->capture_default_str();

    // sweep
    auto* sw = app.add_subcommand("sweep", "run a sweep configuration");
    std::string sw_config;
    std::string sw_csv;
    std::string sw_json;
    sw->add_option("--config", sw_config, "sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
    sw->add_option("--csv", sw_csv, "override the CSV output path");
    sw->add_option("--json", sw_json, "override the JSON summary path");

    // audit
    auto* au = app.add_subcommand("audit", "check |F - C| <= dV * integral of lambda on a trajectory");
    ModelOptions au_model;
    ScheduleOptions au_sched;
    PropagatorOptions au_prop;
    std::string au_traj;
    double au_tf = 0.0;
    std::optional<double> au_delta_v;
    bool au_running = false;
    au_model.add_to(au);
    au_sched.add_to(au);
    au_prop.add_to(au);
    au->add_option("--trajectory", au_traj, "saved trajectory CSV (otherwise simulate)");
    au->add_option("--tf", au_tf, "run time for a fresh simulation");
    au->add_option("--delta-v", au_delta_v, "driving uncertainty (otherwise computed from the model)");
    au->add_flag("--running", au_running, "use the running integral instead of the full-run integral");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*bound) {
            const Model model = bound_model.model();
            const auto report = adiabound::make_bound_report(model.delta_v(), model.c_final(), bound_eps);
            json j = report;
            j["vacuous"] = report.vacuous();
            std::cout << j.dump() << '\n';
        } else if (*sim) {
            if (!(sim_tf > 0.0)) throw CLI::ValidationError("--tf", "run time must be positive");
            const auto tr = simulate(sim_model, sim_sched, sim_prop, sim_tf);
            std::ostringstream csv;
            adiabound::write_trajectory_csv(csv, tr);
            emit(sim_out, csv.str());
            std::cerr << "F(1) = " << tr.final_fidelity() << ", C(1) = " << tr.final_overlap() << ", steps = " << tr.steps
                      << '\n';
        } else if (*mt) {
            const Model model = mt_model.model();
            mt_search.propagator = mt_prop.config();
            const auto path = mt_sched.path(model.dim());
            const auto found = adiabound::experiments::min_run_time(path, model, mt_eps, mt_search);
            const double lower = model.lower_bound(mt_eps);
            json j{{"schedule", path.base().label()},
                   {"epsilon", mt_eps},
                   {"t_f_min", found.t_f},
                   {"F_final", found.final_fidelity},
                   {"lower_bound", lower},
                   {"verified", found.verified},
                   {"evaluations", found.evaluations}};
            if (lower > 0.0) j["slack_ratio"] = found.t_f / lower;
            std::cout << j.dump() << '\n';
        } else if (*sw) {
            auto cfg = adiabound::experiments::load_sweep_config(sw_config);
            if (!sw_csv.empty()) cfg.csv = sw_csv;
            if (!sw_json.empty()) cfg.json = sw_json;
            const auto result = adiabound::experiments::sweep(cfg);
            std::ostringstream csv;
            adiabound::experiments::write_sweep_csv(csv, result);
            emit(cfg.csv, csv.str());
            const auto summary = adiabound::experiments::sweep_summary(cfg, result);
            if (!cfg.json.empty()) emit(cfg.json, summary.dump(2) + "\n");
            for (const auto& f : result.fits) {
                std::cerr << f.schedule << " eps=" << f.epsilon << ": exponent " << f.measured.exponent << " +- "
                          << f.measured.stderr_exponent << " (bound " << f.bound.exponent << ")\n";
            }
        } else if (*au) {
            std::optional<adiabound::Trajectory> tr;
            if (!au_traj.empty()) {
                std::ifstream in(au_traj);
                if (!in) throw adiabound::ParseError("cannot open trajectory " + au_traj);
                tr = adiabound::read_trajectory_csv(in);
            } else {
                if (!(au_tf > 0.0)) throw CLI::ValidationError("--tf", "give --trajectory or a positive --tf");
                tr = simulate(au_model, au_sched, au_prop, au_tf);
            }
            const double dv = au_delta_v ? *au_delta_v : au_model.model().delta_v();
            const auto audit =
                au_running ? adiabound::audit_inequality_running(*tr, dv) : adiabound::audit_inequality(*tr, dv);
            std::cout << json(audit).dump() << '\n';
            if (audit.violated()) std::cerr << "violation: min residual " << audit.min_residual << '\n';
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const adiabound::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const adiabound::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return 0;
}
