#include <doctest.h>

#include <cmath>
#include <sstream>

#include "adiabound/experiments.hpp"
#include "oracles.hpp"

using namespace adiabound;
using namespace adiabound::experiments;

namespace {

const std::string kData = ADIABOUND_TEST_DATA_DIR;

Model grover_model(long long n) { return Model::grover(grover::GroverInstance(n)); }

}  // namespace

TEST_CASE("min_run_time with V = 0 returns t_lo") {
    const auto flat = load_matrix_pair(std::filesystem::path(kData + "/flat_pair.json"));
    const Model model = Model::matrix_pair(flat);
    SearchOptions opts;
    opts.t_lo = 0.25;
    const MinRunTime r = min_run_time(Path(Schedule::linear(1.0)), model, 0.1, opts);
    CHECK(r.t_f == 0.25);
    CHECK_FALSE(r.verified);
    CHECK(r.evaluations == 1);
    CHECK(r.final_fidelity == doctest::Approx(1.0).epsilon(1e-9));
    // H_1 = H_0 also gives C(1) = 1, so the bound is zero rather than undefined
    CHECK(model.lower_bound(0.1) == 0.0);
    // V = 0 on Phi_0 with a different final ground state has no finite bound
    const Model stuck = Model::matrix_pair(load_matrix_pair(std::filesystem::path(kData + "/unbounded_pair.json")));
    CHECK(stuck.delta_v() == 0.0);
    CHECK(stuck.c_final() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(stuck.lower_bound(0.1), VacuouslyUnbounded);
    CHECK(stuck.lower_bound(1.0) == 0.0);
}

TEST_CASE("min_run_time on Grover N = 4, linear") {
    const Model model = grover_model(4);
    const Path path(Schedule::linear(1.0));
    SearchOptions opts;
    const MinRunTime r = min_run_time(path, model, 0.1, opts);
    REQUIRE(r.verified);
    CHECK(1.0 - r.final_fidelity < 0.1);
    // independent re-simulation just below the answer must fail the allowance
    const Trajectory below = model.simulate(path.at_run_time(r.t_f * (1.0 - opts.rel_tol)), opts.propagator);
    CHECK(1.0 - below.final_fidelity() >= 0.1 - 1e-12);
    CHECK(r.t_fail < r.t_f);
    CHECK(r.t_f >= model.lower_bound(0.1));
    CHECK(r.trajectory.t_f == r.t_f);
}

TEST_CASE("matrix-pair model reproduces the Grover model at N = 2") {
    const Model pair = Model::matrix_pair(load_matrix_pair(std::filesystem::path(kData + "/grover2_pair.json")));
    const Model g = grover_model(2);
    CHECK(pair.dim() == 2);
    CHECK(pair.delta_v() == doctest::Approx(g.delta_v()).epsilon(1e-12));
    CHECK(pair.c_final() == doctest::Approx(g.c_final()).epsilon(1e-12));
    const Path path(Schedule::power(1.0, 2.0));
    const double a = min_run_time(path, pair, 0.05).t_f;
    const double b = min_run_time(path, g, 0.05).t_f;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("soundness: found minimal times respect the lower bound") {
    for (long long n : {16LL, 64LL, 256LL, 1024LL}) {
        const Model model = grover_model(n);
        for (const Path& path : {Path(Schedule::linear(1.0)), Path(Schedule::local_adiabatic_grover(1.0, n))}) {
            const MinRunTime r = min_run_time(path, model, 0.1);
            CAPTURE(n);
            CHECK(r.verified);
            CHECK(r.t_f >= grover::grover_bound(n, 0.1) - 1e-6);
        }
    }
}

TEST_CASE("min_run_time errors") {
    const Model model = grover_model(64);
    SearchOptions opts;
    opts.t_hi = 1.0;
    opts.max_doublings = 2;
    CHECK_THROWS_AS(min_run_time(Path(Schedule::linear(1.0)), model, 0.01, opts), BracketNotFound);
    CHECK_THROWS_AS(min_run_time(Path(Schedule::linear(1.0)), model, 1.5), DomainError);
    SearchOptions bad;
    bad.t_lo = 5.0;
    bad.t_hi = 1.0;
    CHECK_THROWS_AS(min_run_time(Path(Schedule::linear(1.0)), model, 0.1, bad), DomainError);
}

TEST_CASE("fit_power_law") {
    const std::vector<double> x{2.0, 4.0, 8.0, 16.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.75));
    const PowerLawFit f = fit_power_law(x, y);
    CHECK(f.exponent == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.stderr_exponent <= 1e-12);
    CHECK(f.points == 4);
    CHECK(std::isnan(fit_power_law({1.0, 2.0}, {1.0, 2.0}).stderr_exponent));
    CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(fit_power_law({1.0, 1.0}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(fit_power_law({1.0, -2.0}, {1.0, 2.0}), DomainError);
}

TEST_CASE("schedule specs") {
    CHECK(parse_schedule_spec("power", 3.0, 10.0, "").parameter == 3.0);
    CHECK(parse_schedule_spec("tanh", 3.0, 7.0, "").parameter == 7.0);
    CHECK(parse_schedule_spec("local-adiabatic", 3.0, 7.0, "").kind == ScheduleKind::local_adiabatic_grover);
    CHECK_THROWS_AS(parse_schedule_spec("cubic", 3.0, 7.0, ""), DomainError);
    CHECK_THROWS_AS(parse_schedule_spec("tabulated", 3.0, 7.0, ""), DomainError);
    const auto tab = parse_schedule_spec("tabulated", 0.0, 0.0, kData + "/ramp.csv");
    const Path p = make_path(tab, 4);
    CHECK(p.base().run_time() == 1.0);
    CHECK(p.base().evaluate(0.25) == doctest::Approx(0.4));
}

TEST_CASE("sweep config parsing") {
    const SweepConfig cfg = load_sweep_config(kData + "/sweep_small.json");
    CHECK(cfg.grover_n == std::vector<long long>{64, 16});
    CHECK(cfg.schedules.size() == 2);
    CHECK(cfg.schedules[1].parameter == 2.0);
    CHECK(cfg.workers == 2);
    CHECK_THROWS_AS(parse_sweep_config(nlohmann::json{{"grover_n", {4}}, {"bogus", 1}}), ParseError);
    CHECK_THROWS_AS(parse_sweep_config(nlohmann::json{{"grover_n", "four"}}), ParseError);
    CHECK_THROWS_AS(parse_sweep_config(nlohmann::json::array()), ParseError);
    CHECK_THROWS_AS(load_sweep_config(kData + "/missing.json"), ParseError);
}

TEST_CASE("sweep: empty, ordering, determinism, per-cell errors") {
    SweepConfig empty;
    empty.schedules = {ScheduleSpec{}};
    empty.epsilon = {0.1};
    const SweepResult none = sweep(empty);
    CHECK(none.records.empty());
    CHECK(none.fits.empty());
    std::ostringstream none_csv;
    write_sweep_csv(none_csv, none);
    CHECK(none_csv.str() == "N,epsilon,schedule,t_f_min,lower_bound,slack_ratio,F_final,audit_min_residual,verified,status\n");

    SweepConfig cfg = load_sweep_config(kData + "/sweep_small.json");
    const SweepResult a = sweep(cfg);
    REQUIRE(a.records.size() == 8);
    for (std::size_t i = 1; i < a.records.size(); ++i) {
        const auto& p = a.records[i - 1];
        const auto& q = a.records[i];
        CHECK((p.n < q.n || (p.n == q.n && p.epsilon <= q.epsilon)));
    }
    CHECK(a.records[0].schedule == "local-adiabatic-grover(16)");
    for (const auto& r : a.records) {
        CHECK(r.ok());
        CHECK(r.verified);
        CHECK(r.t_f_min >= r.lower_bound);
        CHECK(r.audit_min_residual >= kAuditViolationThreshold);
    }
    CHECK(a.fits.size() == 4);

    cfg.workers = 1;
    const SweepResult b = sweep(cfg);
    std::ostringstream ca;
    std::ostringstream cb;
    write_sweep_csv(ca, a);
    write_sweep_csv(cb, b);
    CHECK(ca.str() == cb.str());
    CHECK(sweep_summary(cfg, a).dump() == sweep_summary(cfg, b).dump());

    // a missing tabulated file fails its own cells only
    SweepConfig mixed;
    mixed.grover_n = {4};
    mixed.epsilon = {0.1};
    mixed.schedules = {ScheduleSpec{ScheduleKind::tabulated, 0.0, kData + "/missing.csv"}, ScheduleSpec{}};
    const SweepResult m = sweep(mixed);
    REQUIRE(m.records.size() == 2);
    CHECK_FALSE(m.records[0].ok());
    CHECK(m.records[0].schedule == "tabulated");
    CHECK(m.records[1].ok());
}

TEST_CASE("sweep over a matrix pair") {
    SweepConfig cfg;
    cfg.matrix_file = kData + "/flat_pair.json";
    cfg.schedules = {ScheduleSpec{}};
    cfg.epsilon = {0.1, 1.0};
    const SweepResult r = sweep(cfg);
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].n == 2);
    for (const auto& rec : r.records) {
        CHECK(rec.ok());
        CHECK(rec.lower_bound == 0.0);
        CHECK(rec.t_f_min == cfg.t_lo);
    }

    SweepConfig stuck = cfg;
    stuck.matrix_file = kData + "/unbounded_pair.json";
    stuck.epsilon = {0.1};
    const SweepResult u = sweep(stuck);
    REQUIRE(u.records.size() == 1);
    CHECK_FALSE(u.records[0].ok());
    CHECK(u.records[0].status.find("no finite run time") != std::string::npos);
    const auto summary = sweep_summary(cfg, r);
    CHECK(summary.at("records").size() == 2);
    CHECK(summary.at("records")[1].at("slack_ratio").is_null());
    CHECK(summary.contains("min_time_definition"));
}

TEST_CASE("matrix pair loading errors") {
    const auto load = [](const char* text) {
        std::istringstream in(text);
        return load_matrix_pair(in);
    };
    CHECK_THROWS_AS(load("{"), ParseError);
    CHECK_THROWS_AS(load(R"({"dim": 2, "h0": []})"), ParseError);
    CHECK_THROWS_AS(load(R"({"dim": 1, "h0": [[[1, 0]]], "h1": [[[1, 0], [0, 0]]]})"), ParseError);
    CHECK_THROWS_AS(load(R"({"dim": 2, "h0": [[[0,0],[1,0]],[[2,0],[0,0]]], "h1": [[[0,0],[0,0]],[[0,0],[1,0]]]})"),
                    DomainError);
}
