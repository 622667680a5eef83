#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adiabound/bounds.hpp"
#include "adiabound/grover.hpp"
#include "adiabound/propagator.hpp"
#include "adiabound/schedule.hpp"

namespace adiabound::experiments {

/// Either a Grover instance (propagated through its 2D reduction) or a generic
/// matrix pair (propagated in full).
class Model {
public:
    static Model grover(grover::GroverInstance g);
    static Model matrix_pair(InterpolatedHamiltonian ih);

    bool is_grover() const { return std::holds_alternative<grover::GroverInstance>(model_); }
    const grover::GroverInstance& grover_instance() const { return std::get<grover::GroverInstance>(model_); }
    const InterpolatedHamiltonian& matrix_hamiltonian() const { return std::get<InterpolatedHamiltonian>(model_); }

    long long dim() const;
    Trajectory simulate(const Schedule& s, const PropagatorConfig& cfg) const;
    double delta_v() const;
    double c_final() const;
    /// Necessary run time for allowance epsilon.
    double lower_bound(double epsilon) const;

private:
    explicit Model(std::variant<grover::GroverInstance, InterpolatedHamiltonian> m) : model_(std::move(m)) {}

    std::variant<grover::GroverInstance, InterpolatedHamiltonian> model_;
};

/// Reads {"dim": n, "h0": [[[re, im], ...], ...], "h1": ...} (row-major).
InterpolatedHamiltonian load_matrix_pair(std::istream& in);
InterpolatedHamiltonian load_matrix_pair(const std::filesystem::path& path);

struct SearchOptions {
    double t_lo = 0.1;
    double t_hi = 10.0;
    double rel_tol = 1e-3;
    int points_per_decade = 16;
    int max_doublings = 20;
    PropagatorConfig propagator;
};

struct MinRunTime {
    double t_f = 0.0;
    double final_fidelity = 0.0;
    // the largest probe known to fail, or 0 when t_lo already succeeds
    double t_fail = 0.0;
    // t_f * (1 - rel_tol) was re-simulated and fails the allowance
    bool verified = false;
    int evaluations = 0;
    Trajectory trajectory;
};

/// Smallest run time along the path meeting 1 - F(1) < epsilon, defined as the
/// first crossing on a geometric grid (points_per_decade) refined by bisection.
/// Throws BracketNotFound if t_hi doubled max_doublings times never succeeds.
MinRunTime min_run_time(const Path& path, const Model& model, double epsilon, const SearchOptions& opts = {});

struct PowerLawFit {
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    double prefactor = 0.0;
    std::size_t points = 0;
};

/// Least-squares fit of log y = log a + k log x.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::linear;
    double parameter = 0.0;   // power exponent or tanh steepness
    std::string file;         // tabulated only
};

/// The path this spec describes for a problem of size n.
Path make_path(const ScheduleSpec& spec, long long n);
ScheduleSpec parse_schedule_spec(const std::string& kind, double power, double steepness, const std::string& file);

struct SweepConfig {
    std::vector<long long> grover_n;
    long long marked = 1;
    std::string matrix_file;  // non-empty selects the matrix-pair model
    std::vector<ScheduleSpec> schedules;
    std::vector<double> epsilon;
    double t_lo = 0.1;
    double t_hi = 10.0;
    double tolerance = 1e-3;
    int samples = 200;
    int workers = 1;
    std::string csv;
    std::string json;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct SweepRecord {
    long long n = 0;
    double epsilon = 0.0;
    std::string schedule;
    double t_f_min = 0.0;
    double lower_bound = 0.0;
    double slack_ratio = 0.0;
    double final_fidelity = 0.0;
    double audit_min_residual = 0.0;
    bool verified = false;
    std::string status = "ok";  // or the error message of the failed cell

    bool ok() const { return status == "ok"; }
};

struct ScalingFit {
    std::string schedule;
    double epsilon = 0.0;
    PowerLawFit measured;
    PowerLawFit bound;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::vector<ScalingFit> fits;
};

SweepResult sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
nlohmann::json sweep_summary(const SweepConfig& cfg, const SweepResult& result);

}  // namespace adiabound::experiments
