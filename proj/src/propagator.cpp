#include "adiabound/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace adiabound {

namespace {

constexpr double kMaxStepTimesNorm = 0.1;
constexpr double kMinStepsPerRun = 1000.0;

struct SampleReference {
    double t = 0.0;
    double lambda = 0.0;
    StateVector ground;
    double overlap = 0.0;
    double int_lambda_dt = 0.0;
};

struct RunResult {
    std::vector<TrajectorySample> samples;
    ComplexVector final_state;
};

std::vector<SampleReference> sample_references(const InterpolatedHamiltonian& ih, const Schedule& s, int samples,
                                               const StateVector& phi0) {
    std::vector<SampleReference> refs;
    refs.reserve(static_cast<std::size_t>(samples));
    const int intervals = samples - 1;
    for (int k = 0; k <= intervals; ++k) {
        const double t = k == intervals ? s.run_time() : s.run_time() * k / intervals;
        const double lambda = s.evaluate(t);
        EigenPair gs = ground_state(evaluate_hamiltonian(ih, lambda));
        const double c = overlap_sq(gs.state, phi0);
        refs.push_back(SampleReference{t, lambda, std::move(gs.state), c, integral_of_lambda(s, t)});
    }
    return refs;
}

RunResult run_fixed_step(const InterpolatedHamiltonian& ih, const Schedule& s, const StateVector& initial,
                         const std::vector<SampleReference>& refs, long long steps_per_interval) {
    const auto intervals = static_cast<long long>(refs.size()) - 1;
    const double h = s.run_time() / static_cast<double>(steps_per_interval * intervals);
    RunResult out;
    out.samples.reserve(refs.size());
    ComplexVector psi = initial.amplitudes();

    const auto record = [&](const SampleReference& ref) {
        const double norm = psi.norm();
        out.samples.push_back(TrajectorySample{ref.t, ref.lambda, std::norm(ref.ground.amplitudes().dot(psi)),
                                               ref.overlap, ref.int_lambda_dt, std::abs(norm - 1.0)});
    };

    record(refs.front());
    long long step_index = 0;
    for (long long k = 1; k <= intervals; ++k) {
        for (long long j = 0; j < steps_per_interval; ++j, ++step_index) {
            const double t_mid = std::min((static_cast<double>(step_index) + 0.5) * h, s.run_time());
            const HermitianOperator h_mid = evaluate_hamiltonian(ih, s.evaluate(t_mid));
            psi = h_mid.evolve(psi, h);
        }
        record(refs[static_cast<std::size_t>(k)]);
    }
    out.final_state = std::move(psi);
    return out;
}

double endpoint_norm(const InterpolatedHamiltonian& ih) {
    return std::max(ih.h0().spectral_norm(), ih.h1().spectral_norm());
}

double step_limit(double norm, double run_time, const PropagatorConfig& cfg) {
    double h = run_time / kMinStepsPerRun;
    if (norm > 0.0) h = std::min(h, kMaxStepTimesNorm / norm);
    if (cfg.base_step > 0.0) h = std::min(h, cfg.base_step);
    return h;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

double default_step(const InterpolatedHamiltonian& ih, double run_time, const PropagatorConfig& cfg) {
    return step_limit(endpoint_norm(ih), run_time, cfg);
}

Trajectory propagate(const InterpolatedHamiltonian& ih, const Schedule& s, const PropagatorConfig& cfg) {
    const EigenPair phi0 = ground_state(ih.h0());
    return propagate(ih, s, cfg, phi0.state);
}

Trajectory propagate(const InterpolatedHamiltonian& ih, const Schedule& s, const PropagatorConfig& cfg,
                     const StateVector& initial) {
    if (cfg.samples < 2) throw DomainError("propagate: sample count must be >= 2");
    if (initial.dim() != ih.dim()) throw DimensionMismatch("propagate: initial state dimension mismatch");
    if (cfg.check_convergence && !(cfg.convergence_tolerance > 0.0)) {
        throw DomainError("propagate: convergence tolerance must be positive");
    }

    const EigenPair phi0 = ground_state(ih.h0());
    const auto refs = sample_references(ih, s, cfg.samples, phi0.state);

    const long long intervals = cfg.samples - 1;
    const double h_max = default_step(ih, s.run_time(), cfg);
    auto per_interval = static_cast<long long>(std::ceil(s.run_time() / (h_max * static_cast<double>(intervals)) - 1e-9));
    per_interval = std::max<long long>(per_interval, 1);

    RunResult run = run_fixed_step(ih, s, initial, refs, per_interval);
    int refinements = 0;
    std::optional<double> delta;
    if (cfg.check_convergence) {
        while (true) {
            RunResult finer = run_fixed_step(ih, s, initial, refs, 2 * per_interval);
            const double change = std::abs(finer.samples.back().fidelity - run.samples.back().fidelity);
            per_interval *= 2;
            run = std::move(finer);
            delta = change;
            if (change <= cfg.convergence_tolerance) break;
            if (++refinements >= cfg.max_refinements) {
                std::ostringstream msg;
                msg << "propagate: F(1) still changes by " << change << " after " << refinements
                    << " step halvings (step " << s.run_time() / static_cast<double>(per_interval * intervals) << ")";
                throw StepSizeTooCoarse(msg.str());
            }
        }
    }

    const long long steps = per_interval * intervals;
    return Trajectory{std::move(run.samples), StateVector(run.final_state), s.run_time(),
                      s.run_time() / static_cast<double>(steps), steps, refinements, delta};
}

std::vector<CurvePoint> fidelity_curve(const Trajectory& tr) {
    std::vector<CurvePoint> out;
    out.reserve(tr.samples.size());
    for (const auto& s : tr.samples) out.push_back({s.lambda, s.fidelity, s.overlap});
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "t,lambda,F,C,int_lambda_dt,norm_dev\n";
    for (const auto& s : tr.samples) {
        out << s.t << ',' << s.lambda << ',' << s.fidelity << ',' << s.overlap << ',' << s.int_lambda_dt << ','
            << s.norm_dev << '\n';
    }
    out.precision(old_precision);
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trajectory CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,lambda,F,C,int_lambda_dt,norm_dev") throw ParseError("trajectory CSV: unexpected header");
    std::vector<TrajectorySample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 6) throw ParseError("trajectory CSV: line " + std::to_string(line_no) + ": expected 6 fields");
        double v[6];
        for (std::size_t i = 0; i < 6; ++i) {
            try {
                std::size_t used = 0;
                v[i] = std::stod(fields[i], &used);
                if (used != fields[i].size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw ParseError("trajectory CSV: line " + std::to_string(line_no) + ": bad number '" + fields[i] + "'");
            }
        }
        samples.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    if (samples.size() < 2) throw ParseError("trajectory CSV: need at least two samples");
    const double tf = samples.back().t;
    return Trajectory{std::move(samples), StateVector::basis(1, 0), tf, 0.0, 0, 0, std::nullopt};
}

}  // namespace adiabound
