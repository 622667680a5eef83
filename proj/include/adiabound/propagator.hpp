#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "adiabound/hilbert.hpp"
#include "adiabound/schedule.hpp"

namespace adiabound {

struct PropagatorConfig {
    // Requested step; 0 means "use the default rule". The effective step never
    // exceeds min(0.1 / ||H||_max, t_f / 1000).
    double base_step = 0.0;
    int samples = 200;
    bool check_convergence = true;
    // Largest tolerated |F(1; h) - F(1; h/2)|.
    double convergence_tolerance = 1e-8;
    // Number of step halvings attempted before giving up with StepSizeTooCoarse.
    int max_refinements = 14;
};

struct TrajectorySample {
    double t = 0.0;
    double lambda = 0.0;
    double fidelity = 0.0;       // |<Phi_lambda|Psi>|^2
    double overlap = 0.0;        // |<Phi_lambda|Phi_0>|^2
    double int_lambda_dt = 0.0;  // integral of lambda over [0, t]
    double norm_dev = 0.0;       // | ||Psi|| - 1 |
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StateVector final_state;
    double t_f = 0.0;

    // integration metadata
    double step = 0.0;
    long long steps = 0;
    int refinements = 0;
    // |F(1)| change under the last step halving; empty when the check was off
    std::optional<double> convergence_delta;

    double final_fidelity() const { return samples.back().fidelity; }
    double final_overlap() const { return samples.back().overlap; }
};

struct CurvePoint {
    double lambda = 0.0;
    double fidelity = 0.0;
    double overlap = 0.0;
};

/// Solves i dPsi/dt = H_{lambda(t)} Psi from Psi(0) = ground state of H_0 with
/// the exponential midpoint rule. Throws DegenerateGroundState and, when the
/// convergence check is on and refinement runs out, StepSizeTooCoarse.
Trajectory propagate(const InterpolatedHamiltonian& ih, const Schedule& s, const PropagatorConfig& cfg = {});

/// As above with an explicit initial state (normally Phi_0 up to a phase).
Trajectory propagate(const InterpolatedHamiltonian& ih, const Schedule& s, const PropagatorConfig& cfg,
                     const StateVector& initial);

std::vector<CurvePoint> fidelity_curve(const Trajectory& tr);

/// The step the default rule picks for this problem before any refinement.
double default_step(const InterpolatedHamiltonian& ih, double run_time, const PropagatorConfig& cfg = {});

/// CSV with header "t,lambda,F,C,int_lambda_dt,norm_dev".
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Reads the CSV produced by write_trajectory_csv. The final state is not
/// stored in the file; the returned trajectory carries a placeholder.
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace adiabound
