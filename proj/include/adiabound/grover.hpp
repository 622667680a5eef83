#pragma once

#include "adiabound/hilbert.hpp"
#include "adiabound/propagator.hpp"
#include "adiabound/schedule.hpp"

namespace adiabound::grover {

inline constexpr long long kMaxFullDimension = 4096;

/// Database of n entries with marked entry m (1-based).
class GroverInstance {
public:
    GroverInstance(long long n, long long marked = 1);

    long long n() const { return n_; }
    long long marked() const { return marked_; }

    StateVector marked_state() const;   // |m>
    StateVector uniform_state() const;  // |chi>

private:
    long long n_;
    long long marked_;
};

enum class Representation { structured, dense };

/// H_1 = 1 - |m><m|, H_0 = 1 - |chi><chi| in the full N-dimensional space.
InterpolatedHamiltonian build_full(const GroverInstance& g, Representation rep = Representation::structured);

/// The dynamics restricted to span{|m>, |r>}, |r> the normalized uniform
/// superposition of unmarked entries. The span is invariant under every H_lambda
/// and holds |chi> = c|m> + s|r>, c = 1/sqrt(N), s = sqrt(1 - 1/N).
class TwoDimReduction {
public:
    explicit TwoDimReduction(const GroverInstance& g);

    long long n() const { return n_; }
    double c() const { return c_; }
    double s() const { return s_; }

    /// 2 x 2 family in the {|m>, |r>} basis.
    const InterpolatedHamiltonian& hamiltonian() const { return ih_; }
    HermitianOperator at(double lambda) const { return evaluate_hamiltonian(ih_, lambda); }

    /// Embeds reduced amplitudes (a_m, a_r) into the full space.
    StateVector lift(const StateVector& reduced, const GroverInstance& g) const;

private:
    long long n_;
    double c_;
    double s_;
    InterpolatedHamiltonian ih_;
};

TwoDimReduction build_reduced(const GroverInstance& g);

/// sqrt(1 - 4 lambda (1 - lambda) (1 - 1/N)).
double grover_gap(long long n, double lambda);
/// (1/sqrt N) sqrt(1 - 1/N).
double grover_delta_v(long long n);
/// 1/N.
double grover_c_final(long long n);
/// Closed-form necessary run time for allowance epsilon, clamped at 0.
double grover_bound(long long n, double epsilon);

Trajectory propagate_reduced(const GroverInstance& g, const Schedule& s, const PropagatorConfig& cfg = {});

}  // namespace adiabound::grover
