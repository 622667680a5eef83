#include "adiabound/grover.hpp"

#include <cmath>
#include <string>

namespace adiabound::grover {

namespace {

void require_n(long long n, const char* where) {
    if (n < 2) throw DomainError(std::string(where) + ": N must be >= 2, got " + std::to_string(n));
}

InterpolatedHamiltonian reduced_family(double c, double s) {
    ComplexMatrix h0(2, 2);
    h0 << s * s, -c * s, -c * s, c * c;
    ComplexMatrix h1(2, 2);
    h1 << 0.0, 0.0, 0.0, 1.0;
    return InterpolatedHamiltonian(HermitianOperator::dense(h0), HermitianOperator::dense(h1));
}

}  // namespace

GroverInstance::GroverInstance(long long n, long long marked) : n_(n), marked_(marked) {
    require_n(n, "GroverInstance");
    if (marked < 1 || marked > n) {
        throw DomainError("GroverInstance: marked entry must lie in [1, N], got " + std::to_string(marked));
    }
}

StateVector GroverInstance::marked_state() const {
    return StateVector::basis(static_cast<std::size_t>(n_), static_cast<std::size_t>(marked_ - 1));
}

StateVector GroverInstance::uniform_state() const { return StateVector::uniform(static_cast<std::size_t>(n_)); }

InterpolatedHamiltonian build_full(const GroverInstance& g, Representation rep) {
    if (g.n() > kMaxFullDimension) {
        throw DomainError("build_full: N = " + std::to_string(g.n()) + " exceeds " +
                          std::to_string(kMaxFullDimension) + "; use build_reduced for large N");
    }
    const auto dim = static_cast<std::size_t>(g.n());
    const auto identity = HermitianOperator::identity(dim);
    HermitianOperator h0 = identity - HermitianOperator::projector(g.uniform_state());
    HermitianOperator h1 = identity - HermitianOperator::projector(g.marked_state());
    if (rep == Representation::dense) {
        h0 = HermitianOperator::dense(h0.to_dense());
        h1 = HermitianOperator::dense(h1.to_dense());
    }
    return InterpolatedHamiltonian(std::move(h0), std::move(h1));
}

TwoDimReduction::TwoDimReduction(const GroverInstance& g)
    : n_(g.n()),
      c_(1.0 / std::sqrt(static_cast<double>(g.n()))),
      s_(std::sqrt(1.0 - 1.0 / static_cast<double>(g.n()))),
      ih_(reduced_family(c_, s_)) {}

StateVector TwoDimReduction::lift(const StateVector& reduced, const GroverInstance& g) const {
    if (reduced.dim() != 2) throw DimensionMismatch("TwoDimReduction::lift: expected a 2-component state");
    if (g.n() != n_) throw DimensionMismatch("TwoDimReduction::lift: instance size differs");
    const auto n = static_cast<Eigen::Index>(g.n());
    const Complex rest = reduced[1] / std::sqrt(static_cast<double>(g.n() - 1));
    ComplexVector full = ComplexVector::Constant(n, rest);
    full(static_cast<Eigen::Index>(g.marked() - 1)) = reduced[0];
    return StateVector(std::move(full));
}

TwoDimReduction build_reduced(const GroverInstance& g) { return TwoDimReduction(g); }

double grover_gap(long long n, double lambda) {
    require_n(n, "grover_gap");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("grover_gap: lambda must lie in [0, 1]");
    const double q = 1.0 - 1.0 / static_cast<double>(n);
    return std::sqrt(1.0 - 4.0 * lambda * (1.0 - lambda) * q);
}

double grover_delta_v(long long n) {
    require_n(n, "grover_delta_v");
    const double inv = 1.0 / static_cast<double>(n);
    return std::sqrt(inv) * std::sqrt(1.0 - inv);
}

double grover_c_final(long long n) {
    require_n(n, "grover_c_final");
    return 1.0 / static_cast<double>(n);
}

double grover_bound(long long n, double epsilon) {
    require_n(n, "grover_bound");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("grover_bound: epsilon must lie in [0, 1]");
    const double inv = 1.0 / static_cast<double>(n);
    const double keep = 1.0 - epsilon;
    // keep * (1 - inv / keep) is negative or zero exactly when keep <= 1/N
    if (keep <= inv) return 0.0;
    return std::sqrt(static_cast<double>(n)) * keep * (1.0 - inv / keep) / std::sqrt(1.0 - inv);
}

Trajectory propagate_reduced(const GroverInstance& g, const Schedule& s, const PropagatorConfig& cfg) {
    return propagate(build_reduced(g).hamiltonian(), s, cfg);
}

}  // namespace adiabound::grover
