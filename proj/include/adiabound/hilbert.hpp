#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adiabound/errors.hpp"

namespace adiabound {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kImaginaryResidueTolerance = 1e-10;
inline constexpr double kNegativeVarianceTolerance = 1e-10;
inline constexpr double kDegeneracyRelativeThreshold = 1e-8;

/// Normalized state in a finite-dimensional Hilbert space.
///
/// Construction normalizes the given amplitudes; a zero vector is rejected.
class StateVector {
public:
    explicit StateVector(ComplexVector amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    static StateVector basis(std::size_t dim, std::size_t index);
    static StateVector uniform(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    StateVector with_phase(double angle) const;

private:
    ComplexVector amplitudes_;
};

/// One term b * |v><v| of a structured operator. `vec` is unit norm.
struct ProjectorTerm {
    double weight = 0.0;
    ComplexVector vec;
};

/// Hermitian operator, stored either densely or as a * I + sum_k b_k |v_k><v_k|.
///
/// The structured form covers both Grover Hamiltonians and every point on the
/// segment between them without N x N storage. All operations accept either
/// form; mixing forms in arithmetic falls back to the dense form.
class HermitianOperator {
public:
    static HermitianOperator dense(ComplexMatrix matrix);
    static HermitianOperator identity_plus(std::size_t dim, double shift, std::vector<ProjectorTerm> terms);
    static HermitianOperator identity(std::size_t dim, double scale = 1.0);
    static HermitianOperator projector(const StateVector& v, double weight = 1.0);
    static HermitianOperator diagonal(std::span<const double> entries);

    std::size_t dim() const { return dim_; }
    bool is_dense() const { return dense_; }

    const ComplexMatrix& matrix() const;  // dense form only
    double shift() const { return shift_; }
    const std::vector<ProjectorTerm>& terms() const { return terms_; }

    ComplexMatrix to_dense() const;
    ComplexVector apply(const ComplexVector& x) const;

    /// Exact spectral norm (largest |eigenvalue|).
    double spectral_norm() const;

    /// exp(-i dt H) x, applied exactly through the spectral decomposition.
    ComplexVector evolve(const ComplexVector& x, double dt) const;

    /// Ascending eigenvalues, with multiplicities.
    std::vector<double> eigenvalues() const;

    HermitianOperator scaled(double factor) const;
    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);

private:
    HermitianOperator() = default;

    std::size_t dim_ = 0;
    bool dense_ = true;
    ComplexMatrix matrix_;
    double shift_ = 0.0;
    std::vector<ProjectorTerm> terms_;
};

struct EigenPair {
    double energy = 0.0;
    StateVector state;
    // E_1 - E_0; +infinity for a one-dimensional space.
    double gap = std::numeric_limits<double>::infinity();
};

/// H_lambda = H_0 + lambda (H_1 - H_0).
class InterpolatedHamiltonian {
public:
    InterpolatedHamiltonian(HermitianOperator h0, HermitianOperator h1);

    std::size_t dim() const { return h0_.dim(); }
    const HermitianOperator& h0() const { return h0_; }
    const HermitianOperator& h1() const { return h1_; }

    /// V = H_1 - H_0.
    HermitianOperator driving_term() const;

private:
    HermitianOperator h0_;
    HermitianOperator h1_;
};

HermitianOperator evaluate_hamiltonian(const InterpolatedHamiltonian& ih, double lambda);

/// Lowest eigenpair, phase-fixed so the largest-magnitude amplitude is real
/// and nonnegative. Throws DegenerateGroundState when
/// gap < 1e-8 * max(1, ||H||).
EigenPair ground_state(const HermitianOperator& h);

double expectation(const HermitianOperator& h, const StateVector& psi);
double variance(const HermitianOperator& h, const StateVector& psi);
double overlap_sq(const StateVector& a, const StateVector& b);

}  // namespace adiabound
