#include "adiabound/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adiabound {

namespace {

constexpr double kSpanDropTolerance = 1e-10;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

ComplexVector fix_phase(ComplexVector v) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // strict comparison keeps the first index among ties
        if (std::abs(v(i)) > best_abs + 1e-14) {
            best_abs = std::abs(v(i));
            best = i;
        }
    }
    if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
    return v;
}

// Orthonormal basis of span{v_k}, two passes of modified Gram-Schmidt.
ComplexMatrix span_basis(const std::vector<ProjectorTerm>& terms, std::size_t dim) {
    std::vector<ComplexVector> basis;
    for (const auto& t : terms) {
        ComplexVector w = t.vec;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) w -= q * q.dot(w);
        }
        const double n = w.norm();
        if (n > kSpanDropTolerance) basis.push_back(w / n);
    }
    ComplexMatrix q(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = basis[k];
    return q;
}

// Spectral data of a * I + W restricted to span{v_k}: H = a (I - QQ^+) + Q (a + M) Q^+.
struct StructuredSpectrum {
    ComplexMatrix q;             // N x r
    Eigen::VectorXd span_values;  // r values, ascending, shift included
    ComplexMatrix span_vectors;  // r x r, columns in the Q basis
};

StructuredSpectrum structured_spectrum(double shift, const std::vector<ProjectorTerm>& terms, std::size_t dim) {
    StructuredSpectrum out;
    out.q = span_basis(terms, dim);
    const Eigen::Index r = out.q.cols();
    ComplexMatrix m = ComplexMatrix::Zero(r, r);
    for (const auto& t : terms) {
        const ComplexVector c = out.q.adjoint() * t.vec;
        m += t.weight * (c * c.adjoint());
    }
    if (r == 0) {
        out.span_values.resize(0);
        out.span_vectors.resize(0, 0);
        return out;
    }
    m = (m + m.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    out.span_values = es.eigenvalues().array() + shift;
    out.span_vectors = es.eigenvectors();
    return out;
}

// A unit vector orthogonal to the columns of q (dim - r >= 1 required).
ComplexVector complement_vector(const ComplexMatrix& q, std::size_t dim) {
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < dim; ++j) {
        ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
        e(static_cast<Eigen::Index>(j)) = 1.0;
        for (int pass = 0; pass < 2; ++pass) e -= q * (q.adjoint() * e);
        const double n = e.norm();
        if (n > best_norm) {
            best_norm = n;
            best = e / n;
        }
        if (best_norm > 0.5) break;
    }
    return best;
}

ComplexVector evolve_two_level(const ComplexMatrix& h, const ComplexVector& x, double dt) {
    // H = a I + K with K traceless; exp(-i dt H) = e^{-i dt a} (cos(w dt) I - i sin(w dt)/w K)
    const double a = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double d = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const Complex off = h(0, 1);
    const double w = std::sqrt(d * d + std::norm(off));
    const double c = std::cos(w * dt);
    const double sinc = w > 0.0 ? std::sin(w * dt) / w : dt;
    const Complex i(0.0, 1.0);
    const Complex k0 = d * x(0) + off * x(1);
    const Complex k1 = std::conj(off) * x(0) - d * x(1);
    ComplexVector y(2);
    const Complex phase = std::exp(-i * (a * dt));
    y(0) = phase * (c * x(0) - i * sinc * k0);
    y(1) = phase * (c * x(1) - i * sinc * k1);
    return y;
}

}  // namespace

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DomainError("StateVector: dimension must be >= 1");
    const double n = amplitudes_.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("StateVector: amplitudes must have finite nonzero norm");
    amplitudes_ /= n;
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(ComplexVector(Eigen::Map<const ComplexVector>(amplitudes.begin(),
                                                                 static_cast<Eigen::Index>(amplitudes.size())))) {}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DomainError("StateVector::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::uniform(std::size_t dim) {
    if (dim == 0) throw DomainError("StateVector::uniform: dimension must be >= 1");
    return StateVector(ComplexVector::Constant(static_cast<Eigen::Index>(dim), 1.0));
}

StateVector StateVector::with_phase(double angle) const {
    return StateVector(ComplexVector(amplitudes_ * std::polar(1.0, angle)));
}

// ----------------------------------------------------------- HermitianOperator

HermitianOperator HermitianOperator::dense(ComplexMatrix matrix) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw DomainError("HermitianOperator::dense: matrix must be square and nonempty");
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= kHermitianTolerance * scale)) {
        throw DomainError("HermitianOperator::dense: matrix is not Hermitian (max |A - A^+| = " +
                          std::to_string(asym) + ")");
    }
    HermitianOperator op;
    op.dim_ = static_cast<std::size_t>(matrix.rows());
    op.dense_ = true;
    op.matrix_ = (matrix + matrix.adjoint()) * 0.5;
    return op;
}

HermitianOperator HermitianOperator::identity_plus(std::size_t dim, double shift, std::vector<ProjectorTerm> terms) {
    if (dim == 0) throw DomainError("HermitianOperator: dimension must be >= 1");
    HermitianOperator op;
    op.dim_ = dim;
    op.dense_ = false;
    op.shift_ = shift;
    for (auto& t : terms) {
        require_same_dim(static_cast<std::size_t>(t.vec.size()), dim, "HermitianOperator::identity_plus");
        if (std::abs(t.vec.norm() - 1.0) > kNormTolerance) {
            throw DomainError("HermitianOperator::identity_plus: projector vector is not normalized");
        }
        if (t.weight != 0.0) op.terms_.push_back(std::move(t));
    }
    return op;
}

HermitianOperator HermitianOperator::identity(std::size_t dim, double scale) {
    return identity_plus(dim, scale, {});
}

HermitianOperator HermitianOperator::projector(const StateVector& v, double weight) {
    return identity_plus(v.dim(), 0.0, {ProjectorTerm{weight, v.amplitudes()}});
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                                          static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
    return dense(std::move(m));
}

const ComplexMatrix& HermitianOperator::matrix() const {
    if (!dense_) throw DomainError("HermitianOperator::matrix: operator is in structured form");
    return matrix_;
}

ComplexMatrix HermitianOperator::to_dense() const {
    if (dense_) return matrix_;
    const auto n = static_cast<Eigen::Index>(dim_);
    ComplexMatrix m = ComplexMatrix::Identity(n, n) * shift_;
    for (const auto& t : terms_) m += t.weight * (t.vec * t.vec.adjoint());
    return m;
}

ComplexVector HermitianOperator::apply(const ComplexVector& x) const {
    require_same_dim(static_cast<std::size_t>(x.size()), dim_, "HermitianOperator::apply");
    if (dense_) return matrix_ * x;
    ComplexVector y = shift_ * x;
    for (const auto& t : terms_) y += (t.weight * t.vec.dot(x)) * t.vec;
    return y;
}

std::vector<double> HermitianOperator::eigenvalues() const {
    std::vector<double> out;
    if (dense_) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
        out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        return out;
    }
    const auto spec = structured_spectrum(shift_, terms_, dim_);
    out.assign(spec.span_values.data(), spec.span_values.data() + spec.span_values.size());
    out.insert(out.end(), dim_ - static_cast<std::size_t>(spec.q.cols()), shift_);
    std::sort(out.begin(), out.end());
    return out;
}

double HermitianOperator::spectral_norm() const {
    const auto ev = eigenvalues();
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

ComplexVector HermitianOperator::evolve(const ComplexVector& x, double dt) const {
    require_same_dim(static_cast<std::size_t>(x.size()), dim_, "HermitianOperator::evolve");
    const Complex i(0.0, 1.0);
    if (dense_) {
        if (dim_ == 1) return x * std::exp(-i * (dt * matrix_(0, 0).real()));
        if (dim_ == 2) return evolve_two_level(matrix_, x, dt);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_);
        const ComplexMatrix& u = es.eigenvectors();
        ComplexVector c = u.adjoint() * x;
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-i * (dt * es.eigenvalues()(k)));
        return u * c;
    }
    const Complex bulk = std::exp(-i * (dt * shift_));
    if (terms_.empty()) return bulk * x;
    const auto spec = structured_spectrum(shift_, terms_, dim_);
    const ComplexVector coeff = spec.q.adjoint() * x;
    ComplexVector rotated = spec.span_vectors.adjoint() * coeff;
    for (Eigen::Index k = 0; k < rotated.size(); ++k) rotated(k) *= std::exp(-i * (dt * spec.span_values(k)));
    const ComplexVector span_part = spec.span_vectors * rotated;
    return bulk * (x - spec.q * coeff) + spec.q * span_part;
}

HermitianOperator HermitianOperator::scaled(double factor) const {
    if (dense_) return dense(matrix_ * factor);
    std::vector<ProjectorTerm> terms;
    for (const auto& t : terms_) terms.push_back({t.weight * factor, t.vec});
    return identity_plus(dim_, shift_ * factor, std::move(terms));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    require_same_dim(a.dim_, b.dim_, "HermitianOperator::operator+");
    if (a.dense_ || b.dense_) return HermitianOperator::dense(a.to_dense() + b.to_dense());
    std::vector<ProjectorTerm> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return HermitianOperator::identity_plus(a.dim_, a.shift_ + b.shift_, std::move(terms));
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return a + b.scaled(-1.0);
}

// ------------------------------------------------------ InterpolatedHamiltonian

InterpolatedHamiltonian::InterpolatedHamiltonian(HermitianOperator h0, HermitianOperator h1)
    : h0_(std::move(h0)), h1_(std::move(h1)) {
    require_same_dim(h0_.dim(), h1_.dim(), "InterpolatedHamiltonian");
}

HermitianOperator InterpolatedHamiltonian::driving_term() const { return h1_ - h0_; }

HermitianOperator evaluate_hamiltonian(const InterpolatedHamiltonian& ih, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("evaluate_hamiltonian: lambda must lie in [0, 1], got " + std::to_string(lambda));
    }
    if (lambda == 0.0) return ih.h0();
    if (lambda == 1.0) return ih.h1();
    if (ih.h0().is_dense() || ih.h1().is_dense()) {
        const ComplexMatrix a = ih.h0().to_dense();
        return HermitianOperator::dense(a + lambda * (ih.h1().to_dense() - a));
    }
    return ih.h0().scaled(1.0 - lambda) + ih.h1().scaled(lambda);
}

// ------------------------------------------------------------------ spectra

EigenPair ground_state(const HermitianOperator& h) {
    const std::size_t n = h.dim();
    double e0 = 0.0;
    double e1 = std::numeric_limits<double>::infinity();
    double norm = 0.0;
    ComplexVector vec;

    if (h.is_dense()) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
        if (es.info() != Eigen::Success) throw NumericalInconsistency("ground_state: eigensolver did not converge");
        const auto& ev = es.eigenvalues();
        e0 = ev(0);
        if (n > 1) e1 = ev(1);
        norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
        vec = es.eigenvectors().col(0);
    } else {
        const auto spec = structured_spectrum(h.shift(), h.terms(), n);
        const std::size_t r = static_cast<std::size_t>(spec.q.cols());
        const std::size_t complement = n - r;
        // candidates: (energy, span index or -1 for the complement)
        std::vector<std::pair<double, int>> levels;
        for (std::size_t k = 0; k < r; ++k) levels.emplace_back(spec.span_values(static_cast<Eigen::Index>(k)), static_cast<int>(k));
        for (std::size_t k = 0; k < std::min<std::size_t>(complement, 2); ++k) levels.emplace_back(h.shift(), -1);
        std::stable_sort(levels.begin(), levels.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        e0 = levels[0].first;
        if (levels.size() > 1) e1 = levels[1].first;
        norm = std::abs(h.shift());
        for (Eigen::Index k = 0; k < spec.span_values.size(); ++k) norm = std::max(norm, std::abs(spec.span_values(k)));
        if (levels[0].second >= 0) {
            vec = spec.q * spec.span_vectors.col(levels[0].second);
        } else if (complement == 1) {
            vec = complement_vector(spec.q, n);
        } else {
            // the complement level has multiplicity >= 2; the gap test below fires
            vec = complement_vector(spec.q, n);
            e1 = e0;
        }
    }

    const double gap = e1 - e0;
    if (n > 1 && gap < kDegeneracyRelativeThreshold * std::max(1.0, norm)) {
        throw DegenerateGroundState("ground_state: gap " + std::to_string(gap) +
                                    " is below the degeneracy threshold");
    }
    return EigenPair{e0, StateVector(fix_phase(std::move(vec))), gap};
}

double expectation(const HermitianOperator& h, const StateVector& psi) {
    require_same_dim(h.dim(), psi.dim(), "expectation");
    const Complex value = psi.amplitudes().dot(h.apply(psi.amplitudes()));
    if (std::abs(value.imag()) > kImaginaryResidueTolerance * std::max(1.0, std::abs(value.real()))) {
        throw NumericalInconsistency("expectation: imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

double variance(const HermitianOperator& h, const StateVector& psi) {
    require_same_dim(h.dim(), psi.dim(), "variance");
    const ComplexVector hpsi = h.apply(psi.amplitudes());
    const double mean = expectation(h, psi);
    const double raw = hpsi.squaredNorm() - mean * mean;
    if (raw < -kNegativeVarianceTolerance) {
        throw NumericalInconsistency("variance: negative value " + std::to_string(raw));
    }
    // the centered form has no cancellation and is nonnegative by construction
    return (hpsi - mean * psi.amplitudes()).squaredNorm();
}

double overlap_sq(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim(), b.dim(), "overlap_sq");
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

}  // namespace adiabound
