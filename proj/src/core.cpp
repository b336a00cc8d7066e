#include "polariton/core.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <sstream>

namespace polariton {

double kelvin_to_hartree(double kelvin) {
    if (!(kelvin >= 0.0) || !std::isfinite(kelvin)) {
        throw InvalidInput("temperature must be a finite non-negative value in K");
    }
    return kelvin * constants::kBoltzmann;
}

double hartree_to_kelvin(double hartree) {
    if (!(hartree >= 0.0) || !std::isfinite(hartree)) {
        throw InvalidInput("thermal energy must be finite and non-negative");
    }
    return hartree / constants::kBoltzmann;
}

double mev_to_hartree(double mev) { return mev * 1e-3 / constants::kHartreeEv; }

namespace {

void check_finite(const ComplexMatrix& m) {
    if (!m.allFinite()) {
        throw InvalidInput("operator contains non-finite entries");
    }
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix entries, double tol) {
    if (entries.rows() != entries.cols()) {
        throw InvalidInput("Hermitian operator must be square");
    }
    check_finite(entries);
    const double defect = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (entries.size() > 0 && defect > tol) {
        std::ostringstream msg;
        msg << "operator is not Hermitian (max |A - A^dagger| = " << defect << ")";
        throw InvalidInput(msg.str());
    }
    entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator::HermitianOperator(const RealMatrix& entries, double tol)
    : HermitianOperator(ComplexMatrix(entries.cast<Complex>()), tol) {}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

bool HermitianOperator::is_real() const {
    return entries_.size() == 0 || entries_.imag().cwiseAbs().maxCoeff() == 0.0;
}

double HermitianOperator::max_abs() const {
    return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
    if (o.dim() != dim()) throw InvalidInput("operator dimension mismatch");
    return HermitianOperator(ComplexMatrix(entries_ + o.entries_), Unchecked{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
    if (o.dim() != dim()) throw InvalidInput("operator dimension mismatch");
    return HermitianOperator(ComplexMatrix(entries_ - o.entries_), Unchecked{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
    return HermitianOperator(ComplexMatrix(entries_ * s), Unchecked{});
}

HermitianOperator HermitianOperator::squared() const {
    ComplexMatrix sq = entries_ * entries_;
    return HermitianOperator(ComplexMatrix(0.5 * (sq + sq.adjoint())), Unchecked{});
}

SpectralDecomposition eigh(const HermitianOperator& h) {
    SpectralDecomposition out;
    const auto& m = h.matrix();
    if (m.size() == 0) return out;

    // Real symmetric fast path; identical semantics, half the work.
    if (h.is_real()) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m.real());
        if (solver.info() != Eigen::Success) {
            throw NumericalError("real symmetric eigensolver did not converge");
        }
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("Hermitian eigensolver did not converge");
        }
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors();
    }
    if (!out.eigenvalues.allFinite()) {
        throw NumericalError("eigensolver produced non-finite eigenvalues");
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

namespace {

void check_weights(std::span<const double> weights, Eigen::Index n_states) {
    if (static_cast<Eigen::Index>(weights.size()) != n_states) {
        throw InvalidInput("weight count does not match number of states");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidInput("weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "weights must sum to 1 (got " << total << ")";
        throw InvalidInput(msg.str());
    }
}

}  // namespace

double expectation(std::span<const double> weights, const ComplexMatrix& states,
                   const HermitianOperator& op) {
    check_weights(weights, states.cols());
    if (states.rows() != op.dim()) throw InvalidInput("state/operator dimension mismatch");

    Complex acc{0.0, 0.0};
    for (Eigen::Index n = 0; n < states.cols(); ++n) {
        if (weights[n] == 0.0) continue;
        acc += weights[n] * states.col(n).dot(op.matrix() * states.col(n));
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real()))) {
        throw NumericalError("expectation value has a non-negligible imaginary part");
    }
    return acc.real();
}

ComplexMatrix density_from_states(std::span<const double> weights, const ComplexMatrix& states) {
    if (static_cast<Eigen::Index>(weights.size()) != states.cols()) {
        throw InvalidInput("weight count does not match number of states");
    }
    ComplexMatrix rho = ComplexMatrix::Zero(states.rows(), states.rows());
    for (Eigen::Index n = 0; n < states.cols(); ++n) {
        if (weights[n] == 0.0) continue;
        rho.noalias() += weights[n] * states.col(n) * states.col(n).adjoint();
    }
    return rho;
}

}  // namespace polariton
