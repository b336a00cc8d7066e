#pragma once

// Units, constants and dense Hermitian operator primitives.
//
// Everything is in atomic units (hbar = e = m_e = 1). Temperatures enter
// only through kelvin_to_hartree().

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

namespace polariton {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

namespace constants {
/// Boltzmann constant in Hartree per Kelvin (CODATA 2018).
inline constexpr double kBoltzmann = 3.166811563e-6;
/// Hartree energy in eV (CODATA 2018).
inline constexpr double kHartreeEv = 27.211386245988;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSpectralTol = 1e-9;
}  // namespace constants

/// Raised for physically or structurally invalid input.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails (non-convergence, non-finite data).
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

double kelvin_to_hartree(double kelvin);
double hartree_to_kelvin(double hartree);
double mev_to_hartree(double mev);

/// Tag for how a Quantity should be interpreted. Only used at the edges
/// (config parsing, reports); internals pass plain doubles in a.u.
enum class Unit { energy, length, dipole, field, temperature_k, dimensionless };

struct Quantity {
    double value = 0.0;
    Unit unit = Unit::dimensionless;
};

/// A dense complex matrix verified to be Hermitian on construction.
class HermitianOperator {
   public:
    HermitianOperator() = default;
    explicit HermitianOperator(ComplexMatrix entries, double tol = constants::kHermitianTol);
    explicit HermitianOperator(const RealMatrix& entries, double tol = constants::kHermitianTol);

    static HermitianOperator identity(Eigen::Index dim);
    static HermitianOperator zero(Eigen::Index dim);

    Eigen::Index dim() const { return entries_.rows(); }
    const ComplexMatrix& matrix() const { return entries_; }

    /// True when every imaginary part is exactly zero.
    bool is_real() const;
    double max_abs() const;

    HermitianOperator operator+(const HermitianOperator& o) const;
    HermitianOperator operator-(const HermitianOperator& o) const;
    HermitianOperator operator*(double s) const;
    /// Symmetrized square A*A (Hermitian for Hermitian A).
    HermitianOperator squared() const;

   private:
    struct Unchecked {};
    HermitianOperator(ComplexMatrix entries, Unchecked) : entries_(std::move(entries)) {}

    ComplexMatrix entries_;
};

/// Ascending eigenvalues and orthonormal eigenvectors (columns).
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    Eigen::Index size() const { return eigenvalues.size(); }
};

SpectralDecomposition eigh(const HermitianOperator& h);

/// Kronecker product a (x) b, row index = i_a * dim(b) + i_b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// sum_n w_n <psi_n|O|psi_n> over the columns of `states`.
double expectation(std::span<const double> weights, const ComplexMatrix& states,
                   const HermitianOperator& op);

/// sum_n w_n |psi_n><psi_n|.
ComplexMatrix density_from_states(std::span<const double> weights, const ComplexMatrix& states);

}  // namespace polariton
