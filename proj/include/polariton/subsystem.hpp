#pragma once

// Reduced density matrices and Boltzmann-fitted subsystem temperatures.

#include "polariton/ensemble.hpp"

#include <optional>

namespace polariton {

enum class Subsystem { photon, matter, com };

const char* to_string(Subsystem w);

struct ReducedDensity {
    Subsystem subsystem = Subsystem::matter;
    HermitianOperator matrix;
    RealVector weights;    // eigenvalues w_l, descending
    ComplexMatrix states;  // eigenvectors |l>, matching order
};

/// Diagonalizes an RDM matrix and checks trace and positivity.
ReducedDensity make_reduced_density(Subsystem w, const ComplexMatrix& rho);

/// Partial trace of a density matrix on matter (x) photon, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem keep);

/// RDM of the full ensemble. The COM trace is the sum over k_z nodes.
ReducedDensity partial_trace(const ThermalEnsemble& ens, Subsystem keep);

/// Decoupled (lambda = 0) subsystem Hamiltonian; COM is rejected.
HermitianOperator subsystem_hamiltonian(const MatterModel& model, const CavityMode& mode, Subsystem w);

struct TemperatureFit {
    double tau_k = 0.0;
    double residual = 0.0;  // L1 distance at the optimum
};

/// Thrown when the fitted subsystem has no energy spread to define a temperature.
class UndefinedTemperature : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

struct FitOptions {
    /// Reference temperature setting the search bracket [T/100, 100 T]. When 0,
    /// the bracket is centred on the subsystem's first excitation energy.
    double reference_k = 0.0;
    double relative_width = 1e-10;
    double min_weight = 1e-14;
};

/// Minimizes sum_l |w_l - exp(-E_l/k tau)/Z(tau)| over tau with E_l = <l|H_W|l>.
TemperatureFit fit_temperature(const ReducedDensity& rdm, const HermitianOperator& h_sub,
                               const FitOptions& options = {});

/// The COM subsystem is exactly canonical: tau_COM = T.
double com_temperature(double temperature_k);

struct SubsystemTempReport {
    double temperature_k = 0.0;
    TemperatureFit matter;
    TemperatureFit photon;
    double tau_com_k = 0.0;
};

SubsystemTempReport subsystem_temperatures(const ThermalEnsemble& ens, const MatterModel& model);

}  // namespace polariton
