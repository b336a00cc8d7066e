#pragma once

// Transformed field operators along the cavity polarization and their
// thermal fluctuations.

#include "polariton/ensemble.hpp"

#include <optional>

namespace polariton {

struct FieldOperators {
    HermitianOperator vector_potential;  // A' = (lambda/omega) p
    HermitianOperator displacement;      // D' = lambda omega q
    HermitianOperator electric;          // E' = D' - lambda^2 d
    HermitianOperator dipole;            // d (x) 1
};

/// Field operators on matter (x) photon using the mode's own coupling.
FieldOperators field_operators(const MatterModel& model, const CavityMode& mode);
/// Same, with the field prefactors evaluated at `observable_lambda` instead of
/// mode.lambda (used to probe bare-mode fluctuations of a decoupled ensemble).
FieldOperators field_operators(const MatterModel& model, const CavityMode& mode, double observable_lambda);

struct FluctuationReport {
    double temperature_k = 0.0;
    double lambda = 0.0;

    double dE2 = 0.0;  // <E'^2> - <E'>^2
    double dD2 = 0.0;
    double dd2 = 0.0;
    double dA2 = 0.0;
    double cross = 0.0;  // lambda^2 <D' d + d D'>

    double mean_E = 0.0;
    double mean_D = 0.0;
    double mean_A = 0.0;
    double mean_d = 0.0;

    double bare_D = 0.0;
    double bare_A = 0.0;
    double classical_D = 0.0;
    double classical_A = 0.0;

    /// |dE2 - (dD2 - cross + lambda^4 dd2)| relative to dE2.
    double decomposition_defect() const;
};

FluctuationReport fluctuations(const ThermalEnsemble& ens, const MatterModel& model);
FluctuationReport fluctuations(const ThermalEnsemble& ens, const MatterModel& model, double observable_lambda);

/// Largest |<O>| over {E', A', D', d}. nullopt when the model carries no
/// parity labels, so the zero-mean condition does not apply.
std::optional<double> parity_check(const ThermalEnsemble& ens, const MatterModel& model);

}  // namespace polariton
