#pragma once

// Light-matter logarithmic negativity over k_z blocks and the thermal
// Jaynes-Cummings reference model.

#include "polariton/ensemble.hpp"
#include "polariton/subsystem.hpp"

namespace polariton {

/// Partial-transpose eigenvalues above -kNegativeThreshold count as non-negative.
inline constexpr double kNegativeThreshold = 1e-12;

/// Swaps the row/column indices of one tensor factor of rho on matter (x) photon.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem over);

/// sum over eigenvalues nu < -1e-12 of 2|nu|.
double negativity_sum(const ComplexMatrix& rho_gamma);

/// log2(2 sum_{nu<0} |nu| + 1) for a single density matrix.
double log_negativity(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem over);

struct NegativityReport {
    double temperature_k = 0.0;
    double eta = 0.0;
    std::vector<double> node_negative_sums;  // per quadrature node, ascending k_z
    std::size_t block_count = 0;             // distinct diagonalized blocks
    /// PPT-based: bound entanglement is invisible to this measure.
    static constexpr const char* kLimitation = "PPT-based measure; bound entanglement is not detected";
};

NegativityReport log_negativity(const ThermalEnsemble& ens, Subsystem over);

/// Returns eta_COM, which is 0 because every ensemble datum is block-diagonal in
/// k_z (no cross-k_z elements are representable). Throws NumericalError when
/// the block layout invariant is broken.
double com_negativity_check(const ThermalEnsemble& ens);

struct JCSpectrum {
    double e_g = 0.0;
    double e_l = 0.0;
    double e_u = 0.0;

    void validate() const;
};

/// Resonant JC polaritons for a cavity tuned to the first matter excitation:
/// E_g = 0, E_l/u = omega -/+ g with g = lambda |d_01| sqrt(omega/2).
JCSpectrum jc_spectrum(const MatterModel& model, const CavityMode& mode);

/// Normalized JC canonical density on {|g0>, |g1>, |e0>, |e1>}; T = 0 gives |g0><g0|.
ComplexMatrix jc_density(const JCSpectrum& spectrum, double temperature_k);

double jc_negativity_analytic(const JCSpectrum& spectrum, double temperature_k);

/// Same quantity via numeric partial transpose of jc_density().
double jc_negativity_numeric(const JCSpectrum& spectrum, double temperature_k);

}  // namespace polariton
