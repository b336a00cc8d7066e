#pragma once

// Canonical ensemble over k_z blocks with Gauss-Hermite quadrature in k_z,
// plus closed-form bare-mode and classical reference fluctuations.

#include "polariton/hamiltonian.hpp"

#include <memory>
#include <vector>

namespace polariton {

struct GaussHermiteRule {
    std::vector<double> nodes;    // roots of H_s, ascending
    std::vector<double> weights;  // sum = sqrt(pi)
};

inline constexpr int kMaxQuadratureOrder = 64;

/// Physicists' Gauss-Hermite rule for weight exp(-x^2), 1 <= s <= 64.
GaussHermiteRule gauss_hermite_nodes(int s);

enum class NodeEvaluation {
    folded,  // +k and -k share one diagonalization (H(-k) = conj H(k))
    full,    // every signed node diagonalized independently
};

struct EnsembleOptions {
    NodeEvaluation evaluation = NodeEvaluation::folded;
    AssemblyOptions assembly{};
};

/// One quadrature node. `conjugate` marks a mirrored node whose states are the
/// complex conjugates of the shared block's eigenvectors.
struct EnsembleNode {
    double k_z = 0.0;
    double quadrature_weight = 0.0;
    std::shared_ptr<const CoupledBlock> block;
    bool conjugate = false;
    /// Globally normalized state weights; the sum over all nodes is 1.
    std::vector<double> state_weights;

    ComplexMatrix states() const;
    double total_weight() const;
};

struct ThermalEnsemble {
    double temperature_k = 0.0;
    double beta = 0.0;  // 1/Ha; +inf for the T = 0 path
    int order = 0;
    std::vector<EnsembleNode> nodes;  // ascending k_z
    /// Partition value relative to exp(-beta * energy_shift); the absolute
    /// value is z_min * exp(-beta * energy_shift).
    double z_min = 0.0;
    double energy_shift = 0.0;
    BlockLayout layout;
    CavityMode mode;

    bool zero_temperature() const { return temperature_k == 0.0; }
    double total_weight() const;
};

/// T > 0: nodes at sqrt(2M/beta) x_i with weights exp(-beta E_red), E_red = E - k_z^2/2M.
/// T = 0: uniform mixture over the ground manifold of the k_z = 0 block.
ThermalEnsemble build_ensemble(const MatterModel& model, const CavityMode& mode, double temperature_k,
                               int order, const EnsembleOptions& options = {});

double ensemble_average(const ThermalEnsemble& ens, const HermitianOperator& op);

/// Bose-Einstein occupation 1/(exp(omega/k_B T) - 1); 0 at T = 0.
double bose_occupation(double omega, double temperature_k);

/// lambda^2 omega (1/2 + n_BE).
double bare_D_fluct(const CavityMode& mode, double temperature_k);
/// (lambda^2/omega) (1/2 + n_BE), the thermal variance of A' = lambda p/omega.
double bare_A_fluct(const CavityMode& mode, double temperature_k);
/// lambda^2 k_B T.
double classical_D_fluct(const CavityMode& mode, double temperature_k);
/// (lambda^2/omega^2) k_B T.
double classical_A_fluct(const CavityMode& mode, double temperature_k);

}  // namespace polariton
