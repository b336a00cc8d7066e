#pragma once

// Length-gauge Pauli-Fierz Hamiltonian for one molecule and one cavity mode,
// blocked by the centre-of-mass wave number k_z along the polarization axis.
//
// Product basis: index = matter_state * n_fock + photon_number.

#include "polariton/core.hpp"
#include "polariton/matter.hpp"

#include <span>

namespace polariton {

/// Single cavity mode polarized along z.
struct CavityMode {
    double omega = 1.0;
    double lambda = 0.0;
    int n_fock = 4;

    void validate() const;
};

/// Photon operators on the truncated Fock space. q2 and p2 hold the exact
/// matrix elements of q^2 and p^2 (not products of truncated q and p), so
/// (p2 + omega^2 q2)/2 is exactly diag(omega (n + 1/2)).
struct PhotonOperators {
    HermitianOperator q;
    HermitianOperator p;
    HermitianOperator q2;
    HermitianOperator p2;
};

/// q = (a + a^dagger)/sqrt(2 omega).
HermitianOperator photon_q(const CavityMode& mode);
/// p = i sqrt(omega/2) (a^dagger - a).
HermitianOperator photon_p(const CavityMode& mode);
PhotonOperators photon_operators(const CavityMode& mode);

/// Applies the commutator-preserving substitution a -> -i a, a^dagger -> i a^dagger
/// to a Fock-space operator (a diagonal phase similarity transform).
HermitianOperator substitute_photon_phase(const HermitianOperator& fock_op);

struct BlockLayout {
    Eigen::Index matter_dim = 0;
    Eigen::Index fock_dim = 0;
    Eigen::Index dim() const { return matter_dim * fock_dim; }
};

struct CoupledBlock {
    double k_z = 0.0;
    HermitianOperator hamiltonian;
    SpectralDecomposition spectrum;
    BlockLayout layout;
};

struct AssemblyOptions {
    Eigen::Index max_dim = 4096;
    bool diagonalize = true;
};

HermitianOperator assemble_hamiltonian(const MatterModel& model, const CavityMode& mode, double k_z,
                                       const PhotonOperators& photon, Eigen::Index max_dim = 4096);

/// Builds H'(k_z) and attaches its eigendecomposition.
CoupledBlock assemble_block(const MatterModel& model, const CavityMode& mode, double k_z,
                            const AssemblyOptions& options = {});

/// ||H rho - rho H||_max for rho = sum_n w_n |psi_n><psi_n| over the block's eigenvectors.
double commutes_with_density(const CoupledBlock& block, std::span<const double> weights);
double commutator_residual(const HermitianOperator& h, const ComplexMatrix& rho);

/// Lifts operators into the matter (x) photon product space.
HermitianOperator lift_matter(const HermitianOperator& matter_op, Eigen::Index fock_dim);
HermitianOperator lift_photon(const HermitianOperator& photon_op, Eigen::Index matter_dim);

}  // namespace polariton
