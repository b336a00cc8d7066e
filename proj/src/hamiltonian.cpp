#include "polariton/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace polariton {

void CavityMode::validate() const {
    if (!(omega > 0.0)) throw InvalidInput("cavity frequency must be positive");
    if (!(lambda >= 0.0)) throw InvalidInput("cavity coupling must be non-negative");
    if (n_fock < 2) throw InvalidInput("Fock truncation must be at least 2");
}

namespace {

// Matrix of the annihilation operator a on {|0>, ..., |n-1>}.
RealMatrix annihilation(int n) {
    RealMatrix a = RealMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

}  // namespace

HermitianOperator photon_q(const CavityMode& mode) {
    mode.validate();
    const RealMatrix a = annihilation(mode.n_fock);
    return HermitianOperator(RealMatrix((a + a.transpose()) / std::sqrt(2.0 * mode.omega)));
}

HermitianOperator photon_p(const CavityMode& mode) {
    mode.validate();
    const RealMatrix a = annihilation(mode.n_fock);
    const RealMatrix diff = a.transpose() - a;
    return HermitianOperator(ComplexMatrix(Complex(0.0, std::sqrt(mode.omega / 2.0)) * diff.cast<Complex>()));
}

PhotonOperators photon_operators(const CavityMode& mode) {
    mode.validate();
    const int n = mode.n_fock;
    const double w = mode.omega;
    RealMatrix a2 = RealMatrix::Zero(n, n);  // a^2 + a^dagger^2
    RealMatrix num = RealMatrix::Zero(n, n);  // 2 n + 1
    for (int k = 0; k < n; ++k) {
        num(k, k) = 2.0 * k + 1.0;
        if (k + 2 < n) a2(k, k + 2) = a2(k + 2, k) = std::sqrt((k + 1.0) * (k + 2.0));
    }
    return PhotonOperators{
        photon_q(mode),
        photon_p(mode),
        HermitianOperator(RealMatrix((num + a2) / (2.0 * w))),
        HermitianOperator(RealMatrix(0.5 * w * (num - a2))),
    };
}

HermitianOperator substitute_photon_phase(const HermitianOperator& fock_op) {
    const Eigen::Index n = fock_op.dim();
    ComplexVector phase(n);
    const Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (Eigen::Index k = 0; k < n; ++k) phase[k] = quarter[k % 4];
    ComplexMatrix out = phase.asDiagonal() * fock_op.matrix() * phase.conjugate().asDiagonal();
    return HermitianOperator(out);
}

HermitianOperator lift_matter(const HermitianOperator& matter_op, Eigen::Index fock_dim) {
    return HermitianOperator(kron(matter_op.matrix(), ComplexMatrix::Identity(fock_dim, fock_dim)));
}

HermitianOperator lift_photon(const HermitianOperator& photon_op, Eigen::Index matter_dim) {
    return HermitianOperator(kron(ComplexMatrix::Identity(matter_dim, matter_dim), photon_op.matrix()));
}

HermitianOperator assemble_hamiltonian(const MatterModel& model, const CavityMode& mode, double k_z,
                                       const PhotonOperators& photon, Eigen::Index max_dim) {
    mode.validate();
    const Eigen::Index nm = model.dim();
    const Eigen::Index nf = mode.n_fock;
    if (nm * nf > max_dim) {
        std::ostringstream msg;
        msg << "coupled block dimension " << nm * nf << " exceeds configured maximum " << max_dim;
        throw InvalidInput(msg.str());
    }
    if (photon.q.dim() != nf) throw InvalidInput("photon operators do not match the Fock truncation");

    const double w = mode.omega;
    const double lam = mode.lambda;
    const double mass = model.total_mass;
    const double charge = model.total_charge;

    const ComplexMatrix id_m = ComplexMatrix::Identity(nm, nm);
    const ComplexMatrix id_f = ComplexMatrix::Identity(nf, nf);
    const ComplexMatrix& d = model.dipole.matrix();
    const ComplexMatrix h_matter = model.energies.cast<Complex>().asDiagonal();

    // Centre-of-mass kinetic term (P_c - lambda Q p / omega)^2 / 2M at P_c = k_z.
    const double com_linear = k_z * lam * charge / (mass * w);
    const double com_quadratic = lam * lam * charge * charge / (2.0 * mass * w * w);
    ComplexMatrix photon_part = (0.5 + com_quadratic) * photon.p2.matrix() +
                                0.5 * w * w * photon.q2.matrix() - com_linear * photon.p.matrix();
    photon_part.diagonal().array() += k_z * k_z / (2.0 * mass);

    ComplexMatrix h = kron(id_m, photon_part);
    h += kron(h_matter + 0.5 * lam * lam * (d * d), id_f);
    h -= w * lam * kron(d, photon.q.matrix());
    return HermitianOperator(ComplexMatrix(0.5 * (h + h.adjoint())));
}

CoupledBlock assemble_block(const MatterModel& model, const CavityMode& mode, double k_z,
                            const AssemblyOptions& options) {
    CoupledBlock block;
    block.k_z = k_z;
    block.layout = {model.dim(), mode.n_fock};
    block.hamiltonian = assemble_hamiltonian(model, mode, k_z, photon_operators(mode), options.max_dim);
    if (options.diagonalize) block.spectrum = eigh(block.hamiltonian);
    return block;
}

double commutator_residual(const HermitianOperator& h, const ComplexMatrix& rho) {
    if (rho.rows() != h.dim() || rho.cols() != h.dim()) {
        throw InvalidInput("density/Hamiltonian dimension mismatch");
    }
    const ComplexMatrix c = h.matrix() * rho - rho * h.matrix();
    return c.size() == 0 ? 0.0 : c.cwiseAbs().maxCoeff();
}

double commutes_with_density(const CoupledBlock& block, std::span<const double> weights) {
    return commutator_residual(block.hamiltonian,
                               density_from_states(weights, block.spectrum.eigenvectors));
}

}  // namespace polariton
