#include "polariton/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace polariton {

GaussHermiteRule gauss_hermite_nodes(int s) {
    if (s < 1 || s > kMaxQuadratureOrder) {
        throw InvalidInput("Gauss-Hermite order must lie in [1, 64]");
    }
    // Golub-Welsch for starting values, then Newton on the orthonormal
    // Hermite recurrence for full relative accuracy in the weights.
    RealVector diag = RealVector::Zero(s);
    RealVector sub(std::max(s - 1, 0));
    for (int k = 1; k < s; ++k) sub[k - 1] = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<RealMatrix> jacobi;
    jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    GaussHermiteRule rule;
    rule.nodes.resize(static_cast<std::size_t>(s));
    rule.weights.resize(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        double x = jacobi.eigenvalues()[i];
        double deriv = 0.0;
        for (int iter = 0; iter < 50; ++iter) {
            double p_prev = 0.0;
            double p = pi_quarter;
            for (int j = 1; j <= s; ++j) {
                const double p_next = x * std::sqrt(2.0 / j) * p - std::sqrt((j - 1.0) / j) * p_prev;
                p_prev = p;
                p = p_next;
            }
            deriv = std::sqrt(2.0 * s) * p_prev;
            const double step = p / deriv;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        // Weight from the converged root.
        double p_prev = 0.0;
        double p = pi_quarter;
        for (int j = 1; j <= s; ++j) {
            const double p_next = x * std::sqrt(2.0 / j) * p - std::sqrt((j - 1.0) / j) * p_prev;
            p_prev = p;
            p = p_next;
        }
        deriv = std::sqrt(2.0 * s) * p_prev;
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / (deriv * deriv);
    }

    // Enforce exact mirror symmetry about the origin.
    for (int i = 0; i < s / 2; ++i) {
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(s - 1 - i);
        const double x = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
        const double w = 0.5 * (rule.weights[hi] + rule.weights[lo]);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = rule.weights[hi] = w;
    }
    if (s % 2 == 1) rule.nodes[static_cast<std::size_t>(s / 2)] = 0.0;
    return rule;
}

ComplexMatrix EnsembleNode::states() const {
    return conjugate ? ComplexMatrix(block->spectrum.eigenvectors.conjugate())
                     : block->spectrum.eigenvectors;
}

double EnsembleNode::total_weight() const {
    double t = 0.0;
    for (double w : state_weights) t += w;
    return t;
}

double ThermalEnsemble::total_weight() const {
    double t = 0.0;
    for (const auto& node : nodes) t += node.total_weight();
    return t;
}

namespace {

ThermalEnsemble ground_state_ensemble(const MatterModel& model, const CavityMode& mode,
                                      const EnsembleOptions& options) {
    ThermalEnsemble ens;
    ens.temperature_k = 0.0;
    ens.beta = std::numeric_limits<double>::infinity();
    ens.order = 1;
    ens.mode = mode;

    auto block = std::make_shared<const CoupledBlock>(assemble_block(model, mode, 0.0, options.assembly));
    ens.layout = block->layout;
    const RealVector& e = block->spectrum.eigenvalues;
    const double tol = 1e-10 * std::max(block->hamiltonian.max_abs(), std::numeric_limits<double>::min());

    EnsembleNode node;
    node.k_z = 0.0;
    node.quadrature_weight = 1.0;
    node.block = block;
    node.state_weights.assign(static_cast<std::size_t>(e.size()), 0.0);
    Eigen::Index degeneracy = 0;
    while (degeneracy < e.size() && e[degeneracy] - e[0] <= tol) ++degeneracy;
    for (Eigen::Index n = 0; n < degeneracy; ++n) {
        node.state_weights[static_cast<std::size_t>(n)] = 1.0 / static_cast<double>(degeneracy);
    }
    ens.energy_shift = e[0];
    ens.z_min = static_cast<double>(degeneracy);
    ens.nodes.push_back(std::move(node));
    return ens;
}

}  // namespace

ThermalEnsemble build_ensemble(const MatterModel& model, const CavityMode& mode, double temperature_k,
                               int order, const EnsembleOptions& options) {
    model.validate();
    mode.validate();
    if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k)) {
        throw InvalidInput("ensemble temperature must be finite and non-negative");
    }
    if (temperature_k == 0.0) return ground_state_ensemble(model, mode, options);

    const GaussHermiteRule rule = gauss_hermite_nodes(order);
    const double beta = 1.0 / kelvin_to_hartree(temperature_k);
    const double mass = model.total_mass;
    const double scale = std::sqrt(2.0 * mass / beta);

    // Folding relies on H(-k) = conj H(k), which holds when the dipole is real.
    const bool fold = options.evaluation == NodeEvaluation::folded && model.dipole.is_real();

    ThermalEnsemble ens;
    ens.temperature_k = temperature_k;
    ens.beta = beta;
    ens.order = order;
    ens.mode = mode;
    ens.layout = {model.dim(), mode.n_fock};

    const auto s = rule.nodes.size();
    std::vector<std::shared_ptr<const CoupledBlock>> blocks(s);
    for (std::size_t i = 0; i < s; ++i) {
        const double x = rule.nodes[i];
        if (fold && x < 0.0) continue;  // filled from the mirror partner below
        blocks[i] = std::make_shared<const CoupledBlock>(
            assemble_block(model, mode, scale * x, options.assembly));
    }

    std::vector<RealVector> reduced(s);
    double shift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s; ++i) {
        EnsembleNode node;
        node.k_z = scale * rule.nodes[i];
        node.quadrature_weight = rule.weights[i];
        if (blocks[i]) {
            node.block = blocks[i];
        } else {
            node.block = blocks[s - 1 - i];
            node.conjugate = true;
        }
        reduced[i] = node.block->spectrum.eigenvalues.array() - node.k_z * node.k_z / (2.0 * mass);
        shift = std::min(shift, reduced[i].minCoeff());
        ens.nodes.push_back(std::move(node));
    }

    double z = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        auto& node = ens.nodes[i];
        node.state_weights.resize(static_cast<std::size_t>(reduced[i].size()));
        for (Eigen::Index n = 0; n < reduced[i].size(); ++n) {
            const double w = node.quadrature_weight * std::exp(-beta * (reduced[i][n] - shift));
            node.state_weights[static_cast<std::size_t>(n)] = w;
            z += w;
        }
    }
    if (!(z > 0.0) || !std::isfinite(z)) throw NumericalError("partition function is not finite");
    for (auto& node : ens.nodes) {
        for (double& w : node.state_weights) w /= z;
    }
    ens.z_min = scale * z;
    ens.energy_shift = shift;
    return ens;
}

double ensemble_average(const ThermalEnsemble& ens, const HermitianOperator& op) {
    if (op.dim() != ens.layout.dim()) throw InvalidInput("operator does not act on the block space");
    Complex acc{0.0, 0.0};
    for (const auto& node : ens.nodes) {
        const ComplexMatrix& v = node.block->spectrum.eigenvectors;
        for (Eigen::Index n = 0; n < v.cols(); ++n) {
            const double w = node.state_weights[static_cast<std::size_t>(n)];
            if (w == 0.0) continue;
            if (node.conjugate) {
                const ComplexVector psi = v.col(n).conjugate();
                acc += w * psi.dot(op.matrix() * psi);
            } else {
                acc += w * v.col(n).dot(op.matrix() * v.col(n));
            }
        }
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(op.max_abs(), std::abs(acc.real()))) {
        throw NumericalError("ensemble average has a non-negligible imaginary part");
    }
    return acc.real();
}

double bose_occupation(double omega, double temperature_k) {
    if (!(omega > 0.0)) throw InvalidInput("mode frequency must be positive");
    const double kt = kelvin_to_hartree(temperature_k);
    if (kt == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / kt);
}

double bare_D_fluct(const CavityMode& mode, double temperature_k) {
    return mode.lambda * mode.lambda * mode.omega * (0.5 + bose_occupation(mode.omega, temperature_k));
}

double bare_A_fluct(const CavityMode& mode, double temperature_k) {
    return mode.lambda * mode.lambda / mode.omega * (0.5 + bose_occupation(mode.omega, temperature_k));
}

double classical_D_fluct(const CavityMode& mode, double temperature_k) {
    return mode.lambda * mode.lambda * kelvin_to_hartree(temperature_k);
}

double classical_A_fluct(const CavityMode& mode, double temperature_k) {
    return mode.lambda * mode.lambda / (mode.omega * mode.omega) * kelvin_to_hartree(temperature_k);
}

}  // namespace polariton
