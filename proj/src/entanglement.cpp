#include "polariton/entanglement.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace polariton {

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem over) {
    const Eigen::Index nm = layout.matter_dim;
    const Eigen::Index nf = layout.fock_dim;
    if (rho.rows() != nm * nf || rho.cols() != nm * nf) {
        throw InvalidInput("density matrix does not match the declared factor dimensions");
    }
    if (over != Subsystem::matter && over != Subsystem::photon) {
        throw InvalidInput("partial transpose acts on the matter or photon factor only");
    }
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < nm; ++i)
        for (Eigen::Index s = 0; s < nf; ++s)
            for (Eigen::Index j = 0; j < nm; ++j)
                for (Eigen::Index t = 0; t < nf; ++t) {
                    out(i * nf + s, j * nf + t) = over == Subsystem::matter ? rho(j * nf + s, i * nf + t)
                                                                            : rho(i * nf + t, j * nf + s);
                }
    return out;
}

double negativity_sum(const ComplexMatrix& rho_gamma) {
    const ComplexMatrix sym = 0.5 * (rho_gamma + rho_gamma.adjoint());
    const RealVector nu = eigh(HermitianOperator(sym)).eigenvalues;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nu.size(); ++i) {
        if (nu[i] < -kNegativeThreshold) acc += 2.0 * std::abs(nu[i]);
    }
    return acc;
}

double log_negativity(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem over) {
    return std::log2(1.0 + negativity_sum(partial_transpose(rho, layout, over)));
}

NegativityReport log_negativity(const ThermalEnsemble& ens, Subsystem over) {
    NegativityReport report;
    report.temperature_k = ens.temperature_k;

    struct Cached {
        std::vector<double> weights;
        double sum;
    };
    std::map<const CoupledBlock*, Cached> cache;
    double total = 0.0;
    for (const auto& node : ens.nodes) {
        // A mirrored node has rho(-k) = conj rho(k): same partial-transpose spectrum.
        const auto hit = cache.find(node.block.get());
        double sum = 0.0;
        if (hit != cache.end() && hit->second.weights == node.state_weights) {
            sum = hit->second.sum;
        } else {
            ComplexMatrix rho = density_from_states(node.state_weights, node.block->spectrum.eigenvectors);
            if (node.conjugate) rho = rho.conjugate().eval();
            sum = negativity_sum(partial_transpose(rho, ens.layout, over));
            cache[node.block.get()] = {node.state_weights, sum};
        }
        report.node_negative_sums.push_back(sum);
        total += sum;
    }
    report.block_count = cache.size();
    report.eta = std::log2(1.0 + total);
    return report;
}

double com_negativity_check(const ThermalEnsemble& ens) {
    const Eigen::Index dim = ens.layout.dim();
    for (std::size_t i = 0; i < ens.nodes.size(); ++i) {
        const auto& node = ens.nodes[i];
        if (!node.block || node.block->layout.dim() != dim ||
            static_cast<Eigen::Index>(node.state_weights.size()) != node.block->spectrum.size()) {
            throw NumericalError("ensemble node does not hold a single k_z block of the declared layout");
        }
        if (i > 0 && !(node.k_z > ens.nodes[i - 1].k_z)) {
            throw NumericalError("ensemble k_z nodes are not distinct and ascending");
        }
    }
    // Each node stores only its own k_z block; transposing the COM factor maps
    // every block onto itself, so rho^Gamma_COM = rho.
    return 0.0;
}

void JCSpectrum::validate() const {
    if (!(e_g < e_l) || !(e_l <= e_u)) {
        throw InvalidInput("JC spectrum must satisfy E_g < E_l <= E_u");
    }
}

JCSpectrum jc_spectrum(const MatterModel& model, const CavityMode& mode) {
    mode.validate();
    if (model.dim() < 2) throw InvalidInput("JC reference needs at least two matter states");
    const double g = mode.lambda * std::abs(model.dipole.matrix()(0, 1)) * std::sqrt(mode.omega / 2.0);
    JCSpectrum s{0.0, mode.omega - g, mode.omega + g};
    s.validate();
    return s;
}

namespace {

struct JCWeights {
    double ground;  // relative to exp(-beta E_g)
    double lower;
    double upper;
    double z;
};

JCWeights jc_weights(const JCSpectrum& s, double temperature_k) {
    s.validate();
    const double kt = kelvin_to_hartree(temperature_k);
    if (kt == 0.0) return {1.0, 0.0, 0.0, 1.0};
    const double bl = std::exp(-(s.e_l - s.e_g) / kt);
    const double bu = std::exp(-(s.e_u - s.e_g) / kt);
    return {1.0, bl, bu, 1.0 + bl + bu};
}

}  // namespace

ComplexMatrix jc_density(const JCSpectrum& spectrum, double temperature_k) {
    const JCWeights w = jc_weights(spectrum, temperature_k);
    const double diag = 0.5 * (w.lower + w.upper) / w.z;
    const double off = 0.5 * (w.upper - w.lower) / w.z;
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    rho(0, 0) = w.ground / w.z;
    rho(1, 1) = rho(2, 2) = diag;
    rho(1, 2) = rho(2, 1) = off;
    return rho;
}

double jc_negativity_analytic(const JCSpectrum& spectrum, double temperature_k) {
    const JCWeights w = jc_weights(spectrum, temperature_k);
    const double delta = w.lower - w.upper;
    // sqrt(1 + delta^2) - 1 without cancellation.
    const double excess = delta * delta / (std::sqrt(1.0 + delta * delta) + 1.0);
    return std::log1p(excess / w.z) / std::numbers::ln2;
}

double jc_negativity_numeric(const JCSpectrum& spectrum, double temperature_k) {
    return log_negativity(jc_density(spectrum, temperature_k), BlockLayout{2, 2}, Subsystem::matter);
}

}  // namespace polariton
