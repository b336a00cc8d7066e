#include "polariton/subsystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace polariton {

const char* to_string(Subsystem w) {
    switch (w) {
        case Subsystem::photon: return "pt";
        case Subsystem::matter: return "m";
        case Subsystem::com: return "COM";
    }
    return "?";
}

ReducedDensity make_reduced_density(Subsystem w, const ComplexMatrix& rho) {
    ReducedDensity rdm;
    rdm.subsystem = w;
    rdm.matrix = HermitianOperator(rho, 1e-10);
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "reduced density has trace " << trace;
        throw NumericalError(msg.str());
    }
    const SpectralDecomposition spec = eigh(rdm.matrix);
    const Eigen::Index n = spec.size();
    rdm.weights.resize(n);
    rdm.states.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rdm.weights[i] = spec.eigenvalues[n - 1 - i];
        rdm.states.col(i) = spec.eigenvectors.col(n - 1 - i);
    }
    if (n > 0 && rdm.weights[n - 1] < -1e-12) {
        throw NumericalError("reduced density is not positive semidefinite");
    }
    return rdm;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const BlockLayout& layout, Subsystem keep) {
    const Eigen::Index nm = layout.matter_dim;
    const Eigen::Index nf = layout.fock_dim;
    if (rho.rows() != nm * nf || rho.cols() != nm * nf) {
        throw InvalidInput("density matrix does not match the declared factor dimensions");
    }
    if (keep == Subsystem::matter) {
        ComplexMatrix out = ComplexMatrix::Zero(nm, nm);
        for (Eigen::Index a = 0; a < nm; ++a)
            for (Eigen::Index b = 0; b < nm; ++b)
                for (Eigen::Index f = 0; f < nf; ++f) out(a, b) += rho(a * nf + f, b * nf + f);
        return out;
    }
    if (keep == Subsystem::photon) {
        ComplexMatrix out = ComplexMatrix::Zero(nf, nf);
        for (Eigen::Index f = 0; f < nf; ++f)
            for (Eigen::Index g = 0; g < nf; ++g)
                for (Eigen::Index m = 0; m < nm; ++m) out(f, g) += rho(m * nf + f, m * nf + g);
        return out;
    }
    throw InvalidInput("partial trace can keep only the matter or photon factor");
}

ReducedDensity partial_trace(const ThermalEnsemble& ens, Subsystem keep) {
    if (keep != Subsystem::matter && keep != Subsystem::photon) {
        throw InvalidInput("partial trace can keep only the matter or photon factor");
    }
    const Eigen::Index nm = ens.layout.matter_dim;
    const Eigen::Index nf = ens.layout.fock_dim;
    const Eigen::Index dim = keep == Subsystem::matter ? nm : nf;
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);

    for (const auto& node : ens.nodes) {
        const ComplexMatrix& v = node.block->spectrum.eigenvectors;
        for (Eigen::Index n = 0; n < v.cols(); ++n) {
            const double w = node.state_weights[static_cast<std::size_t>(n)];
            if (w == 0.0) continue;
            // Column-major view: coeff(f, m) = psi[m * nf + f].
            ComplexMatrix psi = Eigen::Map<const ComplexMatrix>(v.col(n).data(), nf, nm);
            if (node.conjugate) psi = psi.conjugate().eval();
            if (keep == Subsystem::matter) {
                rho.noalias() += w * psi.transpose() * psi.conjugate();
            } else {
                rho.noalias() += w * psi * psi.adjoint();
            }
        }
    }
    return make_reduced_density(keep, rho);
}

HermitianOperator subsystem_hamiltonian(const MatterModel& model, const CavityMode& mode, Subsystem w) {
    if (w == Subsystem::matter) {
        return HermitianOperator(RealMatrix(model.energies.asDiagonal()));
    }
    if (w == Subsystem::photon) {
        mode.validate();
        RealMatrix h = RealMatrix::Zero(mode.n_fock, mode.n_fock);
        for (int n = 0; n < mode.n_fock; ++n) h(n, n) = mode.omega * (n + 0.5);
        return HermitianOperator(h);
    }
    throw InvalidInput("the COM temperature is analytic; use com_temperature()");
}

namespace {

struct FitProblem {
    std::vector<double> weights;
    std::vector<double> energies;  // shifted so that min = 0
    std::vector<bool> in_objective;

    double objective(double tau_k) const {
        const double kt = tau_k * constants::kBoltzmann;
        double z = 0.0;
        std::vector<double> boltz(energies.size());
        for (std::size_t l = 0; l < energies.size(); ++l) {
            boltz[l] = std::exp(-energies[l] / kt);
            z += boltz[l];
        }
        double acc = 0.0;
        for (std::size_t l = 0; l < energies.size(); ++l) {
            if (in_objective[l]) acc += std::abs(weights[l] - boltz[l] / z);
        }
        return acc;
    }

    // tau -> 0 limit: all Boltzmann weight on the lowest-energy manifold.
    double objective_at_zero() const {
        std::size_t ground = 0;
        for (std::size_t l = 0; l < energies.size(); ++l)
            if (energies[l] == 0.0) ++ground;
        double acc = 0.0;
        for (std::size_t l = 0; l < energies.size(); ++l) {
            const double target = energies[l] == 0.0 ? 1.0 / static_cast<double>(ground) : 0.0;
            if (in_objective[l]) acc += std::abs(weights[l] - target);
        }
        return acc;
    }
};

}  // namespace

TemperatureFit fit_temperature(const ReducedDensity& rdm, const HermitianOperator& h_sub,
                               const FitOptions& options) {
    if (h_sub.dim() != rdm.matrix.dim()) {
        throw InvalidInput("subsystem Hamiltonian does not match the reduced density");
    }
    const Eigen::Index n = rdm.weights.size();
    FitProblem problem;
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (Eigen::Index l = 0; l < n; ++l) {
        raw[static_cast<std::size_t>(l)] = rdm.states.col(l).dot(h_sub.matrix() * rdm.states.col(l)).real();
    }
    const double e_min = *std::min_element(raw.begin(), raw.end());
    const double e_max = *std::max_element(raw.begin(), raw.end());
    const double e_scale = std::max(std::abs(e_min), std::abs(e_max));
    if (!(e_max - e_min > 1e-14 * e_scale)) {
        throw UndefinedTemperature("all subsystem energies coincide; temperature is undefined");
    }
    int significant = 0;
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto i = static_cast<std::size_t>(l);
        // Snap near-degenerate energies onto the minimum so the tau -> 0 limit is well defined.
        const double shifted = raw[i] - e_min;
        problem.energies.push_back(shifted <= 1e-12 * e_scale ? 0.0 : shifted);
        problem.weights.push_back(rdm.weights[l]);
        problem.in_objective.push_back(rdm.weights[l] > options.min_weight);
        if (rdm.weights[l] > options.min_weight) ++significant;
    }
    if (significant < 2) {
        // Pure subsystem state: the fit collapses onto the tau -> 0 limit.
        return {0.0, problem.objective_at_zero()};
    }

    double lo_k = 0.0;
    double hi_k = 0.0;
    if (options.reference_k > 0.0) {
        lo_k = options.reference_k / 100.0;
        hi_k = options.reference_k * 100.0;
    } else {
        double gap = std::numeric_limits<double>::infinity();
        for (double e : problem.energies)
            if (e > 0.0) gap = std::min(gap, e);
        const double t_ref = gap / constants::kBoltzmann;
        lo_k = t_ref / 1e4;
        hi_k = t_ref * 1e2;
    }

    // Coarse log scan locates the basin; golden section refines it. The L1
    // objective is only piecewise smooth, so no derivatives are used.
    constexpr int kScan = 400;
    const double log_lo = std::log(lo_k);
    const double log_hi = std::log(hi_k);
    const double step = (log_hi - log_lo) / kScan;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const double v = problem.objective(std::exp(log_lo + i * step));
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = log_lo + std::max(best - 1, 0) * step;
    double b = log_lo + std::min(best + 1, kScan) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = problem.objective(std::exp(c));
    double fd = problem.objective(std::exp(d));
    while (b - a > options.relative_width) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = problem.objective(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = problem.objective(std::exp(d));
        }
    }
    const double tau = std::exp(0.5 * (a + b));
    TemperatureFit fit{tau, problem.objective(tau)};
    if (best_val < fit.residual) fit = {std::exp(log_lo + best * step), best_val};
    return fit;
}

double com_temperature(double temperature_k) {
    if (!(temperature_k >= 0.0)) throw InvalidInput("temperature must be non-negative");
    return temperature_k;
}

SubsystemTempReport subsystem_temperatures(const ThermalEnsemble& ens, const MatterModel& model) {
    SubsystemTempReport report;
    report.temperature_k = ens.temperature_k;
    FitOptions options;
    options.reference_k = ens.temperature_k;
    report.matter = fit_temperature(partial_trace(ens, Subsystem::matter),
                                    subsystem_hamiltonian(model, ens.mode, Subsystem::matter), options);
    report.photon = fit_temperature(partial_trace(ens, Subsystem::photon),
                                    subsystem_hamiltonian(model, ens.mode, Subsystem::photon), options);
    report.tau_com_k = com_temperature(ens.temperature_k);
    return report;
}

}  // namespace polariton
