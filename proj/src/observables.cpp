#include "polariton/observables.hpp"

#include <algorithm>
#include <cmath>

namespace polariton {

FieldOperators field_operators(const MatterModel& model, const CavityMode& mode) {
    return field_operators(model, mode, mode.lambda);
}

FieldOperators field_operators(const MatterModel& model, const CavityMode& mode, double observable_lambda) {
    mode.validate();
    const Eigen::Index nm = model.dim();
    const double w = mode.omega;
    const double lam = observable_lambda;

    FieldOperators ops;
    ops.vector_potential = lift_photon(photon_p(mode), nm) * (lam / w);
    ops.displacement = lift_photon(photon_q(mode), nm) * (lam * w);
    ops.dipole = lift_matter(model.dipole, mode.n_fock);
    ops.electric = ops.displacement - ops.dipole * (lam * lam);
    return ops;
}

double FluctuationReport::decomposition_defect() const {
    const double rhs = dD2 - cross + lambda * lambda * lambda * lambda * dd2;
    const double scale = std::max({std::abs(dE2), std::abs(rhs), std::numeric_limits<double>::min()});
    return std::abs(dE2 - rhs) / scale;
}

FluctuationReport fluctuations(const ThermalEnsemble& ens, const MatterModel& model) {
    return fluctuations(ens, model, ens.mode.lambda);
}

FluctuationReport fluctuations(const ThermalEnsemble& ens, const MatterModel& model, double observable_lambda) {
    const FieldOperators ops = field_operators(model, ens.mode, observable_lambda);
    const double lam = observable_lambda;

    FluctuationReport r;
    r.temperature_k = ens.temperature_k;
    r.lambda = lam;

    r.mean_E = ensemble_average(ens, ops.electric);
    r.mean_D = ensemble_average(ens, ops.displacement);
    r.mean_A = ensemble_average(ens, ops.vector_potential);
    r.mean_d = ensemble_average(ens, ops.dipole);

    r.dE2 = ensemble_average(ens, ops.electric.squared()) - r.mean_E * r.mean_E;
    r.dD2 = ensemble_average(ens, ops.displacement.squared()) - r.mean_D * r.mean_D;
    r.dA2 = ensemble_average(ens, ops.vector_potential.squared()) - r.mean_A * r.mean_A;
    r.dd2 = ensemble_average(ens, ops.dipole.squared()) - r.mean_d * r.mean_d;

    // D' and d act on different tensor factors, so D'd is already Hermitian.
    const HermitianOperator dd(ComplexMatrix(ops.displacement.matrix() * ops.dipole.matrix()));
    r.cross = 2.0 * lam * lam * ensemble_average(ens, dd);

    CavityMode probe = ens.mode;
    probe.lambda = lam;
    r.bare_D = bare_D_fluct(probe, ens.temperature_k);
    r.bare_A = bare_A_fluct(probe, ens.temperature_k);
    r.classical_D = classical_D_fluct(probe, ens.temperature_k);
    r.classical_A = classical_A_fluct(probe, ens.temperature_k);
    return r;
}

std::optional<double> parity_check(const ThermalEnsemble& ens, const MatterModel& model) {
    if (!model.parity) return std::nullopt;
    const FieldOperators ops = field_operators(model, ens.mode);
    return std::max({std::abs(ensemble_average(ens, ops.electric)),
                     std::abs(ensemble_average(ens, ops.vector_potential)),
                     std::abs(ensemble_average(ens, ops.displacement)),
                     std::abs(ensemble_average(ens, ops.dipole))});
}

}  // namespace polariton
