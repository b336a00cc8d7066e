#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "polariton/cli.hpp"
#include "polariton/ensemble.hpp"
#include "polariton/entanglement.hpp"
#include "polariton/observables.hpp"
#include "polariton/subsystem.hpp"

namespace py = pybind11;
using namespace polariton;

namespace {

Subsystem subsystem_from(const std::string& tag) {
    if (tag == "m" || tag == "matter") return Subsystem::matter;
    if (tag == "pt" || tag == "photon") return Subsystem::photon;
    if (tag == "COM" || tag == "com") return Subsystem::com;
    throw InvalidInput("subsystem must be 'm', 'pt' or 'COM'");
}

cli::Command command_from(const std::string& name) {
    if (name == "spectrum") return cli::Command::spectrum;
    if (name == "fluct") return cli::Command::fluct;
    if (name == "subtemps") return cli::Command::subtemps;
    if (name == "negativity") return cli::Command::negativity;
    throw InvalidInput("unknown command '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact canonical-equilibrium properties of a molecule coupled to a cavity mode";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("kelvin_to_hartree", &kelvin_to_hartree, py::arg("kelvin"));
    m.def("hartree_to_kelvin", &hartree_to_kelvin, py::arg("hartree"));
    m.def("mev_to_hartree", &mev_to_hartree, py::arg("mev"));

    py::class_<MatterModel>(m, "MatterModel")
        .def_readonly("name", &MatterModel::name)
        .def_readonly("energies", &MatterModel::energies)
        .def_property_readonly("dipole", [](const MatterModel& mm) { return mm.dipole.matrix(); })
        .def_readonly("parity", &MatterModel::parity)
        .def_readonly("total_mass", &MatterModel::total_mass)
        .def_readonly("total_charge", &MatterModel::total_charge)
        .def_property_readonly("dim", &MatterModel::dim)
        .def("with_com", [](const MatterModel& mm, double mass, double charge) {
            return with_com(mm, {mass, charge});
        }, py::arg("total_mass"), py::arg("total_charge"));

    m.def("harmonic_model", [](double mass, double omega_m, double charge, int n_basis) {
        return harmonic_model(mass, omega_m, charge, n_basis);
    }, py::arg("mass"), py::arg("omega_m"), py::arg("charge"), py::arg("n_basis") = 10);
    m.def("rotor_model", [](double inertia, double mu0, int m_max) { return rotor_model(inertia, mu0, m_max); },
          py::arg("inertia"), py::arg("mu0"), py::arg("m_max"));
    m.def("morse_model", [](double depth, double alpha, double mass, double charge, int n_states, int points) {
        DvrGrid grid;
        grid.points = points;
        return morse_model(depth, alpha, mass, charge, n_states, grid);
    }, py::arg("depth"), py::arg("alpha"), py::arg("mass"), py::arg("charge"), py::arg("n_states") = 10,
       py::arg("grid_points") = 401);
    m.def("two_level_model", [](double gap, double d_ge) { return two_level_model(gap, d_ge); },
          py::arg("gap"), py::arg("d_ge"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.attr("HD_PLUS_TOTAL_MASS") = HDplusMeta::total_mass();
    m.attr("HD_PLUS_REFERENCE_OMEGA") = HDplusMeta::reference_omega();

    py::class_<CavityMode>(m, "CavityMode")
        .def(py::init([](double omega, double lambda, int n_fock) {
                 CavityMode mode{omega, lambda, n_fock};
                 mode.validate();
                 return mode;
             }),
             py::arg("omega"), py::arg("coupling"), py::arg("n_fock") = 4)
        .def_readwrite("omega", &CavityMode::omega)
        .def_readwrite("coupling", &CavityMode::lambda)
        .def_readwrite("n_fock", &CavityMode::n_fock);

    m.def("photon_q", [](const CavityMode& mode) { return photon_q(mode).matrix(); });
    m.def("photon_p", [](const CavityMode& mode) { return photon_p(mode).matrix(); });

    py::class_<CoupledBlock>(m, "CoupledBlock")
        .def_readonly("k_z", &CoupledBlock::k_z)
        .def_property_readonly("hamiltonian", [](const CoupledBlock& b) { return b.hamiltonian.matrix(); })
        .def_property_readonly("eigenvalues", [](const CoupledBlock& b) { return b.spectrum.eigenvalues; })
        .def_property_readonly("eigenvectors", [](const CoupledBlock& b) { return b.spectrum.eigenvectors; });
    m.def("assemble_block", [](const MatterModel& model, const CavityMode& mode, double k_z) {
        return assemble_block(model, mode, k_z);
    }, py::arg("model"), py::arg("mode"), py::arg("k_z") = 0.0);

    m.def("gauss_hermite_nodes", [](int s) {
        auto rule = gauss_hermite_nodes(s);
        return py::make_tuple(rule.nodes, rule.weights);
    }, py::arg("order"));

    py::class_<ThermalEnsemble>(m, "ThermalEnsemble")
        .def_readonly("temperature_k", &ThermalEnsemble::temperature_k)
        .def_readonly("beta", &ThermalEnsemble::beta)
        .def_readonly("order", &ThermalEnsemble::order)
        .def_property_readonly("k_z", [](const ThermalEnsemble& e) {
            std::vector<double> ks;
            for (const auto& n : e.nodes) ks.push_back(n.k_z);
            return ks;
        })
        .def("total_weight", &ThermalEnsemble::total_weight);
    m.def("build_ensemble", [](const MatterModel& model, const CavityMode& mode, double t, int order, bool folded) {
        EnsembleOptions opts;
        opts.evaluation = folded ? NodeEvaluation::folded : NodeEvaluation::full;
        return build_ensemble(model, mode, t, order, opts);
    }, py::arg("model"), py::arg("mode"), py::arg("temperature_k"), py::arg("order") = 9, py::arg("folded") = true);
    m.def("ensemble_average", [](const ThermalEnsemble& ens, const ComplexMatrix& op) {
        return ensemble_average(ens, HermitianOperator(op));
    }, py::arg("ensemble"), py::arg("operator"));

    m.def("bare_D_fluct", &bare_D_fluct, py::arg("mode"), py::arg("temperature_k"));
    m.def("bare_A_fluct", &bare_A_fluct, py::arg("mode"), py::arg("temperature_k"));
    m.def("classical_D_fluct", &classical_D_fluct, py::arg("mode"), py::arg("temperature_k"));
    m.def("classical_A_fluct", &classical_A_fluct, py::arg("mode"), py::arg("temperature_k"));

    py::class_<FluctuationReport>(m, "FluctuationReport")
        .def_readonly("temperature_k", &FluctuationReport::temperature_k)
        .def_readonly("dE2", &FluctuationReport::dE2)
        .def_readonly("dD2", &FluctuationReport::dD2)
        .def_readonly("dd2", &FluctuationReport::dd2)
        .def_readonly("dA2", &FluctuationReport::dA2)
        .def_readonly("cross", &FluctuationReport::cross)
        .def_readonly("mean_E", &FluctuationReport::mean_E)
        .def_readonly("mean_D", &FluctuationReport::mean_D)
        .def_readonly("mean_A", &FluctuationReport::mean_A)
        .def_readonly("mean_d", &FluctuationReport::mean_d)
        .def_readonly("bare_D", &FluctuationReport::bare_D)
        .def_readonly("bare_A", &FluctuationReport::bare_A)
        .def_readonly("classical_D", &FluctuationReport::classical_D)
        .def_readonly("classical_A", &FluctuationReport::classical_A);
    m.def("fluctuations", [](const ThermalEnsemble& ens, const MatterModel& model, std::optional<double> lam) {
        return lam ? fluctuations(ens, model, *lam) : fluctuations(ens, model);
    }, py::arg("ensemble"), py::arg("model"), py::arg("observable_coupling") = py::none());
    m.def("parity_check", &parity_check, py::arg("ensemble"), py::arg("model"));

    m.def("partial_trace", [](const ThermalEnsemble& ens, const std::string& keep) {
        return partial_trace(ens, subsystem_from(keep)).matrix.matrix();
    }, py::arg("ensemble"), py::arg("keep"));
    m.def("subsystem_temperatures", [](const ThermalEnsemble& ens, const MatterModel& model) {
        const auto r = subsystem_temperatures(ens, model);
        py::dict d;
        d["T_K"] = r.temperature_k;
        d["tau_m_K"] = r.matter.tau_k;
        d["tau_pt_K"] = r.photon.tau_k;
        d["residual_m"] = r.matter.residual;
        d["residual_pt"] = r.photon.residual;
        d["tau_com_K"] = r.tau_com_k;
        return d;
    }, py::arg("ensemble"), py::arg("model"));

    m.def("log_negativity", [](const ThermalEnsemble& ens, const std::string& over) {
        return log_negativity(ens, subsystem_from(over)).eta;
    }, py::arg("ensemble"), py::arg("over") = "m");
    m.def("com_negativity_check", &com_negativity_check, py::arg("ensemble"));

    py::class_<JCSpectrum>(m, "JCSpectrum")
        .def(py::init([](double e_g, double e_l, double e_u) {
                 JCSpectrum s{e_g, e_l, e_u};
                 s.validate();
                 return s;
             }),
             py::arg("e_g"), py::arg("e_l"), py::arg("e_u"))
        .def_readonly("e_g", &JCSpectrum::e_g)
        .def_readonly("e_l", &JCSpectrum::e_l)
        .def_readonly("e_u", &JCSpectrum::e_u);
    m.def("jc_spectrum", &jc_spectrum, py::arg("model"), py::arg("mode"));
    m.def("jc_density", &jc_density, py::arg("spectrum"), py::arg("temperature_k"));
    m.def("jc_negativity_analytic", &jc_negativity_analytic, py::arg("spectrum"), py::arg("temperature_k"));
    m.def("jc_negativity_numeric", &jc_negativity_numeric, py::arg("spectrum"), py::arg("temperature_k"));

    m.def("run", [](const std::string& command, const std::string& config_text, int threads) {
        return cli::run(command_from(command), cli::parse_config(config_text), threads);
    }, py::arg("command"), py::arg("config"), py::arg("threads") = 1,
       "Run a CLI subcommand on config text and return the CSV output.");
}
