#pragma once

// Bare relative-matter models: spectrum, dipole matrix in the energy
// eigenbasis, optional parity labels and centre-of-mass metadata.

#include "polariton/core.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polariton {

/// Masses of the HD+ constituents (a.u.) and the reference ro-vibrational
/// excitation used for resonant cavities.
struct HDplusMeta {
    static constexpr double proton_mass = 1836.15267;
    static constexpr double deuteron_mass = 3670.48297;
    static constexpr double electron_mass = 1.0;
    static constexpr double total_charge = 1.0;
    static constexpr double reference_mev = 5.4;

    static constexpr double total_mass() { return proton_mass + deuteron_mass + electron_mass; }
    static double reference_omega() { return mev_to_hartree(reference_mev); }
};

/// Centre-of-mass data entering the charged-COM / photon coupling.
struct ComParameters {
    double total_mass = 1.0;
    double total_charge = 0.0;

    static ComParameters hd_plus() { return {HDplusMeta::total_mass(), HDplusMeta::total_charge}; }
};

struct MatterModel {
    std::string name;
    RealVector energies;        // ascending, Hartree
    HermitianOperator dipole;   // e*bohr, energy eigenbasis
    std::optional<std::vector<int>> parity;
    double total_mass = 1.0;
    double total_charge = 0.0;

    Eigen::Index dim() const { return energies.size(); }
    ComParameters com() const { return {total_mass, total_charge}; }

    /// Throws InvalidInput when any structural invariant is violated.
    void validate() const;
};

MatterModel with_com(MatterModel model, const ComParameters& com);

/// Harmonic oscillator with dipole Z*x. Basis |n>, n = 0..n_basis-1.
MatterModel harmonic_model(double mass, double omega_m, double charge, int n_basis,
                           const ComParameters& com = {});

/// Planar rigid rotor m^2/(2I) with dipole mu0*cos(theta), exponential basis
/// ordered m = 0, -1, +1, -2, +2, ...
MatterModel rotor_model(double inertia, double mu0, int m_max, const ComParameters& com = {});

struct DvrGrid {
    int points = 401;
    double left_extent = 2.0;    // grid starts at x0 - left_extent/a
    double right_extent = 12.0;  // grid ends at x0 + right_extent/a
};

/// Morse oscillator D(1 - exp(-a(x - x0)))^2 solved on a uniform sinc-DVR.
/// The lowest n_states bound states are kept; x0 = 0 and the dipole is Z*x.
MatterModel morse_model(double depth, double alpha, double mass, double charge, int n_states = 10,
                        const DvrGrid& grid = {}, const ComParameters& com = {});

MatterModel two_level_model(double gap, double d_ge, const ComParameters& com = {});

MatterModel load_model(const std::filesystem::path& path);
void save_model(const MatterModel& model, const std::filesystem::path& path);

/// Text form of the matter-model file format.
MatterModel parse_model(const std::string& text);
std::string format_model(const MatterModel& model);

}  // namespace polariton
