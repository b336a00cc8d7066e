#pragma once

// Run configuration, temperature sweeps and CSV emission behind the
// `polariton` command-line tool.

#include "polariton/matter.hpp"
#include "polariton/hamiltonian.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace polariton::cli {

/// Configuration problem; the message carries the line/key diagnostic.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class Command { spectrum, fluct, subtemps, negativity };

struct RunConfig {
    MatterModel model;
    CavityMode mode;                 // n_fock ignored when `n_fock` is unset
    std::optional<int> n_fock;       // default depends on the command
    std::optional<int> order;        // Gauss-Hermite order, default per command
    std::vector<double> temperatures_k;
    std::vector<double> k_z{0.0};    // spectrum nodes
    std::optional<int> max_levels;   // spectrum rows per node
    bool include_jc = true;
    std::optional<std::filesystem::path> output;

    /// Mode with the command's default Fock truncation applied.
    CavityMode mode_for(Command cmd) const;
    int order_for(Command cmd) const;
};

/// Parses the sectioned key=value format. Relative model file paths resolve
/// against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Parses a temperature grid: "log a b n", "lin a b n" or a comma/space list.
std::vector<double> parse_temperature_grid(const std::string& spec);

std::string run_spectrum(const RunConfig& cfg, int threads = 1);
std::string run_fluctuations(const RunConfig& cfg, int threads = 1);
std::string run_subsystem_temps(const RunConfig& cfg, int threads = 1);
std::string run_negativity(const RunConfig& cfg, int threads = 1);

std::string run(Command cmd, const RunConfig& cfg, int threads = 1);

/// Round-trip exact float formatting used in every CSV.
std::string format_double(double v);

/// `--threads` fallback: POLARITON_THREADS, else hardware concurrency.
int default_thread_count();

}  // namespace polariton::cli
