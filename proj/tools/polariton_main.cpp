// polariton: canonical-equilibrium properties of a molecule in a cavity.
//
//   polariton spectrum   --config run.ini [--out spectrum.csv]
//   polariton fluct      --config run.ini [--out fluct.csv] [--threads N]
//   polariton subtemps   --config run.ini ...
//   polariton negativity --config run.ini ...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include "polariton/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
    using polariton::cli::Command;

    CLI::App app{"Thermal light-matter properties under vibrational strong coupling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int threads = 0;

    struct Sub {
        const char* name;
        const char* help;
        Command cmd;
    };
    const Sub subs[] = {
        {"spectrum", "eigenvalues E(k_z, n) of the coupled blocks", Command::spectrum},
        {"fluct", "field and dipole fluctuations over the temperature grid", Command::fluct},
        {"subtemps", "matter and photon subsystem temperatures", Command::subtemps},
        {"negativity", "light-matter logarithmic negativity with JC overlay", Command::negativity},
    };
    Command selected = Command::spectrum;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_path, "CSV output path (default: [output] path, else stdout)");
        sub->add_option("--threads", threads, "worker threads (default: POLARITON_THREADS or all cores)")
            ->check(CLI::PositiveNumber);
        sub->callback([&selected, cmd = s.cmd] { selected = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        const auto cfg = polariton::cli::load_config(config_path);
        const int workers = threads > 0 ? threads : polariton::cli::default_thread_count();
        const std::string csv = polariton::cli::run(selected, cfg, workers);

        std::string target = out_path;
        if (target.empty() && cfg.output) target = cfg.output->string();
        if (target.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(target, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write " << target << "\n";
                return kConfigError;
            }
            out << csv;
        }
    } catch (const polariton::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const polariton::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const polariton::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
    return 0;
}
