#include "polariton/cli.hpp"

#include "polariton/ensemble.hpp"
#include "polariton/entanglement.hpp"
#include "polariton/observables.hpp"
#include "polariton/subsystem.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace polariton::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

class ConfigReader {
   public:
    ConfigReader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

    bool has(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        return it != sections_.end() && it->second.count(key);
    }

    const Entry& entry(const std::string& sec, const std::string& key) const {
        if (!has(sec, key)) throw ConfigError("[" + sec + "] missing required key '" + key + "'");
        return sections_.at(sec).at(key);
    }

    std::string text(const std::string& sec, const std::string& key, const std::string& fallback) const {
        return has(sec, key) ? entry(sec, key).value : fallback;
    }

    /// Number with an optional unit suffix. Energies accept Ha, eV, meV and K.
    double number(const std::string& sec, const std::string& key, std::optional<double> fallback,
                  bool energy = false) const {
        if (!has(sec, key)) {
            if (fallback) return *fallback;
            entry(sec, key);  // throws
        }
        const Entry& e = entry(sec, key);
        const auto tokens = split_tokens(e.value);
        if (tokens.empty() || tokens.size() > 2) fail(sec, key, e, "expected a number");
        double v = 0.0;
        const auto& t = tokens[0];
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
            fail(sec, key, e, "expected a number");
        }
        if (tokens.size() == 2) {
            const auto& unit = tokens[1];
            if (!energy) fail(sec, key, e, "unit '" + unit + "' not allowed here");
            if (unit == "Ha" || unit == "hartree") {
            } else if (unit == "eV") {
                v /= constants::kHartreeEv;
            } else if (unit == "meV") {
                v = mev_to_hartree(v);
            } else if (unit == "K") {
                v = kelvin_to_hartree(v);
            } else {
                fail(sec, key, e, "unknown unit '" + unit + "'");
            }
        }
        return v;
    }

    int integer(const std::string& sec, const std::string& key, std::optional<int> fallback) const {
        if (!has(sec, key)) {
            if (fallback) return *fallback;
            entry(sec, key);
        }
        const Entry& e = entry(sec, key);
        int v = 0;
        auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
        if (ec != std::errc{} || ptr != e.value.data() + e.value.size()) fail(sec, key, e, "expected an integer");
        return v;
    }

    [[noreturn]] static void fail(const std::string& sec, const std::string& key, const Entry& e,
                                  const std::string& what) {
        throw ConfigError("line " + std::to_string(e.line) + ": [" + sec + "] " + key + " = " + e.value + ": " +
                          what);
    }

    void require_only(const std::string& sec, const std::set<std::string>& allowed) const {
        auto it = sections_.find(sec);
        if (it == sections_.end()) return;
        for (const auto& [key, e] : it->second) {
            if (!allowed.count(key)) {
                throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key + "' in [" + sec + "]");
            }
        }
    }

   private:
    std::map<std::string, Section> sections_;
};

ConfigReader read_sections(const std::string& text) {
    static const std::set<std::string> known{"model", "cavity", "ensemble", "output"};
    std::map<std::string, Section> sections;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (!known.count(current)) {
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
            }
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (current.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (sections[current].count(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        sections[current][key] = {value, line_no};
    }
    return ConfigReader(std::move(sections));
}

MatterModel build_model(const ConfigReader& r, const std::filesystem::path& base_dir) {
    const std::string kind = r.text("model", "kind", "");
    if (kind.empty()) throw ConfigError("[model] missing required key 'kind'");

    std::set<std::string> allowed{"kind", "com", "total_mass", "total_charge"};
    const std::map<std::string, std::set<std::string>> per_kind{
        {"harmonic", {"mass", "omega", "charge", "n_basis"}},
        {"rotor", {"inertia", "mu0", "m_max"}},
        {"morse", {"depth", "alpha", "mass", "charge", "n_basis", "grid_points"}},
        {"two_level", {"gap", "dipole"}},
        {"file", {"path"}},
    };
    auto it = per_kind.find(kind);
    if (it == per_kind.end()) {
        ConfigReader::fail("model", "kind", r.entry("model", "kind"),
                             "expected harmonic, rotor, morse, two_level or file");
    }
    allowed.insert(it->second.begin(), it->second.end());
    r.require_only("model", allowed);

    ComParameters com;
    const std::string preset = r.text("model", "com", "none");
    if (preset == "hd_plus") {
        com = ComParameters::hd_plus();
    } else if (preset != "none") {
        ConfigReader::fail("model", "com", r.entry("model", "com"), "expected hd_plus or none");
    }
    com.total_mass = r.number("model", "total_mass", com.total_mass);
    com.total_charge = r.number("model", "total_charge", com.total_charge);

    if (kind == "harmonic") {
        return harmonic_model(r.number("model", "mass", 1.0), r.number("model", "omega", std::nullopt, true),
                              r.number("model", "charge", 1.0), r.integer("model", "n_basis", 10), com);
    }
    if (kind == "rotor") {
        return rotor_model(r.number("model", "inertia", std::nullopt), r.number("model", "mu0", 1.0),
                           r.integer("model", "m_max", 2), com);
    }
    if (kind == "morse") {
        DvrGrid grid;
        grid.points = r.integer("model", "grid_points", grid.points);
        return morse_model(r.number("model", "depth", std::nullopt, true), r.number("model", "alpha", std::nullopt),
                           r.number("model", "mass", 1.0), r.number("model", "charge", 1.0),
                           r.integer("model", "n_basis", 10), grid, com);
    }
    if (kind == "two_level") {
        return two_level_model(r.number("model", "gap", std::nullopt, true), r.number("model", "dipole", 1.0), com);
    }
    std::filesystem::path path = r.entry("model", "path").value;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    MatterModel model = load_model(path);
    if (r.has("model", "com") || r.has("model", "total_mass") || r.has("model", "total_charge")) {
        model = with_com(std::move(model), com);
    }
    return model;
}

bool parse_bool(const ConfigReader& r, const std::string& sec, const std::string& key, bool fallback) {
    if (!r.has(sec, key)) return fallback;
    const Entry& e = r.entry(sec, key);
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    ConfigReader::fail(sec, key, e, "expected true or false");
}

}  // namespace

std::vector<double> parse_temperature_grid(const std::string& spec) {
    const auto tokens = split_tokens(spec);
    if (tokens.empty()) throw ConfigError("temperature grid is empty");
    auto num = [](const std::string& t) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
            throw ConfigError("bad number '" + t + "' in temperature grid");
        }
        return v;
    };
    std::vector<double> grid;
    if (tokens[0] == "log" || tokens[0] == "lin") {
        if (tokens.size() != 4) throw ConfigError("grid form is '" + tokens[0] + " start stop count'");
        const double a = num(tokens[1]);
        const double b = num(tokens[2]);
        int n = 0;
        auto [ptr, ec] = std::from_chars(tokens[3].data(), tokens[3].data() + tokens[3].size(), n);
        if (ec != std::errc{} || n < 1) throw ConfigError("grid point count must be a positive integer");
        if (tokens[0] == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError("log grid bounds must be positive");
        for (int i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : double(i) / (n - 1);
            grid.push_back(tokens[0] == "log" ? std::exp(std::log(a) + f * (std::log(b) - std::log(a)))
                                              : a + f * (b - a));
        }
        grid.front() = a;
        if (n > 1) grid.back() = b;
    } else {
        for (const auto& t : tokens) grid.push_back(num(t));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0)) throw ConfigError("temperatures must be non-negative");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("temperature grid must be sorted ascending");
    }
    return grid;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    try {
        const ConfigReader r = read_sections(text);
        r.require_only("cavity", {"omega", "lambda", "n_fock"});
        r.require_only("ensemble", {"t_grid", "order", "k_z"});
        r.require_only("output", {"path", "include_jc", "max_levels"});

        RunConfig cfg;
        cfg.model = build_model(r, base_dir);
        cfg.mode.omega = r.number("cavity", "omega", HDplusMeta::reference_omega(), true);
        cfg.mode.lambda = r.number("cavity", "lambda", 0.005);
        if (r.has("cavity", "n_fock")) cfg.n_fock = r.integer("cavity", "n_fock", std::nullopt);
        cfg.mode.n_fock = cfg.n_fock.value_or(4);
        cfg.mode.validate();

        if (r.has("ensemble", "t_grid")) {
            try {
                cfg.temperatures_k = parse_temperature_grid(r.entry("ensemble", "t_grid").value);
            } catch (const ConfigError& e) {
                ConfigReader::fail("ensemble", "t_grid", r.entry("ensemble", "t_grid"), e.what());
            }
        }
        if (r.has("ensemble", "order")) {
            cfg.order = r.integer("ensemble", "order", std::nullopt);
            if (*cfg.order < 1 || *cfg.order > kMaxQuadratureOrder) {
                ConfigReader::fail("ensemble", "order", r.entry("ensemble", "order"), "must lie in [1, 64]");
            }
        }
        if (r.has("ensemble", "k_z")) {
            cfg.k_z.clear();
            for (const auto& t : split_tokens(r.entry("ensemble", "k_z").value)) {
                double v = 0.0;
                auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
                if (ec != std::errc{} || ptr != t.data() + t.size()) {
                    ConfigReader::fail("ensemble", "k_z", r.entry("ensemble", "k_z"), "bad number '" + t + "'");
                }
                cfg.k_z.push_back(v);
            }
            if (cfg.k_z.empty()) ConfigReader::fail("ensemble", "k_z", r.entry("ensemble", "k_z"), "empty list");
        }
        if (r.has("output", "path")) cfg.output = r.entry("output", "path").value;
        cfg.include_jc = parse_bool(r, "output", "include_jc", true);
        if (r.has("output", "max_levels")) {
            cfg.max_levels = r.integer("output", "max_levels", std::nullopt);
            if (*cfg.max_levels < 1) {
                ConfigReader::fail("output", "max_levels", r.entry("output", "max_levels"), "must be positive");
            }
        }
        return cfg;
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

CavityMode RunConfig::mode_for(Command cmd) const {
    CavityMode m = mode;
    if (n_fock) {
        m.n_fock = *n_fock;
    } else {
        switch (cmd) {
            case Command::spectrum:
            case Command::fluct: m.n_fock = 4; break;
            case Command::subtemps: m.n_fock = 3; break;
            case Command::negativity: m.n_fock = 2; break;
        }
    }
    return m;
}

int RunConfig::order_for(Command cmd) const {
    if (order) return *order;
    return cmd == Command::fluct ? 5 : 9;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int default_thread_count() {
    if (const char* env = std::getenv("POLARITON_THREADS")) {
        int n = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Evaluates rows [0, n) on a bounded worker pool; output order is by index.
std::vector<std::string> parallel_rows(std::size_t n, int threads, const std::function<std::string(std::size_t)>& row) {
    std::vector<std::string> out(n);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = row(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::string join(const std::string& header, const std::vector<std::string>& rows) {
    std::string csv = header + "\n";
    for (const auto& r : rows) csv += r;
    return csv;
}

void require_grid(const RunConfig& cfg) {
    if (cfg.temperatures_k.empty()) throw ConfigError("[ensemble] t_grid is required for this command");
}

std::string csv_row(std::initializer_list<double> values) {
    std::string line;
    bool first = true;
    for (double v : values) {
        if (!first) line += ',';
        line += format_double(v);
        first = false;
    }
    return line + "\n";
}

}  // namespace

std::string run_spectrum(const RunConfig& cfg, int threads) {
    const CavityMode mode = cfg.mode_for(Command::spectrum);
    const auto rows = parallel_rows(cfg.k_z.size(), threads, [&](std::size_t i) {
        const CoupledBlock block = assemble_block(cfg.model, mode, cfg.k_z[i]);
        const Eigen::Index levels =
            cfg.max_levels ? std::min<Eigen::Index>(*cfg.max_levels, block.spectrum.size()) : block.spectrum.size();
        std::string out;
        for (Eigen::Index n = 0; n < levels; ++n) {
            out += format_double(cfg.k_z[i]) + "," + std::to_string(n) + "," +
                   format_double(block.spectrum.eigenvalues[n]) + "\n";
        }
        return out;
    });
    return join("k_z,n,energy_ha", rows);
}

std::string run_fluctuations(const RunConfig& cfg, int threads) {
    require_grid(cfg);
    const CavityMode mode = cfg.mode_for(Command::fluct);
    const int order = cfg.order_for(Command::fluct);
    const auto rows = parallel_rows(cfg.temperatures_k.size(), threads, [&](std::size_t i) {
        const double t = cfg.temperatures_k[i];
        const FluctuationReport r = fluctuations(build_ensemble(cfg.model, mode, t, order), cfg.model);
        return csv_row({t, r.dE2, r.dD2, r.dd2, r.cross, r.dA2, r.bare_D, r.bare_A, r.classical_D, r.classical_A});
    });
    return join("T_K,dE2,dD2,dd2,cross,dA2,bare_D,bare_A,classical_D,classical_A", rows);
}

std::string run_subsystem_temps(const RunConfig& cfg, int threads) {
    require_grid(cfg);
    const CavityMode mode = cfg.mode_for(Command::subtemps);
    const int order = cfg.order_for(Command::subtemps);
    const auto rows = parallel_rows(cfg.temperatures_k.size(), threads, [&](std::size_t i) {
        const double t = cfg.temperatures_k[i];
        const SubsystemTempReport r = subsystem_temperatures(build_ensemble(cfg.model, mode, t, order), cfg.model);
        return csv_row({t, r.matter.tau_k, r.photon.tau_k, r.matter.residual, r.photon.residual});
    });
    return join("T_K,tau_m_K,tau_pt_K,residual_m,residual_pt", rows);
}

std::string run_negativity(const RunConfig& cfg, int threads) {
    require_grid(cfg);
    const CavityMode mode = cfg.mode_for(Command::negativity);
    const int order = cfg.order_for(Command::negativity);
    const std::optional<JCSpectrum> jc =
        cfg.include_jc ? std::optional<JCSpectrum>(jc_spectrum(cfg.model, mode)) : std::nullopt;
    const auto rows = parallel_rows(cfg.temperatures_k.size(), threads, [&](std::size_t i) {
        const double t = cfg.temperatures_k[i];
        const double eta = log_negativity(build_ensemble(cfg.model, mode, t, order), Subsystem::matter).eta;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double jc_a = jc ? jc_negativity_analytic(*jc, t) : nan;
        const double jc_n = jc ? jc_negativity_numeric(*jc, t) : nan;
        return csv_row({t, eta, jc_a, jc_n});
    });
    return join("T_K,eta_pf,eta_jc_analytic,eta_jc_numeric", rows);
}

std::string run(Command cmd, const RunConfig& cfg, int threads) {
    switch (cmd) {
        case Command::spectrum: return run_spectrum(cfg, threads);
        case Command::fluct: return run_fluctuations(cfg, threads);
        case Command::subtemps: return run_subsystem_temps(cfg, threads);
        case Command::negativity: return run_negativity(cfg, threads);
    }
    throw ConfigError("unknown command");
}

}  // namespace polariton::cli
