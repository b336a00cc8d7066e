#include "polariton/matter.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace polariton {

void MatterModel::validate() const {
    if (energies.size() == 0) throw InvalidInput("matter model has no states");
    if (!energies.allFinite()) throw InvalidInput("matter energies must be finite");
    for (Eigen::Index i = 1; i < energies.size(); ++i) {
        if (energies[i] < energies[i - 1]) {
            throw InvalidInput("matter energies must be ascending");
        }
    }
    if (dipole.dim() != energies.size()) {
        throw InvalidInput("dipole dimension does not match number of energies");
    }
    if (!(total_mass > 0.0)) throw InvalidInput("total mass must be positive");
    if (parity) {
        if (static_cast<Eigen::Index>(parity->size()) != energies.size()) {
            throw InvalidInput("parity label count does not match number of energies");
        }
        for (std::size_t i = 0; i < parity->size(); ++i) {
            const int pi = (*parity)[i];
            if (pi != 1 && pi != -1) throw InvalidInput("parity labels must be +1 or -1");
            for (std::size_t j = 0; j < parity->size(); ++j) {
                if (pi == (*parity)[j] &&
                    std::abs(dipole.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) >
                        1e-12) {
                    throw InvalidInput("dipole couples states of equal parity");
                }
            }
        }
    }
}

MatterModel with_com(MatterModel model, const ComParameters& com) {
    model.total_mass = com.total_mass;
    model.total_charge = com.total_charge;
    model.validate();
    return model;
}

MatterModel harmonic_model(double mass, double omega_m, double charge, int n_basis,
                           const ComParameters& com) {
    if (!(mass > 0.0) || !(omega_m > 0.0)) {
        throw InvalidInput("harmonic model needs positive mass and frequency");
    }
    if (n_basis < 2) throw InvalidInput("harmonic model needs n_basis >= 2");

    MatterModel model;
    model.name = "harmonic";
    model.energies.resize(n_basis);
    RealMatrix x = RealMatrix::Zero(n_basis, n_basis);
    std::vector<int> parity(static_cast<std::size_t>(n_basis));
    for (int n = 0; n < n_basis; ++n) {
        model.energies[n] = omega_m * (n + 0.5);
        parity[static_cast<std::size_t>(n)] = (n % 2 == 0) ? 1 : -1;
        if (n + 1 < n_basis) {
            x(n, n + 1) = x(n + 1, n) = std::sqrt((n + 1) / (2.0 * mass * omega_m));
        }
    }
    model.dipole = HermitianOperator(RealMatrix(charge * x));
    model.parity = std::move(parity);
    return with_com(std::move(model), com);
}

MatterModel rotor_model(double inertia, double mu0, int m_max, const ComParameters& com) {
    if (!(inertia > 0.0)) throw InvalidInput("rotor inertia must be positive");
    if (m_max < 1) throw InvalidInput("rotor needs m_max >= 1");

    std::vector<int> ms{0};
    for (int m = 1; m <= m_max; ++m) {
        ms.push_back(-m);
        ms.push_back(m);
    }
    const auto dim = static_cast<Eigen::Index>(ms.size());

    MatterModel model;
    model.name = "rotor";
    model.energies.resize(dim);
    RealMatrix d = RealMatrix::Zero(dim, dim);
    std::vector<int> parity(ms.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
        const int mi = ms[static_cast<std::size_t>(i)];
        model.energies[i] = mi * mi / (2.0 * inertia);
        // Inversion maps theta -> theta + pi, so e^{i m theta} has parity (-1)^m.
        parity[static_cast<std::size_t>(i)] = (std::abs(mi) % 2 == 0) ? 1 : -1;
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (std::abs(mi - ms[static_cast<std::size_t>(j)]) == 1) d(i, j) = 0.5 * mu0;
        }
    }
    model.dipole = HermitianOperator(d);
    model.parity = std::move(parity);
    return with_com(std::move(model), com);
}

MatterModel morse_model(double depth, double alpha, double mass, double charge, int n_states,
                        const DvrGrid& grid, const ComParameters& com) {
    if (!(depth > 0.0) || !(alpha > 0.0) || !(mass > 0.0)) {
        throw InvalidInput("Morse model needs positive depth, range parameter and mass");
    }
    if (n_states < 3) throw InvalidInput("Morse model needs at least 3 bound states");
    if (grid.points < 3) throw InvalidInput("DVR grid needs at least 3 points");

    const int np = grid.points;
    const double x_lo = -grid.left_extent / alpha;
    const double x_hi = grid.right_extent / alpha;
    const double dx = (x_hi - x_lo) / (np - 1);

    // Colbert-Miller sinc-DVR kinetic energy on an unbounded uniform grid.
    RealMatrix h(np, np);
    RealVector xs(np);
    const double pre = 1.0 / (2.0 * mass * dx * dx);
    for (int i = 0; i < np; ++i) {
        xs[i] = x_lo + i * dx;
        for (int j = 0; j < np; ++j) {
            if (i == j) {
                h(i, j) = pre * std::numbers::pi * std::numbers::pi / 3.0;
            } else {
                const int k = i - j;
                h(i, j) = pre * 2.0 * ((k % 2 == 0) ? 1.0 : -1.0) / (double(k) * k);
            }
        }
        const double e = 1.0 - std::exp(-alpha * xs[i]);
        h(i, i) += depth * e * e;
    }

    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("Morse DVR diagonalization failed");

    int bound = 0;
    while (bound < np && solver.eigenvalues()[bound] < depth) ++bound;
    if (bound < n_states) {
        std::ostringstream msg;
        msg << "Morse DVR resolves only " << bound << " bound states, " << n_states << " requested";
        throw InvalidInput(msg.str());
    }

    const RealMatrix vecs = solver.eigenvectors().leftCols(n_states);
    RealMatrix d = vecs.transpose() * xs.asDiagonal() * vecs;
    d = 0.5 * charge * (d + d.transpose());

    MatterModel model;
    model.name = "morse";
    model.energies = solver.eigenvalues().head(n_states);
    model.dipole = HermitianOperator(d);
    return with_com(std::move(model), com);
}

MatterModel two_level_model(double gap, double d_ge, const ComParameters& com) {
    if (!(gap > 0.0)) throw InvalidInput("two-level gap must be positive");
    MatterModel model;
    model.name = "two_level";
    model.energies = RealVector{{0.0, gap}};
    RealMatrix d(2, 2);
    d << 0.0, d_ge, d_ge, 0.0;
    model.dipole = HermitianOperator(d);
    model.parity = std::vector<int>{1, -1};
    return with_com(std::move(model), com);
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& token, int line) {
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw InvalidInput("line " + std::to_string(line) + ": bad number '" + token + "'");
    }
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

MatterModel parse_model(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;

    std::map<std::string, std::string> header;
    std::vector<double> energies;
    std::vector<double> dipole_flat;
    std::vector<int> parity;
    bool has_parity = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw InvalidInput("line " + std::to_string(line_no) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section == "parity") has_parity = true;
            if (section != "model" && section != "energies" && section != "dipole" &&
                section != "parity") {
                throw InvalidInput("line " + std::to_string(line_no) + ": unknown section [" + section +
                                   "]");
            }
            continue;
        }
        if (section == "model") {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw InvalidInput("line " + std::to_string(line_no) + ": expected key = value");
            }
            const std::string key = trim(line.substr(0, eq));
            if (key != "name" && key != "mass" && key != "charge") {
                throw InvalidInput("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
            header[key] = trim(line.substr(eq + 1));
            continue;
        }
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            if (section == "energies") {
                energies.push_back(parse_double(tok, line_no));
            } else if (section == "dipole") {
                dipole_flat.push_back(parse_double(tok, line_no));
            } else if (section == "parity") {
                const double p = parse_double(tok, line_no);
                if (p != 1.0 && p != -1.0) {
                    throw InvalidInput("line " + std::to_string(line_no) + ": parity must be +1 or -1");
                }
                parity.push_back(static_cast<int>(p));
            } else {
                throw InvalidInput("line " + std::to_string(line_no) + ": data outside any section");
            }
        }
    }

    const auto n = static_cast<Eigen::Index>(energies.size());
    if (n == 0) throw InvalidInput("matter-model file has no [energies]");
    if (static_cast<Eigen::Index>(dipole_flat.size()) != 2 * n * n) {
        throw InvalidInput("[dipole] must hold " + std::to_string(n * n) + " complex entries");
    }

    MatterModel model;
    model.name = header.count("name") ? header["name"] : "file";
    model.total_mass = header.count("mass") ? parse_double(header["mass"], 0) : 1.0;
    model.total_charge = header.count("charge") ? parse_double(header["charge"], 0) : 0.0;
    model.energies = Eigen::Map<const RealVector>(energies.data(), n);
    ComplexMatrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto k = static_cast<std::size_t>(2 * (i * n + j));
            d(i, j) = Complex(dipole_flat[k], dipole_flat[k + 1]);
        }
    }
    model.dipole = HermitianOperator(d);
    if (has_parity) model.parity = std::move(parity);
    model.validate();
    return model;
}

std::string format_model(const MatterModel& model) {
    std::ostringstream out;
    out << "[model]\n";
    out << "name = " << model.name << "\n";
    out << "mass = " << fmt17(model.total_mass) << "\n";
    out << "charge = " << fmt17(model.total_charge) << "\n";
    out << "\n[energies]\n";
    for (Eigen::Index i = 0; i < model.energies.size(); ++i) out << fmt17(model.energies[i]) << "\n";
    out << "\n[dipole]\n";
    const auto& d = model.dipole.matrix();
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.cols(); ++j) {
            out << fmt17(d(i, j).real()) << " " << fmt17(d(i, j).imag()) << "\n";
        }
    }
    if (model.parity) {
        out << "\n[parity]\n";
        for (int p : *model.parity) out << p << "\n";
    }
    return out.str();
}

MatterModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open matter-model file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

void save_model(const MatterModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write matter-model file " + path.string());
    out << format_model(model);
}

}  // namespace polariton
