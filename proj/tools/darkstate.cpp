// Copyright 2026 the darkstate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: declare or load a system, check the rotating frame,
// classify dark states, propagate, scan parameters, and emit the Rb-87 table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "darkstate/darkstate.hpp"

namespace {

using namespace darkstate;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomainVerdict = 2;  // infeasible frame / no dark state

struct CommonOptions {
    std::string preset;
    std::string systemFile;
    double tolDegeneracy = kDefaultGroupTolerance;
    double tolRank = kDefaultRankToleranceFactor;
    std::string out;
    std::string format;  // table | json | csv
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& defaultFormat) {
    auto* p = cmd->add_option("--preset", opt.preset, "preset system name");
    auto* f = cmd->add_option("--system", opt.systemFile, "system-spec JSON file");
    p->excludes(f);
    cmd->add_option("--tol-degeneracy", opt.tolDegeneracy, "degeneracy grouping tolerance");
    cmd->add_option("--tol-rank", opt.tolRank, "SVD rank threshold factor");
    cmd->add_option("--out", opt.out, "output path (default: stdout)");
    opt.format = defaultFormat;
    cmd->add_option("--format", opt.format, "output format: table | json | csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
}

LevelSystem resolve_system(const CommonOptions& opt) {
    if (!opt.preset.empty()) return presets::make_preset(opt.preset);
    if (!opt.systemFile.empty()) {
        std::ifstream in(opt.systemFile);
        if (!in) throw std::runtime_error("cannot open system file '" + opt.systemFile + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        LevelSystem sys = load_system(ss.str());
        ValidationReport rep = validate_system(sys);
        if (!rep.ok()) {
            std::string msg = "system file is invalid:";
            for (const auto& e : rep.errors) msg += "\n  " + e;
            throw std::runtime_error(msg);
        }
        return sys;
    }
    throw CLI::ValidationError("exactly one of --preset or --system is required");
}

void emit(const CommonOptions& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot write to '" + opt.out + "'");
    f << text;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// stable content hash of the system declaration, for reproducibility metadata
uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

nlohmann::json metadata(const LevelSystem& sys, const CommonOptions& opt) {
    nlohmann::json meta;
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(system_to_json(sys).dump())));
    meta["systemHash"] = hash;
    meta["stackingConvention"] = "column";
    meta["tolDegeneracy"] = opt.tolDegeneracy;
    meta["tolRank"] = opt.tolRank;
    return meta;
}

void write_sidecar(const CommonOptions& opt, const nlohmann::json& meta) {
    if (opt.out.empty()) return;
    std::ofstream f(opt.out + ".meta.json");
    if (f) f << meta.dump(2) << "\n";
}

Eigen::MatrixXcd parse_rho0(const std::string& spec, const LevelSystem& sys) {
    const int N = sys.dim();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N, N);
    if (spec.size() >= 2 && (spec[0] == 'e' || spec[0] == 'g') &&
        spec.find_first_not_of("0123456789", 1) == std::string::npos) {
        int k = std::stoi(spec.substr(1)) - 1;
        int idx = spec[0] == 'g' ? k : sys.numGround() + k;
        if (k < 0 || (spec[0] == 'g' && k >= sys.numGround()) ||
            (spec[0] == 'e' && k >= sys.numExcited()))
            throw std::runtime_error("rho0 '" + spec + "' addresses a level that does not exist");
        rho(idx, idx) = 1.0;
        return rho;
    }
    if (spec == "mixed-ground") {
        for (int i = 0; i < sys.numGround(); ++i) rho(i, i) = 1.0 / sys.numGround();
        return rho;
    }
    // otherwise: a JSON file {"matrix": [[[re,im],...],...]}
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("rho0: unknown spec and no such file '" + spec + "'");
    nlohmann::json doc = nlohmann::json::parse(in);
    const auto& m = doc.at("matrix");
    if (static_cast<int>(m.size()) != N)
        throw std::runtime_error("rho0 file: matrix dimension does not match the system");
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            rho(i, j) = Complex(m[i][j][0].get<double>(), m[i][j][1].get<double>());
    check_density_matrix(rho);
    return rho;
}

ScanAxis parse_axis(const std::string& text) {
    // PATH:MIN:MAX:N, parsed from the right since PATH may contain '('
    std::vector<std::string> parts;
    std::string rest = text;
    for (int k = 0; k < 3; ++k) {
        auto pos = rest.rfind(':');
        if (pos == std::string::npos)
            throw std::runtime_error("axis '" + text + "': expected PATH:MIN:MAX:N");
        parts.insert(parts.begin(), rest.substr(pos + 1));
        rest = rest.substr(0, pos);
    }
    return make_axis(rest, std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]));
}

// ---------------------------------------------------------------------------

int cmd_rwa(const CommonOptions& opt) {
    LevelSystem sys = resolve_system(opt);
    RotatingFrame frame = solve_frame(sys);
    std::ostringstream os;
    if (opt.format == "json") {
        nlohmann::json doc;
        doc["feasible"] = frame.feasible;
        doc["independentCycleCount"] = frame.independentCycleCount;
        doc["epsilons"] = frame.epsilons;
        doc["cycles"] = nlohmann::json::array();
        for (const auto& c : frame.cycleConstraints)
            doc["cycles"].push_back({{"couplings", c.edges}, {"residual", c.residual}});
        os << doc.dump(2) << "\n";
    } else {
        os << "feasible: " << (frame.feasible ? "yes" : "no") << "\n";
        os << "independent cycles: " << frame.independentCycleCount << "\n";
        os << "frame energies (basis order):";
        for (double e : frame.epsilons) os << " " << num(e);
        os << "\n";
        for (const auto& c : frame.cycleConstraints) {
            os << "cycle through couplings";
            for (int k : c.edges) os << " #" << (k + 1);
            os << ": residual " << num(c.residual) << "\n";
        }
    }
    emit(opt, os.str());
    return frame.feasible ? kExitOk : kExitDomainVerdict;
}

int cmd_classify(const CommonOptions& opt) {
    LevelSystem sys = resolve_system(opt);
    RotatingFrame frame = solve_frame(sys);
    if (!frame.feasible) {
        emit(opt, "rotating frame infeasible; run the rwa command for the cycle report\n");
        return kExitDomainVerdict;
    }
    RwaHamiltonian H = build_hamiltonian(sys, frame);
    DarkClassification cls = dark_subspaces(sys, H, opt.tolDegeneracy, opt.tolRank);
    if (opt.format == "json")
        emit(opt, classification_to_json(cls, sys).dump(2) + "\n");
    else
        emit(opt, classification_table(cls, sys));
    return cls.totalDarkDim > 0 ? kExitOk : kExitDomainVerdict;
}

int cmd_evolve(const CommonOptions& opt, double tEnd, int steps, const std::string& rho0Spec,
               bool eigenbasis) {
    LevelSystem sys = resolve_system(opt);
    RotatingFrame frame = solve_frame(sys);
    if (!frame.feasible) {
        emit(opt, "rotating frame infeasible\n");
        return kExitDomainVerdict;
    }
    RwaHamiltonian H = build_hamiltonian(sys, frame);
    Superoperator L = build_lindblad(sys, H);
    Eigen::MatrixXcd rho0 = parse_rho0(rho0Spec, sys);
    std::vector<double> times{0.0};
    for (int k = 1; k <= steps && tEnd > 0.0; ++k) times.push_back(tEnd * k / steps);
    TrajectoryResult traj = propagate(L, rho0, times, sys.numGround());

    Eigen::MatrixXcd eigvecs;
    if (eigenbasis) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix);
        eigvecs = es.eigenvectors();
    }
    std::ostringstream os;
    os << "t";
    for (const auto& lv : sys.ground) os << ",pop_" << lv.label;
    for (const auto& lv : sys.excited) os << ",pop_" << lv.label;
    if (eigenbasis)
        for (int n = 0; n < sys.dim(); ++n) os << ",eigpop_phi" << (n + 1);
    os << ",purity,excitedPopulation\n";
    for (size_t k = 0; k < traj.times.size(); ++k) {
        os << num(traj.times[k]);
        for (int i = 0; i < sys.dim(); ++i) os << "," << num(traj.populations[k](i));
        if (eigenbasis)
            for (int n = 0; n < sys.dim(); ++n)
                os << ","
                   << num((eigvecs.col(n).adjoint() * traj.states[k] * eigvecs.col(n))(0).real());
        os << "," << num(traj.purity[k]) << "," << num(traj.excitedPopulation[k]) << "\n";
    }
    emit(opt, os.str());
    nlohmann::json meta = metadata(sys, opt);
    meta["tEnd"] = tEnd;
    meta["steps"] = steps;
    meta["rho0"] = rho0Spec;
    write_sidecar(opt, meta);
    return kExitOk;
}

int cmd_scan(const CommonOptions& opt, const std::string& axisA, const std::string& axisB,
             const std::string& rho0Spec) {
    LevelSystem sys = resolve_system(opt);
    Eigen::MatrixXcd rho0 = parse_rho0(rho0Spec, sys);
    ScanAxis a = parse_axis(axisA), b = parse_axis(axisB);
    ScanResult res = parameter_scan(sys, a, b, rho0,
                                    [&](const Eigen::MatrixXcd& rho, const LevelSystem& s) {
                                        return excited_population(rho, s.numGround());
                                    });
    std::ostringstream os;
    os << res.axisA.pathText << "\\" << res.axisB.pathText;
    for (double vb : res.axisB.grid) os << "," << num(vb);
    os << "\n";
    for (int ia = 0; ia < res.values.rows(); ++ia) {
        os << num(res.axisA.grid[ia]);
        for (int ib = 0; ib < res.values.cols(); ++ib) os << "," << num(res.values(ia, ib));
        os << "\n";
    }
    emit(opt, os.str());
    nlohmann::json meta = metadata(sys, opt);
    meta["axisA"] = axisA;
    meta["axisB"] = axisB;
    meta["rho0"] = rho0Spec;
    meta["observable"] = res.observable;
    meta["maskedValue"] = "nan (infeasible rotating frame)";
    write_sidecar(opt, meta);
    return kExitOk;
}

int cmd_rb87_table(const CommonOptions& opt) {
    std::vector<presets::Rb87TableRow> rows = presets::rb87_table();
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json jr;
        jr["scheme"] = row.schemeId;
        jr["groups"] = nlohmann::json::array();
        for (const auto& e : row.entries) {
            nlohmann::json je;
            je["states"] = e.states;
            je["dim"] = e.dim;
            je["pure"] = e.pure;
            je["cycles"] = e.cycles;
            je["conditioned"] = e.conditioned;
            if (e.conditioned) {
                je["satisfiable"] = e.satisfiable;
                je["residual"] = e.residual;
            }
            jr["groups"].push_back(je);
        }
        jr["sinks"] = row.sinkLevels;
        doc.push_back(jr);
    }
    if (opt.format == "json") {
        emit(opt, doc.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream os;
    os << "scheme  states                                  dim  pure  cycles  notes\n";
    for (const auto& row : rows) {
        bool first = true;
        for (const auto& e : row.entries) {
            std::string states;
            for (size_t i = 0; i < e.states.size(); ++i) states += (i ? " " : "") + e.states[i];
            std::string notes;
            if (e.conditioned)
                notes = e.satisfiable
                            ? "Rabi-conditioned"
                            : "Rabi-conditioned; condition unsatisfiable under polarization "
                              "equality";
            char buf[200];
            std::snprintf(buf, sizeof(buf), "%-7s %-39s %-4d %-5s %-7d %s\n",
                          first ? std::to_string(row.schemeId).c_str() : "",
                          states.c_str(), e.dim, e.pure ? "yes" : "no", e.cycles, notes.c_str());
            os << buf;
            first = false;
        }
        if (!row.sinkLevels.empty()) {
            std::string sinks;
            for (size_t i = 0; i < row.sinkLevels.size(); ++i)
                sinks += (i ? " " : "") + row.sinkLevels[i];
            char buf[200];
            std::snprintf(buf, sizeof(buf), "%-7s sinks: %s\n",
                          first ? std::to_string(row.schemeId).c_str() : "", sinks.c_str());
            os << buf;
        }
    }
    emit(opt, os.str());
    return kExitOk;
}

int cmd_dump(const CommonOptions& opt) {
    LevelSystem sys = resolve_system(opt);
    emit(opt, save_system(sys));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dark-state classification toolkit for driven dissipative N-level systems"};
    app.require_subcommand(1);

    CommonOptions optRwa, optClassify, optEvolve, optScan, optTable, optDump;
    double tEnd = 1000.0;
    int steps = 200;
    std::string rho0Evolve = "e1", rho0Scan = "e1";
    bool eigenbasis = false;
    std::string axisA, axisB;

    auto* rwa = app.add_subcommand("rwa", "rotating-frame feasibility and cycle report");
    add_common(rwa, optRwa, "table");

    auto* classify = app.add_subcommand("classify", "dark-state classification");
    add_common(classify, optClassify, "table");

    auto* evolve = app.add_subcommand("evolve", "propagate and emit a trajectory CSV");
    add_common(evolve, optEvolve, "csv");
    evolve->add_option("--t-end", tEnd, "final time (reference-Rabi units)");
    evolve->add_option("--steps", steps, "number of output steps");
    evolve->add_option("--rho0", rho0Evolve, "initial state: e1, g2, mixed-ground, or a file");
    evolve->add_flag("--eigenbasis", eigenbasis, "add populations in the Hamiltonian eigenbasis");

    auto* scan = app.add_subcommand("scan", "2-D parameter scan of the asymptotic excited population");
    add_common(scan, optScan, "csv");
    scan->add_option("--axis-a", axisA, "axis spec PATH:MIN:MAX:N")->required();
    scan->add_option("--axis-b", axisB, "axis spec PATH:MIN:MAX:N")->required();
    scan->add_option("--rho0", rho0Scan, "initial state spec");

    auto* table = app.add_subcommand("rb87-table", "classification table of the ten Rb-87 schemes");
    add_common(table, optTable, "table");

    auto* dump = app.add_subcommand("dump", "write the system-spec JSON for a preset or file");
    add_common(dump, optDump, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (rwa->parsed()) return cmd_rwa(optRwa);
        if (classify->parsed()) return cmd_classify(optClassify);
        if (evolve->parsed()) return cmd_evolve(optEvolve, tEnd, steps, rho0Evolve, eigenbasis);
        if (scan->parsed()) return cmd_scan(optScan, axisA, axisB, rho0Scan);
        if (table->parsed()) return cmd_rb87_table(optTable);
        if (dump->parsed()) return cmd_dump(optDump);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
