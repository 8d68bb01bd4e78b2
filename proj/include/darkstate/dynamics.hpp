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

#ifndef DARKSTATE_DYNAMICS_HPP
#define DARKSTATE_DYNAMICS_HPP

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "darkstate/classify.hpp"
#include "darkstate/liouville.hpp"
#include "darkstate/model.hpp"
#include "darkstate/rwa.hpp"

namespace darkstate {

inline double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

inline double excited_population(const Eigen::MatrixXcd& rho, int numGround) {
    const int Ne = static_cast<int>(rho.rows()) - numGround;
    return rho.bottomRightCorner(Ne, Ne).trace().real();
}

inline void check_density_matrix(const Eigen::MatrixXcd& rho, double tol = 1e-8) {
    if (rho.rows() != rho.cols())
        throw std::invalid_argument("density matrix must be square");
    if ((rho - rho.adjoint()).norm() > tol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol)
        throw std::invalid_argument("density matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

struct TrajectoryResult {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    std::vector<Eigen::VectorXd> populations;  // per-level, basis order
    std::vector<double> purity;
    std::vector<double> excitedPopulation;
};

/// Propagate rho(t) = exp(L t) rho0 on the given time grid.
/// Step increments are exponentiated densely (scaling-and-squaring).
inline TrajectoryResult propagate(const Superoperator& L, const Eigen::MatrixXcd& rho0,
                                  const std::vector<double>& times, int numGround) {
    check_density_matrix(rho0);
    if (times.empty() || times[0] != 0.0)
        throw std::invalid_argument("propagate: time grid must start at 0");
    for (size_t k = 1; k < times.size(); ++k)
        if (times[k] <= times[k - 1])
            throw std::invalid_argument("propagate: time grid must be strictly ascending");
    const int N = L.dim;
    if (rho0.rows() != N) throw std::invalid_argument("propagate: rho0 dimension mismatch");

    TrajectoryResult out;
    out.times = times;
    Eigen::VectorXcd v = vectorize(rho0);
    Eigen::MatrixXcd step;
    double lastDt = -1.0;
    for (size_t k = 0; k < times.size(); ++k) {
        if (k > 0) {
            double dt = times[k] - times[k - 1];
            if (dt != lastDt) {
                step = (L.matrix * dt).exp();
                lastDt = dt;
            }
            v = step * v;
        }
        Eigen::MatrixXcd rho = unvectorize(v, N);
        rho = 0.5 * (rho + rho.adjoint().eval());
        out.states.push_back(rho);
        out.populations.push_back(rho.diagonal().real());
        out.purity.push_back(darkstate::purity(rho));
        out.excitedPopulation.push_back(excited_population(rho, numGround));
    }
    return out;
}

namespace detail {

inline double null_threshold(const Eigen::VectorXd& sv, Eigen::Index n) {
    // rank-revealing threshold on the singular values of the Liouvillian;
    // physical decay rates sit many orders above it
    return sv.size() ? std::max(1.0, sv(0)) * static_cast<double>(n) * 1e-12 : 0.0;
}

}  // namespace detail

/// Orthonormal basis of the right null space of L (columns, vectorized operators).
inline std::vector<Eigen::VectorXcd> steady_state_basis(const Superoperator& L) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L.matrix, Eigen::ComputeThinV);
    double thresh = detail::null_threshold(svd.singularValues(), L.matrix.rows());
    std::vector<Eigen::VectorXcd> basis;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) <= thresh) basis.push_back(svd.matrixV().col(k));
    return basis;
}

/// Biorthogonal left/right kernel pairs of L. The left vectors, reshaped, are
/// the conserved quantities; their overlaps with rho0 fix the asymptotic state.
struct ConservedQuantitySet {
    std::vector<Eigen::MatrixXcd> leftBasis;   // J_k, Tr(J_k^dag rho_l) = delta_kl
    std::vector<Eigen::MatrixXcd> rightBasis;  // rho_k (not individually normalized states)
    double pairingCondition = 1.0;             // condition number of the raw pairing matrix
    int dim = 0;                               // Hilbert-space dimension
};

inline ConservedQuantitySet conserved_quantities(const Superoperator& L) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(L.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double thresh = detail::null_threshold(svd.singularValues(), L.matrix.rows());
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) <= thresh) idx.push_back(k);
    const Eigen::Index K = static_cast<Eigen::Index>(idx.size());
    const int N = L.dim;

    Eigen::MatrixXcd R(L.matrix.rows(), K), J(L.matrix.rows(), K);
    for (Eigen::Index k = 0; k < K; ++k) {
        R.col(k) = svd.matrixV().col(idx[k]);
        J.col(k) = svd.matrixU().col(idx[k]);
    }
    // left null space of L = null space of L^dag; U columns for zero singular
    // values satisfy u^dag L = 0 since L v = sigma u pairs them
    Eigen::MatrixXcd G = J.adjoint() * R;  // pairing matrix
    Eigen::JacobiSVD<Eigen::MatrixXcd> gsvd(G);
    double cond = K > 0 ? gsvd.singularValues()(0) / gsvd.singularValues().tail(1)(0) : 1.0;
    if (K > 0 && (!std::isfinite(cond) || gsvd.singularValues().tail(1)(0) <= 0.0))
        throw std::runtime_error(
            "conserved_quantities: defective zero eigenvalue, left/right kernels do not pair");
    Eigen::MatrixXcd Jb = J * G.inverse().adjoint();

    ConservedQuantitySet set;
    set.dim = N;
    set.pairingCondition = cond;
    for (Eigen::Index k = 0; k < K; ++k) {
        set.leftBasis.push_back(unvectorize(Jb.col(k), N));
        set.rightBasis.push_back(unvectorize(R.col(k), N));
    }
    return set;
}

/// Spectral projection of rho0 onto the kernel of L:
/// rho_inf = sum_k Tr(J_k^dag rho0) rho_k.
inline Eigen::MatrixXcd asymptotic_state(const ConservedQuantitySet& set,
                                         const Eigen::MatrixXcd& rho0) {
    check_density_matrix(rho0);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(set.dim, set.dim);
    for (size_t k = 0; k < set.leftBasis.size(); ++k) {
        Complex c = (set.leftBasis[k].adjoint() * rho0).trace();
        rho += c * set.rightBasis[k];
    }
    return 0.5 * (rho + rho.adjoint().eval());
}

// ---------------------------------------------------------------------------
// Parameter scans

/// A scannable parameter of a level system, addressed by path syntax:
///   rabi(g,e)     signed Rabi magnitude (negative flips the phase by pi)
///   phase(g,e)    laser phase in radians
///   detuning(g,e) detuning of the (g,e) laser (adjusts its frequency)
///   energy(gK) / energy(eK)  bare level energy of ground/excited level K
/// Indices are 1-based as in the system-spec file format.
struct ParameterPath {
    enum class Kind { Rabi, Phase, Detuning, Energy } kind = Kind::Rabi;
    bool groundLevel = true;  // for Energy
    int g = 0, e = 0;         // 0-based
};

inline ParameterPath parse_parameter_path(const std::string& text) {
    auto open = text.find('('), close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("parameter path '" + text + "': expected name(args)");
    std::string name = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    ParameterPath p;
    if (name == "rabi" || name == "phase" || name == "detuning") {
        p.kind = name == "rabi" ? ParameterPath::Kind::Rabi
               : name == "phase" ? ParameterPath::Kind::Phase
                                 : ParameterPath::Kind::Detuning;
        auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("parameter path '" + text + "': expected (g,e)");
        p.g = std::stoi(args.substr(0, comma)) - 1;
        p.e = std::stoi(args.substr(comma + 1)) - 1;
    } else if (name == "energy") {
        p.kind = ParameterPath::Kind::Energy;
        if (args.size() < 2 || (args[0] != 'g' && args[0] != 'e'))
            throw std::invalid_argument("parameter path '" + text + "': expected energy(gK|eK)");
        p.groundLevel = args[0] == 'g';
        (p.groundLevel ? p.g : p.e) = std::stoi(args.substr(1)) - 1;
    } else {
        throw std::invalid_argument("parameter path '" + text + "': unknown parameter '" + name +
                                    "'");
    }
    return p;
}

inline void apply_parameter(LevelSystem& sys, const ParameterPath& p, double value) {
    auto coupling = [&]() -> LaserCoupling& {
        for (auto& c : sys.couplings)
            if (c.ground == p.g && c.excited == p.e) return c;
        throw std::invalid_argument("parameter path addresses a coupling that does not exist");
    };
    switch (p.kind) {
        case ParameterPath::Kind::Rabi: {
            auto& c = coupling();
            c.magnitude = std::abs(value);
            if (value < 0.0) c.phase = normalize_phase(c.phase + std::numbers::pi);
            break;
        }
        case ParameterPath::Kind::Phase:
            coupling().phase = normalize_phase(value);
            break;
        case ParameterPath::Kind::Detuning: {
            auto& c = coupling();
            c.frequency = sys.excited[p.e].energy - sys.ground[p.g].energy - value;
            break;
        }
        case ParameterPath::Kind::Energy:
            (p.groundLevel ? sys.ground[p.g] : sys.excited[p.e]).energy = value;
            break;
    }
}

struct ScanAxis {
    ParameterPath path;
    std::string pathText;
    std::vector<double> grid;
};

inline ScanAxis make_axis(const std::string& pathText, double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("scan axis needs at least one point");
    ScanAxis ax;
    ax.path = parse_parameter_path(pathText);
    ax.pathText = pathText;
    for (int k = 0; k < n; ++k)
        ax.grid.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
    return ax;
}

struct ScanResult {
    ScanAxis axisA, axisB;            // A indexes rows, B indexes columns
    Eigen::MatrixXd values;           // observable; NaN where the frame is infeasible
    std::string observable;
};

inline int scan_thread_count() {
    if (const char* env = std::getenv("DARKSTATE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Asymptotic value of an observable over a 2-D parameter grid. Each grid
/// point rebuilds the frame, Hamiltonian and Liouvillian from scratch;
/// infeasible frames become NaN cells.
inline ScanResult parameter_scan(
    const LevelSystem& systemTemplate, const ScanAxis& axisA, const ScanAxis& axisB,
    const Eigen::MatrixXcd& rho0,
    const std::function<double(const Eigen::MatrixXcd&, const LevelSystem&)>& observable,
    const std::string& observableName = "excitedPopulation") {
    check_density_matrix(rho0);
    ScanResult res;
    res.axisA = axisA;
    res.axisB = axisB;
    res.observable = observableName;
    const int nA = static_cast<int>(axisA.grid.size());
    const int nB = static_cast<int>(axisB.grid.size());
    res.values.resize(nA, nB);

    auto evalCell = [&](int ia, int ib) {
        LevelSystem sys = systemTemplate;
        apply_parameter(sys, axisA.path, axisA.grid[ia]);
        apply_parameter(sys, axisB.path, axisB.grid[ib]);
        RotatingFrame frame = solve_frame(sys);
        if (!frame.feasible) return std::nan("");
        RwaHamiltonian H = build_hamiltonian(sys, frame);
        Superoperator L = build_lindblad(sys, H);
        Eigen::MatrixXcd rinf = asymptotic_state(conserved_quantities(L), rho0);
        return observable(rinf, sys);
    };

    const int threads = std::min(scan_thread_count(), nA * nB);
    if (threads <= 1) {
        for (int ia = 0; ia < nA; ++ia)
            for (int ib = 0; ib < nB; ++ib) res.values(ia, ib) = evalCell(ia, ib);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t]() {
                for (int cell = t; cell < nA * nB; cell += threads)
                    res.values(cell / nB, cell % nB) = evalCell(cell / nB, cell % nB);
            });
        for (auto& th : pool) th.join();
    }
    return res;
}

}  // namespace darkstate

#endif  // DARKSTATE_DYNAMICS_HPP
