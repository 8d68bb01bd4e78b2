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

#ifndef DARKSTATE_CLASSIFY_HPP
#define DARKSTATE_CLASSIFY_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "darkstate/liouville.hpp"
#include "darkstate/model.hpp"
#include "darkstate/rwa.hpp"

namespace darkstate {

inline constexpr double kDefaultGroupTolerance = 1e-8;
inline constexpr double kDefaultRankToleranceFactor = 1e-12;

enum class CaseLabel {
    AlwaysDark,      // case 1: N_e <= d_s - 1, kernel guaranteed non-empty
    RabiConditioned  // case 2: N_e >= d_s, kernel requires Rabi constraints
};

/// A set of ground levels sharing one ground-block diagonal energy, together
/// with the dark vectors it supports.
struct DegenerateGroup {
    double energy = 0.0;
    std::vector<int> memberIndices;  // ground-level indices, ascending
    int dimension = 0;               // d_s
    Eigen::MatrixXcd kernelBasis;    // N_g x N_s, orthonormal columns (full Hilbert padding is 0
                                     // outside ground rows implicitly; stored over ground manifold)
    int kernelDim = 0;               // N_s
    CaseLabel caseLabel = CaseLabel::AlwaysDark;
    int effectiveExcited = 0;        // excited levels actually coupled to the group
    // Case-2 existence residual: determinant of the reduced square coupling
    // block when it is square, otherwise the smallest singular value.
    std::optional<Complex> rabiResidual;
    bool residualIsDeterminant = false;
};

struct DarkClassification {
    std::vector<DegenerateGroup> groups;
    int totalDarkDim = 0;          // M = sum N_s
    int liouvillianKernelDim = 0;  // sum N_s^2
    bool unique = false;
    bool pureGuaranteed = false;
    double groupTolerance = kDefaultGroupTolerance;
    double rankToleranceFactor = kDefaultRankToleranceFactor;
};

/// Partition ground levels by diagonal energy with sorted-gap clustering:
/// split wherever adjacent sorted values differ by more than tol.
/// Singleton groups are retained. Kernels are left unfilled.
inline std::vector<DegenerateGroup> degenerate_groups(const RwaHamiltonian& H,
                                                      double tol = kDefaultGroupTolerance) {
    const int Ng = static_cast<int>(H.groundDiagonal.size());
    std::vector<int> order(Ng);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return H.groundDiagonal(a) < H.groundDiagonal(b); });

    std::vector<DegenerateGroup> groups;
    for (int k = 0; k < Ng; ++k) {
        if (k == 0 || H.groundDiagonal(order[k]) - H.groundDiagonal(order[k - 1]) > tol)
            groups.emplace_back();
        groups.back().memberIndices.push_back(order[k]);
    }
    for (auto& g : groups) {
        std::sort(g.memberIndices.begin(), g.memberIndices.end());
        g.dimension = static_cast<int>(g.memberIndices.size());
        double sum = 0.0;
        for (int i : g.memberIndices) sum += H.groundDiagonal(i);
        g.energy = sum / g.dimension;
    }
    return groups;
}

namespace detail {

/// N_e x d_s block of conjugated Rabi couplings restricted to group members.
inline Eigen::MatrixXcd qhp_block(const Eigen::MatrixXcd& V, const std::vector<int>& members) {
    Eigen::MatrixXcd Q(V.cols(), static_cast<Eigen::Index>(members.size()));
    for (Eigen::Index c = 0; c < Q.cols(); ++c)
        Q.col(c) = V.row(members[static_cast<size_t>(c)]).conjugate().transpose();
    return Q;
}

/// Rows of Q that are not identically zero.
inline Eigen::MatrixXcd drop_zero_rows(const Eigen::MatrixXcd& Q) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < Q.rows(); ++r)
        if (Q.row(r).norm() > 0.0) keep.push_back(r);
    Eigen::MatrixXcd R(static_cast<Eigen::Index>(keep.size()), Q.cols());
    for (Eigen::Index r = 0; r < R.rows(); ++r) R.row(r) = Q.row(keep[static_cast<size_t>(r)]);
    return R;
}

inline void fill_group_kernel(DegenerateGroup& g, const Eigen::MatrixXcd& V, int numGround,
                              double rankTolFactor) {
    Eigen::MatrixXcd Q = qhp_block(V, g.memberIndices);
    Eigen::MatrixXcd R = drop_zero_rows(Q);
    g.effectiveExcited = static_cast<int>(R.rows());
    g.caseLabel = (g.effectiveExcited <= g.dimension - 1) ? CaseLabel::AlwaysDark
                                                          : CaseLabel::RabiConditioned;

    Eigen::MatrixXcd kernelLocal;  // d_s x N_s over group members
    if (R.rows() == 0) {
        kernelLocal = Eigen::MatrixXcd::Identity(g.dimension, g.dimension);
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
        double smax = svd.singularValues()(0);
        double thresh = std::max(R.rows(), R.cols()) * smax * rankTolFactor;
        int rank = 0;
        for (int k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) > thresh) ++rank;
        kernelLocal = svd.matrixV().rightCols(g.dimension - rank);
    }
    g.kernelDim = static_cast<int>(kernelLocal.cols());
    g.kernelBasis = Eigen::MatrixXcd::Zero(numGround, g.kernelDim);
    for (int c = 0; c < g.kernelDim; ++c)
        for (int m = 0; m < g.dimension; ++m)
            g.kernelBasis(g.memberIndices[m], c) = kernelLocal(m, c);

    if (g.caseLabel == CaseLabel::RabiConditioned) {
        if (R.rows() == R.cols()) {
            g.rabiResidual = R.determinant();
            g.residualIsDeterminant = true;
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R);
            g.rabiResidual = Complex(svd.singularValues().tail(1)(0), 0.0);
            g.residualIsDeterminant = false;
        }
    }
}

}  // namespace detail

/// Full dark-state classification: degenerate groups, per-group kernels of the
/// excited-from-ground coupling block, dimensions and verdicts.
inline DarkClassification dark_subspaces(const LevelSystem& sys, const RwaHamiltonian& H,
                                         double groupTol = kDefaultGroupTolerance,
                                         double rankTolFactor = kDefaultRankToleranceFactor) {
    DarkClassification out;
    out.groupTolerance = groupTol;
    out.rankToleranceFactor = rankTolFactor;
    out.groups = degenerate_groups(H, groupTol);
    Eigen::MatrixXcd V = coupling_matrix(sys);
    for (auto& g : out.groups) detail::fill_group_kernel(g, V, sys.numGround(), rankTolFactor);
    for (const auto& g : out.groups) {
        out.totalDarkDim += g.kernelDim;
        out.liouvillianKernelDim += g.kernelDim * g.kernelDim;
    }
    out.unique = (out.liouvillianKernelDim == 1);
    out.pureGuaranteed = out.unique;  // unicity implies purity
    return out;
}

/// Case-2 existence residual for one group; zero means a dark state exists.
/// Rejects case-1 groups, where the condition is vacuous.
inline Complex rabi_condition_residual(const LevelSystem& sys, const RwaHamiltonian& H,
                                       const DegenerateGroup& group) {
    (void)H;
    Eigen::MatrixXcd R = detail::drop_zero_rows(detail::qhp_block(coupling_matrix(sys),
                                                                  group.memberIndices));
    if (static_cast<int>(R.rows()) <= group.dimension - 1)
        throw std::invalid_argument(
            "rabi_condition_residual: group is case 1; a dark state exists for any Rabi "
            "frequencies");
    if (R.rows() == R.cols()) return R.determinant();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R);
    return Complex(svd.singularValues().tail(1)(0), 0.0);
}

struct DarkVerdict {
    double excitedNorm = 0.0;       // Frobenius norm of the Q-part of rho
    double nonHermitianNorm = 0.0;  // ||L_nh vec(rho)||
    double lindbladNorm = 0.0;      // ||L vec(rho)||
    double blockDefect = 0.0;       // distance from block-diagonal form across groups
    bool dark = false;
};

/// Check a candidate density matrix against the dark-state conditions.
inline DarkVerdict verify_dark(const Eigen::MatrixXcd& rho, const Superoperator& L,
                               const Superoperator& Lnh, const DarkClassification& cls,
                               int numGround, double tol = 1e-8) {
    const int N = static_cast<int>(rho.rows());
    if (rho.cols() != N) throw std::invalid_argument("verify_dark: rho must be square");
    if ((rho - rho.adjoint()).norm() > 1e-8)
        throw std::invalid_argument("verify_dark: rho is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-8)
        throw std::invalid_argument("verify_dark: rho does not have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("verify_dark: rho is not positive semidefinite");

    DarkVerdict v;
    Eigen::MatrixXcd q = rho;
    q.topLeftCorner(numGround, numGround).setZero();
    v.excitedNorm = q.norm();
    Eigen::VectorXcd vec = vectorize(rho);
    v.nonHermitianNorm = (Lnh.matrix * vec).norm();
    v.lindbladNorm = (L.matrix * vec).norm();

    Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(N, N);
    for (const auto& g : cls.groups)
        for (int a : g.memberIndices)
            for (int b : g.memberIndices) blocks(a, b) = rho(a, b);
    Eigen::MatrixXcd defect = rho;
    defect.topLeftCorner(numGround, numGround) -= blocks.topLeftCorner(numGround, numGround);
    v.blockDefect = defect.topLeftCorner(numGround, numGround).norm();

    v.dark = v.excitedNorm <= tol && v.nonHermitianNorm <= tol && v.lindbladNorm <= tol &&
             v.blockDefect <= tol;
    return v;
}

// ---------------------------------------------------------------------------
// Per-component classification (decoupled ground-excited subsystems)

/// Classification of one connected component of the coupling graph, the way
/// disconnected subsystems are tabulated for the Rb-87 schemes. Sink levels
/// (untouched by any laser) are reported separately.
struct ComponentClassification {
    std::vector<int> groundMembers;   // ground-level indices in the component
    std::vector<int> excitedMembers;  // excited-level indices
    int cycles = 0;
    std::vector<DegenerateGroup> groups;  // kernels over the component's grounds
};

struct ComponentReport {
    std::vector<ComponentClassification> components;  // ordered by smallest ground member
    std::vector<int> sinkLevels;                      // uncoupled ground levels
};

inline ComponentReport classify_components(const LevelSystem& sys, const RwaHamiltonian& H,
                                           double groupTol = kDefaultGroupTolerance,
                                           double rankTolFactor = kDefaultRankToleranceFactor) {
    const int N = sys.dim();
    std::vector<int> comp(N, -1);
    // union-find over coupling edges
    std::vector<int> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<bool> touched(N, false);
    for (const auto& c : sys.couplings) {
        if (c.magnitude == 0.0) continue;  // magnitude 0 is no coupling for classification
        int a = c.ground, b = sys.excitedIndex(c.excited);
        touched[a] = touched[b] = true;
        parent[find(a)] = find(b);
    }

    ComponentReport rep;
    std::vector<int> rootToComp(N, -1);
    for (int i = 0; i < sys.numGround(); ++i) {
        if (!touched[i]) {
            rep.sinkLevels.push_back(i);
            continue;
        }
        int r = find(i);
        if (rootToComp[r] < 0) {
            rootToComp[r] = static_cast<int>(rep.components.size());
            rep.components.emplace_back();
        }
        rep.components[rootToComp[r]].groundMembers.push_back(i);
    }
    for (int j = 0; j < sys.numExcited(); ++j) {
        int k = sys.excitedIndex(j);
        if (!touched[k]) continue;
        int r = find(k);
        if (rootToComp[r] < 0) continue;  // excited with no coupled ground cannot happen
        rep.components[rootToComp[r]].excitedMembers.push_back(j);
    }

    Eigen::MatrixXcd V = coupling_matrix(sys);
    for (auto& c : rep.components) {
        int edges = 0;
        for (const auto& cp : sys.couplings)
            if (cp.magnitude != 0.0 &&
                std::find(c.groundMembers.begin(), c.groundMembers.end(), cp.ground) !=
                    c.groundMembers.end())
                ++edges;
        c.cycles = edges - static_cast<int>(c.groundMembers.size() + c.excitedMembers.size()) + 1;

        // group the component's grounds by diagonal, then fill kernels against
        // the component's excited rows only
        std::vector<int> order = c.groundMembers;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return H.groundDiagonal(a) < H.groundDiagonal(b); });
        for (size_t k = 0; k < order.size(); ++k) {
            if (k == 0 ||
                H.groundDiagonal(order[k]) - H.groundDiagonal(order[k - 1]) > groupTol)
                c.groups.emplace_back();
            c.groups.back().memberIndices.push_back(order[k]);
        }
        Eigen::MatrixXcd Vc(sys.numGround(), static_cast<Eigen::Index>(c.excitedMembers.size()));
        for (size_t j = 0; j < c.excitedMembers.size(); ++j)
            Vc.col(static_cast<Eigen::Index>(j)) = V.col(c.excitedMembers[j]);
        for (auto& g : c.groups) {
            std::sort(g.memberIndices.begin(), g.memberIndices.end());
            g.dimension = static_cast<int>(g.memberIndices.size());
            double sum = 0.0;
            for (int i : g.memberIndices) sum += H.groundDiagonal(i);
            g.energy = sum / g.dimension;
            detail::fill_group_kernel(g, Vc, sys.numGround(), rankTolFactor);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string case_label_name(CaseLabel c) {
    return c == CaseLabel::AlwaysDark ? "case1" : "case2";
}

inline nlohmann::json group_to_json(const DegenerateGroup& g, const LevelSystem& sys) {
    nlohmann::json jg;
    jg["energy"] = g.energy;
    jg["members"] = nlohmann::json::array();
    for (int i : g.memberIndices) jg["members"].push_back(sys.ground[i].label);
    jg["dimension"] = g.dimension;
    jg["kernelDim"] = g.kernelDim;
    jg["case"] = case_label_name(g.caseLabel);
    if (g.rabiResidual) {
        jg["rabiResidual"] = {{"re", g.rabiResidual->real()}, {"im", g.rabiResidual->imag()}};
        jg["residualKind"] = g.residualIsDeterminant ? "determinant" : "smallestSingularValue";
    }
    return jg;
}

inline nlohmann::json classification_to_json(const DarkClassification& cls,
                                             const LevelSystem& sys) {
    nlohmann::json doc;
    doc["groups"] = nlohmann::json::array();
    for (const auto& g : cls.groups) doc["groups"].push_back(group_to_json(g, sys));
    doc["totalDarkDim"] = cls.totalDarkDim;
    doc["liouvillianKernelDim"] = cls.liouvillianKernelDim;
    doc["unique"] = cls.unique;
    doc["pureGuaranteed"] = cls.pureGuaranteed;
    doc["groupTolerance"] = cls.groupTolerance;
    doc["rankToleranceFactor"] = cls.rankToleranceFactor;
    return doc;
}

inline std::string classification_table(const DarkClassification& cls, const LevelSystem& sys) {
    std::ostringstream os;
    os << "group  energy      members                  d_s  N_s  case   residual\n";
    int n = 0;
    for (const auto& g : cls.groups) {
        std::string members;
        for (size_t i = 0; i < g.memberIndices.size(); ++i)
            members += (i ? "," : "") + sys.ground[g.memberIndices[i]].label;
        if (members.size() > 23) members = members.substr(0, 20) + "...";
        char buf[160];
        std::string res = "-";
        if (g.rabiResidual) {
            char rbuf[48];
            std::snprintf(rbuf, sizeof(rbuf), "%.6g%+.6gi", g.rabiResidual->real(),
                          g.rabiResidual->imag());
            res = std::string(rbuf) + (g.residualIsDeterminant ? " (det)" : " (sv)");
        }
        std::snprintf(buf, sizeof(buf), "%-6d %-11.4g %-24s %-4d %-4d %-6s %s\n", ++n, g.energy,
                      members.c_str(), g.dimension, g.kernelDim,
                      case_label_name(g.caseLabel).c_str(), res.c_str());
        os << buf;
    }
    os << "total dark dim M = " << cls.totalDarkDim
       << ", dim ker(L) = " << cls.liouvillianKernelDim
       << ", unique = " << (cls.unique ? "yes" : "no")
       << ", pure guaranteed = " << (cls.pureGuaranteed ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace darkstate

#endif  // DARKSTATE_CLASSIFY_HPP
