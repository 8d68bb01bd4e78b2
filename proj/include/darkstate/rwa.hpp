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

#ifndef DARKSTATE_RWA_HPP
#define DARKSTATE_RWA_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "darkstate/model.hpp"

namespace darkstate {

/// One oriented constraint pot[a] - pot[b] = target.
struct DifferenceEdge {
    int a = 0;
    int b = 0;
    double target = 0.0;
};

struct CycleConstraint {
    std::vector<int> edges;  // edge indices; the closing non-tree edge comes first
    double residual = 0.0;
};

/// Solution of a difference-constraint system over the nodes of a graph.
/// Potentials are fixed over a spanning forest (each component root at 0);
/// every non-tree edge contributes one independent cycle whose residual
/// measures the inconsistency of the constraint set.
struct PotentialSolution {
    std::vector<double> potentials;
    std::vector<CycleConstraint> cycles;
    int independentCycleCount = 0;
    bool feasible = true;
    double tolerance = 0.0;
};

/// Solve pot[a] - pot[b] = target over all edges.
/// Nodes untouched by any edge keep potential 0.
inline PotentialSolution solve_potentials(int nodeCount, const std::vector<DifferenceEdge>& edges,
                                          double tolerance) {
    PotentialSolution sol;
    sol.potentials.assign(nodeCount, 0.0);
    sol.tolerance = tolerance;

    std::vector<std::vector<std::pair<int, int>>> adj(nodeCount);  // (edge index, neighbor)
    for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
        adj[edges[k].a].push_back({k, edges[k].b});
        adj[edges[k].b].push_back({k, edges[k].a});
    }

    std::vector<int> state(nodeCount, 0);        // 0 unseen, 1 done
    std::vector<int> parentEdge(nodeCount, -1);  // tree edge to parent
    std::vector<int> parent(nodeCount, -1);
    std::vector<int> depth(nodeCount, 0);
    std::vector<bool> inTree(edges.size(), false);

    for (int root = 0; root < nodeCount; ++root) {
        if (state[root] != 0 || adj[root].empty()) continue;
        state[root] = 1;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto [k, v] : adj[u]) {
                if (state[v] != 0) continue;
                const auto& e = edges[k];
                // pot[a] - pot[b] = target
                sol.potentials[v] = (e.a == v) ? sol.potentials[u] + e.target
                                               : sol.potentials[u] - e.target;
                state[v] = 1;
                parent[v] = u;
                parentEdge[v] = k;
                depth[v] = depth[u] + 1;
                inTree[k] = true;
                stack.push_back(v);
            }
        }
    }

    for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
        if (inTree[k]) continue;
        const auto& e = edges[k];
        CycleConstraint cyc;
        cyc.edges.push_back(k);
        // walk both endpoints up to their lowest common ancestor
        int x = e.a, y = e.b;
        std::vector<int> fromA, fromB;
        while (x != y) {
            if (depth[x] >= depth[y]) {
                fromA.push_back(parentEdge[x]);
                x = parent[x];
            } else {
                fromB.push_back(parentEdge[y]);
                y = parent[y];
            }
        }
        cyc.edges.insert(cyc.edges.end(), fromA.begin(), fromA.end());
        cyc.edges.insert(cyc.edges.end(), fromB.rbegin(), fromB.rend());
        cyc.residual = sol.potentials[e.a] - sol.potentials[e.b] - e.target;
        sol.cycles.push_back(std::move(cyc));
    }
    sol.independentCycleCount = static_cast<int>(sol.cycles.size());
    sol.feasible = std::all_of(sol.cycles.begin(), sol.cycles.end(), [&](const CycleConstraint& c) {
        return std::abs(c.residual) <= tolerance;
    });
    return sol;
}

/// Rotating-frame assignment for a level system. epsilons are indexed by the
/// combined basis order (ground, then excited); cycle edge indices refer to
/// positions in LevelSystem::couplings.
struct RotatingFrame {
    std::vector<double> epsilons;
    bool feasible = true;
    std::vector<CycleConstraint> cycleConstraints;
    int independentCycleCount = 0;
    double tolerance = 0.0;
};

inline double default_frame_tolerance(const LevelSystem& sys) {
    double wmax = 0.0;
    for (const auto& c : sys.couplings) wmax = std::max(wmax, std::abs(c.frequency));
    return 1e-9 * std::max(1.0, wmax);
}

/// Decide whether a time-independent rotating frame exists.
/// Convention: eps[excited] - eps[ground] = omega on every coupled edge, so
/// that the frame diagonal reproduces the detunings E_e - E_g - omega.
/// Infeasibility is reported as data, never thrown.
inline RotatingFrame solve_frame(const LevelSystem& sys, double tolerance = -1.0) {
    if (tolerance < 0.0) tolerance = default_frame_tolerance(sys);
    std::vector<DifferenceEdge> edges;
    edges.reserve(sys.couplings.size());
    for (const auto& c : sys.couplings)
        edges.push_back({sys.excitedIndex(c.excited), c.ground, c.frequency});
    PotentialSolution sol = solve_potentials(sys.dim(), edges, tolerance);
    RotatingFrame frame;
    frame.epsilons = std::move(sol.potentials);
    frame.feasible = sol.feasible;
    frame.cycleConstraints = std::move(sol.cycles);
    frame.independentCycleCount = sol.independentCycleCount;
    frame.tolerance = tolerance;
    return frame;
}

/// Independent loops of the coupling graph: edges - touched vertices + components.
inline int count_cycles(const LevelSystem& sys) {
    RotatingFrame frame = solve_frame(sys);
    return frame.independentCycleCount;
}

/// Time-independent RWA Hamiltonian in the combined basis.
struct RwaHamiltonian {
    Eigen::MatrixXcd matrix;          // N x N, Hermitian
    std::vector<double> detunings;    // per coupling, aligned with LevelSystem::couplings
    Eigen::VectorXd groundDiagonal;   // diagonal over the ground block
    int numGround = 0;
};

/// Build H with diagonal E_k - eps_k (shifted so the first ground entry is 0)
/// and the complex Rabi couplings on the ground-excited block.
inline RwaHamiltonian build_hamiltonian(const LevelSystem& sys, const RotatingFrame& frame) {
    if (!frame.feasible)
        throw std::invalid_argument("build_hamiltonian: rotating frame is infeasible");
    if (static_cast<int>(frame.epsilons.size()) != sys.dim())
        throw std::invalid_argument("build_hamiltonian: frame/system dimension mismatch");

    const int N = sys.dim();
    const int Ng = sys.numGround();
    RwaHamiltonian H;
    H.numGround = Ng;
    H.matrix = Eigen::MatrixXcd::Zero(N, N);

    const double shift = sys.ground[0].energy - frame.epsilons[0];
    for (int i = 0; i < Ng; ++i)
        H.matrix(i, i) = sys.ground[i].energy - frame.epsilons[i] - shift;
    for (int j = 0; j < sys.numExcited(); ++j) {
        int k = sys.excitedIndex(j);
        H.matrix(k, k) = sys.excited[j].energy - frame.epsilons[k] - shift;
    }
    for (const auto& c : sys.couplings) {
        H.matrix(c.ground, sys.excitedIndex(c.excited)) += c.rabi();
        H.matrix(sys.excitedIndex(c.excited), c.ground) += std::conj(c.rabi());
    }
    H.detunings.reserve(sys.couplings.size());
    for (const auto& c : sys.couplings)
        H.detunings.push_back(sys.excited[c.excited].energy - sys.ground[c.ground].energy -
                              c.frequency);
    H.groundDiagonal = H.matrix.diagonal().head(Ng).real();
    return H;
}

}  // namespace darkstate

#endif  // DARKSTATE_RWA_HPP
