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

#ifndef DARKSTATE_LIOUVILLE_HPP
#define DARKSTATE_LIOUVILLE_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "darkstate/model.hpp"
#include "darkstate/rwa.hpp"

namespace darkstate {

// Dense storage only; all systems in scope are small.
inline constexpr int kMaxLevels = 32;

enum class SuperoperatorKind { FullLindblad, NonHermitian, Jump };

/// Column-stacked superoperator acting on vec(rho) (columns concatenated,
/// A rho B^dag -> conj(B) (x) A).
struct Superoperator {
    Eigen::MatrixXcd matrix;  // N^2 x N^2
    SuperoperatorKind kind = SuperoperatorKind::FullLindblad;
    int dim = 0;  // Hilbert-space dimension N
};

/// Diagonal total decay operator: Gamma_j = sum_i gamma_ij on excited levels.
struct GammaOperator {
    Eigen::VectorXd excitedRates;  // length N_e

    Eigen::MatrixXd full(int numGround) const {
        int N = numGround + static_cast<int>(excitedRates.size());
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
        for (int j = 0; j < excitedRates.size(); ++j)
            G(numGround + j, numGround + j) = excitedRates(j);
        return G;
    }
};

inline GammaOperator gamma_operator(const LevelSystem& sys) {
    GammaOperator g;
    g.excitedRates = Eigen::VectorXd::Zero(sys.numExcited());
    for (const auto& d : sys.decays) g.excitedRates(d.excited) += d.rate;
    return g;
}

inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size()));
}

inline Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("unvectorize: size is not a perfect square of the dimension");
    return Eigen::MatrixXcd(Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n));
}

namespace detail {

inline void check_dims(const LevelSystem& sys, const RwaHamiltonian& H) {
    if (H.matrix.rows() != sys.dim() || H.matrix.cols() != sys.dim())
        throw std::invalid_argument("superoperator build: Hamiltonian dimension (" +
                                    std::to_string(H.matrix.rows()) +
                                    ") does not match system dimension (" +
                                    std::to_string(sys.dim()) + ")");
    if (sys.dim() > kMaxLevels)
        throw std::invalid_argument("superoperator build: more than " +
                                    std::to_string(kMaxLevels) + " levels");
}

inline Eigen::MatrixXcd jump_op(const LevelSystem& sys, const DecayChannel& d) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(sys.dim(), sys.dim());
    s(d.ground, sys.excitedIndex(d.excited)) = 1.0;
    return s;
}

}  // namespace detail

/// Non-Hermitian half of the Lindblad generator:
/// L_nh rho = -i (Htilde rho - rho Htilde^dag), Htilde = H - (i/2) Gamma.
/// (The factor 1/2 keeps L = L_nh + J consistent with the dissipator.)
inline Superoperator build_nonhermitian(const LevelSystem& sys, const RwaHamiltonian& H) {
    detail::check_dims(sys, H);
    const int N = sys.dim();
    Eigen::MatrixXcd Ht = H.matrix - Complex(0, 0.5) * gamma_operator(sys).full(sys.numGround());
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
    Superoperator op;
    op.kind = SuperoperatorKind::NonHermitian;
    op.dim = N;
    op.matrix = Complex(0, -1) * (Eigen::kroneckerProduct(I, Ht).eval() -
                                  Eigen::kroneckerProduct(Ht.conjugate(), I).eval());
    return op;
}

/// Jump part: J rho = sum gamma_ij sigma_ij rho sigma_ij^dag.
inline Superoperator build_jump(const LevelSystem& sys) {
    const int N = sys.dim();
    if (N > kMaxLevels)
        throw std::invalid_argument("superoperator build: more than " +
                                    std::to_string(kMaxLevels) + " levels");
    Superoperator op;
    op.kind = SuperoperatorKind::Jump;
    op.dim = N;
    op.matrix = Eigen::MatrixXcd::Zero(N * N, N * N);
    for (const auto& d : sys.decays) {
        Eigen::MatrixXcd s = detail::jump_op(sys, d);
        op.matrix += d.rate * Eigen::kroneckerProduct(s.conjugate(), s).eval();
    }
    return op;
}

/// Full Lindblad generator: -i[H, rho] + sum gamma_ij D_ij(rho).
inline Superoperator build_lindblad(const LevelSystem& sys, const RwaHamiltonian& H) {
    detail::check_dims(sys, H);
    const int N = sys.dim();
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
    Superoperator op;
    op.kind = SuperoperatorKind::FullLindblad;
    op.dim = N;
    op.matrix = Complex(0, -1) * (Eigen::kroneckerProduct(I, H.matrix).eval() -
                                  Eigen::kroneckerProduct(H.matrix.transpose(), I).eval());
    for (const auto& d : sys.decays) {
        Eigen::MatrixXcd s = detail::jump_op(sys, d);
        Eigen::MatrixXcd ss = s.adjoint() * s;
        op.matrix += d.rate * (Eigen::kroneckerProduct(s.conjugate(), s).eval() -
                               0.5 * Eigen::kroneckerProduct(I, ss).eval() -
                               0.5 * Eigen::kroneckerProduct(ss.transpose(), I).eval());
    }
    return op;
}

}  // namespace darkstate

#endif  // DARKSTATE_LIOUVILLE_HPP
