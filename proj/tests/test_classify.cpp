// Degenerate grouping, per-group kernels, case labels, residuals, and the
// dark-state verdicts.
#include <random>

#include <doctest.h>

#include "darkstate/classify.hpp"
#include "darkstate/presets.hpp"
#include "oracles.hpp"

using namespace darkstate;

namespace {

DarkClassification classify(const LevelSystem& sys) {
    return dark_subspaces(sys, build_hamiltonian(sys, solve_frame(sys)));
}

}  // namespace

TEST_CASE("sorted-gap clustering splits on gaps larger than the tolerance") {
    RwaHamiltonian H;
    H.numGround = 5;
    H.groundDiagonal = Eigen::VectorXd(5);
    H.groundDiagonal << 1.0, 0.0, 1.0 + 5e-9, 2.0, 0.0;
    auto groups = degenerate_groups(H, 1e-8);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].memberIndices == std::vector<int>{1, 4});
    CHECK(groups[1].memberIndices == std::vector<int>{0, 2});
    CHECK(groups[2].memberIndices == std::vector<int>{3});
    CHECK(groups[0].dimension == 2);
}

TEST_CASE("lambda system: one dark state spanned by the antisymmetric combination") {
    DarkClassification cls = classify(presets::lambda_system(1.0, 1.0));
    REQUIRE(cls.groups.size() == 1);
    CHECK(cls.totalDarkDim == 1);
    CHECK(cls.liouvillianKernelDim == 1);
    CHECK(cls.unique);
    CHECK(cls.pureGuaranteed);
    CHECK(cls.groups[0].caseLabel == CaseLabel::AlwaysDark);
    // kernel vector proportional to (V21, -V11)
    Eigen::VectorXcd k = cls.groups[0].kernelBasis.col(0);
    Eigen::VectorXcd expect(2);
    expect << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    CHECK(std::min((k - expect).norm(), (k + expect).norm()) < 1e-12);
}

TEST_CASE("lambda kernel follows general couplings") {
    DarkClassification cls = classify(presets::lambda_system(0.3, 1.7));
    REQUIRE(cls.totalDarkDim == 1);
    Eigen::VectorXcd k = cls.groups[0].kernelBasis.col(0);
    Eigen::Vector2cd expect(1.7, -0.3);
    expect.normalize();
    CHECK(std::min((k - expect).norm(), (k + expect).norm()) < 1e-12);
}

TEST_CASE("detuning the lambda legs apart destroys the dark state") {
    DarkClassification cls = classify(presets::lambda_system(1.0, 1.0, {0.5, 0.5}, {0.0, 0.7}));
    CHECK(cls.totalDarkDim == 0);
    CHECK(cls.groups.size() == 2);
}

TEST_CASE("fan cases: dark dimension shrinks as detunings lift the degeneracy") {
    struct Expect {
        char c;
        int M, kerL;
    };
    for (Expect e : {Expect{'a', 3, 9}, Expect{'b', 2, 4}, Expect{'c', 2, 2}, Expect{'d', 1, 1}}) {
        CAPTURE(e.c);
        DarkClassification cls = classify(presets::fan_system(e.c));
        CHECK(cls.totalDarkDim == e.M);
        CHECK(cls.liouvillianKernelDim == e.kerL);
        CHECK(cls.unique == (e.kerL == 1));
    }
}

TEST_CASE("case labels: enough degeneracy guarantees darkness") {
    DarkClassification cls = classify(presets::fan_system('b'));
    REQUIRE(cls.groups.size() == 2);
    // the singleton group faces 1 excited level: conditioned; the triple is safe
    for (const auto& g : cls.groups) {
        if (g.dimension == 1) {
            CHECK(g.caseLabel == CaseLabel::RabiConditioned);
            REQUIRE(g.rabiResidual.has_value());
            CHECK(g.residualIsDeterminant);
            CHECK(std::abs(*g.rabiResidual) == doctest::Approx(1.0));
        } else {
            CHECK(g.dimension == 3);
            CHECK(g.caseLabel == CaseLabel::AlwaysDark);
            CHECK_FALSE(g.rabiResidual.has_value());
            CHECK(g.kernelDim == 2);
        }
    }
}

TEST_CASE("M system: unique pure dark state, with and without the loop coupling") {
    for (bool loop : {false, true}) {
        CAPTURE(loop);
        DarkClassification cls = classify(presets::m_system(loop));
        CHECK(cls.totalDarkDim == 1);
        CHECK(cls.liouvillianKernelDim == 1);
        CHECK(cls.unique);
        CHECK(cls.pureGuaranteed);
    }
}

TEST_CASE("paired two-level systems: dark only on the determinant manifold") {
    SUBCASE("proportional couplings, closed frame: dark") {
        DarkClassification cls = classify(presets::pair_two_level(1.0, 2.0, 0.5, 1.0));
        CHECK(cls.totalDarkDim == 1);
    }
    SUBCASE("generic couplings: bright") {
        DarkClassification cls = classify(presets::pair_two_level(1.0, 2.0, 0.5, 1.3));
        CHECK(cls.totalDarkDim == 0);
        REQUIRE(cls.groups.size() == 1);
        REQUIRE(cls.groups[0].rabiResidual.has_value());
        // residual is det conj(V) block = conj(V11 V22 - V12 V21)
        CHECK(std::abs(*cls.groups[0].rabiResidual) == doctest::Approx(std::abs(1.0 * 1.3 - 2.0 * 0.5)));
    }
    SUBCASE("a phase kills the proportionality: bright") {
        DarkClassification cls =
            classify(presets::pair_two_level(1.0, 2.0, 0.5, std::polar(1.0, 0.4)));
        CHECK(cls.totalDarkDim == 0);
    }
}

TEST_CASE("explicit residual accessor matches the stored group residual") {
    LevelSystem sys = presets::pair_two_level(1.0, 2.0, 0.5, 1.3);
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    DarkClassification cls = dark_subspaces(sys, H);
    REQUIRE(cls.groups.size() == 1);
    Complex r = rabi_condition_residual(sys, H, cls.groups[0]);
    CHECK(std::abs(r - *cls.groups[0].rabiResidual) < 1e-14);
}

TEST_CASE("residual accessor rejects case-1 groups") {
    LevelSystem sys = presets::fan_system('a');
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    DarkClassification cls = dark_subspaces(sys, H);
    REQUIRE(cls.groups.size() == 1);
    CHECK_THROWS_AS(rabi_condition_residual(sys, H, cls.groups[0]), std::invalid_argument);
}

TEST_CASE("kernel columns are orthonormal and annihilated by the coupling block") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        LevelSystem sys = oracles::random_system(rng);
        RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
        DarkClassification cls = dark_subspaces(sys, H);
        Eigen::MatrixXcd V = coupling_matrix(sys);
        for (const auto& g : cls.groups) {
            if (g.kernelDim == 0) continue;
            Eigen::MatrixXcd K = g.kernelBasis;
            CHECK((K.adjoint() * K - Eigen::MatrixXcd::Identity(g.kernelDim, g.kernelDim))
                      .norm() < 1e-10);
            // conj(V)^T restricted to the group must annihilate every column
            CHECK((V.conjugate().transpose() * K).norm() < 1e-8);
        }
    }
}

TEST_CASE("rank-nullity holds per group: rank + kernelDim == dimension") {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        LevelSystem sys = oracles::random_system(rng);
        RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
        DarkClassification cls = dark_subspaces(sys, H);
        Eigen::MatrixXcd V = coupling_matrix(sys);
        for (const auto& g : cls.groups) {
            Eigen::MatrixXcd Q(V.cols(), g.dimension);
            for (int c = 0; c < g.dimension; ++c)
                Q.col(c) = V.row(g.memberIndices[c]).conjugate().transpose();
            int rank = g.dimension - oracles::null_dimension(Q, 1e-10);
            CHECK(rank + g.kernelDim == g.dimension);
            // case-1 groups always retain at least one dark direction
            if (g.caseLabel == CaseLabel::AlwaysDark) CHECK(g.kernelDim >= 1);
        }
    }
}

TEST_CASE("verify_dark accepts the classified states and rejects bright ones") {
    LevelSystem sys = presets::lambda_system(1.0, 1.0);
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    DarkClassification cls = dark_subspaces(sys, H);
    Superoperator L = build_lindblad(sys, H);
    Superoperator Lnh = build_nonhermitian(sys, H);

    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(3);
    d.head(2) = cls.groups[0].kernelBasis.col(0);
    DarkVerdict good = verify_dark(d * d.adjoint(), L, Lnh, cls, 2);
    CHECK(good.dark);
    CHECK(good.excitedNorm < 1e-12);
    CHECK(good.lindbladNorm < 1e-12);

    Eigen::VectorXcd b(3);
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
    DarkVerdict bad = verify_dark(b * b.adjoint(), L, Lnh, cls, 2);
    CHECK_FALSE(bad.dark);
    CHECK(bad.nonHermitianNorm > 0.1);
}

TEST_CASE("verify_dark rejects non-density inputs outright") {
    LevelSystem sys = presets::lambda_system();
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    DarkClassification cls = dark_subspaces(sys, H);
    Superoperator L = build_lindblad(sys, H);
    Superoperator Lnh = build_nonhermitian(sys, H);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(0, 0) = 2.0;  // trace 2
    CHECK_THROWS_AS(verify_dark(rho, L, Lnh, cls, 2), std::invalid_argument);
    rho(0, 0) = 1.0;
    rho(0, 1) = Complex(0.0, 0.3);  // not Hermitian
    CHECK_THROWS_AS(verify_dark(rho, L, Lnh, cls, 2), std::invalid_argument);
}

TEST_CASE("component report separates decoupled subsystems and sinks") {
    // two independent lambda systems plus one uncoupled ground level
    LevelSystem sys;
    sys.ground = {{"a1", 0.0}, {"a2", 0.0}, {"b1", 0.0}, {"b2", 0.0}, {"s", 0.0}};
    sys.excited = {{"ea", 20.0}, {"eb", 20.0}};
    sys.couplings = {
        presets::detail::coupling(0, 0, 1.0, 20.0), presets::detail::coupling(1, 0, 1.0, 20.0),
        presets::detail::coupling(2, 1, 1.0, 20.0), presets::detail::coupling(3, 1, 1.0, 20.0),
    };
    sys.decays = {{0, 0, 0.1}, {1, 0, 0.1}, {2, 1, 0.1}, {3, 1, 0.1}, {4, 0, 0.1}};
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    ComponentReport rep = classify_components(sys, H);
    REQUIRE(rep.components.size() == 2);
    CHECK(rep.components[0].groundMembers == std::vector<int>{0, 1});
    CHECK(rep.components[1].groundMembers == std::vector<int>{2, 3});
    CHECK(rep.sinkLevels == std::vector<int>{4});
    for (const auto& comp : rep.components) {
        CHECK(comp.cycles == 0);
        REQUIRE(comp.groups.size() == 1);
        CHECK(comp.groups[0].kernelDim == 1);
    }
}

TEST_CASE("zero-magnitude couplings do not glue components together") {
    LevelSystem sys;
    sys.ground = {{"a", 0.0}, {"b", 0.0}};
    sys.excited = {{"ea", 20.0}, {"eb", 20.0}};
    sys.couplings = {presets::detail::coupling(0, 0, 1.0, 20.0),
                     presets::detail::coupling(1, 1, 1.0, 20.0),
                     presets::detail::coupling(0, 1, 0.0, 20.0)};
    sys.decays = {{0, 0, 0.1}, {1, 1, 0.1}};
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    ComponentReport rep = classify_components(sys, H);
    CHECK(rep.components.size() == 2);
}

TEST_CASE("classification reports serialize with labels and dimensions") {
    LevelSystem sys = presets::fan_system('b');
    DarkClassification cls = classify(sys);
    nlohmann::json doc = classification_to_json(cls, sys);
    CHECK(doc["totalDarkDim"] == 2);
    CHECK(doc["liouvillianKernelDim"] == 4);
    CHECK(doc["groups"].size() == 2);
    bool sawResidual = false;
    for (const auto& jg : doc["groups"])
        if (jg.contains("rabiResidual")) sawResidual = true;
    CHECK(sawResidual);
    std::string table = classification_table(cls, sys);
    CHECK(table.find("g2") != std::string::npos);
    CHECK(table.find("dim ker(L) = 4") != std::string::npos);
}
