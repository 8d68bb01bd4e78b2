// Preset systems: structural checks and the Rb-87 hyperfine schemes.
#include <set>

#include <doctest.h>

#include "darkstate/presets.hpp"
#include "darkstate/rwa.hpp"

using namespace darkstate;

TEST_CASE("every preset validates and admits a rotating frame") {
    for (const auto& name : presets::preset_names()) {
        CAPTURE(name);
        LevelSystem sys = presets::make_preset(name);
        ValidationReport rep = validate_system(sys);
        CHECK(rep.ok());
        CHECK(rep.warnings.empty());
        CHECK(solve_frame(sys).feasible);
    }
}

TEST_CASE("the registry names are unique and unknown names are rejected") {
    std::vector<std::string> names = presets::preset_names();
    CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
    CHECK(names.size() == 18);  // lambda, m, m-loop, 4 fans, pair, 10 hyperfine schemes
    CHECK_THROWS_AS(presets::make_preset("nope"), std::invalid_argument);
}

TEST_CASE("lambda and fan geometry") {
    LevelSystem lam = presets::lambda_system();
    CHECK(lam.numGround() == 2);
    CHECK(lam.numExcited() == 1);
    CHECK(lam.couplings.size() == 2);
    LevelSystem fan = presets::fan_system('d');
    CHECK(fan.numGround() == 4);
    CHECK(fan.couplings.size() == 4);
    CHECK(fan.decays.size() == 4);
    CHECK_THROWS_AS(presets::fan_system('x'), std::invalid_argument);
}

TEST_CASE("M system wiring: zigzag without the loop, one cycle with it") {
    LevelSystem m = presets::m_system(false);
    CHECK(m.couplings.size() == 4);
    CHECK(m.decays.size() == 6);
    CHECK(count_cycles(m) == 0);
    LevelSystem loop = presets::m_system(true);
    CHECK(loop.couplings.size() == 5);
    CHECK(count_cycles(loop) == 1);
}

TEST_CASE("paired two-level systems close their frequency loop by construction") {
    LevelSystem sys = presets::pair_two_level(1.0, 1.0, 1.0, 1.0, {0.3, -0.1, 0.2}, {0.2, 0.5, 0.44, 0.7}, 0.15);
    CHECK(solve_frame(sys).feasible);
    CHECK(count_cycles(sys) == 1);
    CHECK(sys.ground[1].energy == doctest::Approx(0.15));
}

TEST_CASE("hyperfine selection rules") {
    CHECK(presets::rb87_transition_allowed(2, -2, -1));
    CHECK(presets::rb87_transition_allowed(2, 0, 0));
    CHECK_FALSE(presets::rb87_transition_allowed(2, -2, 0));  // |dm| > 1
    CHECK_FALSE(presets::rb87_transition_allowed(1, 0, 0));   // vanishing line strength
    CHECK(presets::rb87_transition_allowed(1, 1, 0));
}

TEST_CASE("hyperfine scheme geometry: 8 ground, 3 excited, full decay fan") {
    LevelSystem sys = presets::rb87_scheme(10);
    CHECK(sys.numGround() == 8);
    CHECK(sys.numExcited() == 3);
    // decays: every dipole-connected pair, minus the forbidden F=1 m=0 line
    int expectedDecays = 0;
    for (int mp = -1; mp <= 1; ++mp) {
        for (int m = -2; m <= 2; ++m)
            if (presets::rb87_transition_allowed(2, m, mp)) ++expectedDecays;
        for (int m = -1; m <= 1; ++m)
            if (presets::rb87_transition_allowed(1, m, mp)) ++expectedDecays;
    }
    CHECK(static_cast<int>(sys.decays.size()) == expectedDecays);
    CHECK(expectedDecays == 9 + 8);
    CHECK_THROWS_AS(presets::rb87_scheme(0), std::invalid_argument);
    CHECK_THROWS_AS(presets::rb87_scheme(11), std::invalid_argument);
}

TEST_CASE("scheme 1 drives only the upper hyperfine manifold") {
    LevelSystem sys = presets::rb87_scheme(1);
    for (const auto& c : sys.couplings) CHECK(c.ground < 5);  // F=2 sublevels only
    // sigma+ and sigma- on F=2 -> F'=1: 3 + 3 transitions
    CHECK(sys.couplings.size() == 6);
}

TEST_CASE("independent cycles of the driven hyperfine graphs") {
    // loops in the coupling graph per scheme (summed over components)
    const std::array<int, 10> cycles = {0, 0, 1, 2, 1, 0, 0, 3, 2, 5};
    for (int id = 1; id <= 10; ++id) {
        CAPTURE(id);
        CHECK(count_cycles(presets::rb87_scheme(id)) == cycles[id - 1]);
    }
}

TEST_CASE("table rows match the published classification") {
    // (scheme, states, dim, pure, cycles [, conditioned/satisfiable])
    SUBCASE("scheme 1: two pure dark states in F=2, the whole F=1 manifold sinks") {
        presets::Rb87TableRow row = presets::rb87_table_row(1);
        REQUIRE(row.entries.size() == 2);
        CHECK(row.entries[0].states == std::vector<std::string>{"F2m-2", "F2m0", "F2m+2"});
        CHECK(row.entries[0].dim == 1);
        CHECK(row.entries[0].pure);
        CHECK(row.entries[0].cycles == 0);
        CHECK(row.entries[1].states == std::vector<std::string>{"F2m-1", "F2m+1"});
        CHECK(row.entries[1].dim == 1);
        CHECK(row.entries[1].pure);
        CHECK(row.sinkLevels == std::vector<std::string>{"F1m-1", "F1m0", "F1m+1"});
    }
    SUBCASE("scheme 5: conditioned dark state, unreachable under polarization equality") {
        presets::Rb87TableRow row = presets::rb87_table_row(5);
        REQUIRE(row.entries.size() == 1);
        CHECK(row.entries[0].conditioned);
        CHECK_FALSE(row.entries[0].satisfiable);
        CHECK(row.entries[0].residual > 0.1);
    }
    SUBCASE("scheme 10: one big degenerate group, five-dimensional mixed dark manifold") {
        presets::Rb87TableRow row = presets::rb87_table_row(10);
        REQUIRE(row.entries.size() == 1);
        CHECK(row.entries[0].states.size() == 8);
        CHECK(row.entries[0].dim == 5);
        CHECK_FALSE(row.entries[0].pure);
        CHECK(row.entries[0].cycles == 5);
        CHECK(row.sinkLevels.empty());
    }
}

TEST_CASE("scheme 5 existence residual is the three-amplitude product") {
    // with per-polarization amplitudes (s, sigma+, sigma-) = (a, b, c) on the
    // lower laser, the square-block determinant is -2 a b c up to conjugation
    std::array<Complex, 3> amps = {1.3, 0.7, std::polar(1.1, 0.5)};
    LevelSystem sys = presets::rb87_scheme(5, {1.0, 1.0, 1.0}, amps);
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    ComponentReport rep = classify_components(sys, H);
    bool found = false;
    for (const auto& comp : rep.components)
        for (const auto& g : comp.groups)
            if (g.rabiResidual) {
                CHECK(std::abs(*g.rabiResidual) ==
                      doctest::Approx(2.0 * std::abs(amps[0] * amps[1] * amps[2])));
                found = true;
            }
    CHECK(found);
}
