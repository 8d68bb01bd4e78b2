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

#ifndef DARKSTATE_PRESETS_HPP
#define DARKSTATE_PRESETS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "darkstate/classify.hpp"
#include "darkstate/model.hpp"
#include "darkstate/rwa.hpp"

namespace darkstate {
namespace presets {

// All presets use dimensionless reference-Rabi units. Bare optical scales are
// arbitrary as long as laser frequencies stay positive and transitions do not
// overlap; the values below keep every omega well above the Rabi scale.
inline constexpr double kExcitedEnergy = 20.0;

namespace detail {

inline LaserCoupling coupling(int g, int e, Complex rabi, double frequency) {
    LaserCoupling c;
    c.ground = g;
    c.excited = e;
    c.magnitude = std::abs(rabi);
    c.phase = normalize_phase(std::arg(rabi));
    c.frequency = frequency;
    return c;
}

}  // namespace detail

/// Two ground levels, one excited, two lasers, two decay channels.
inline LevelSystem lambda_system(double V11 = 1.0, double V21 = 1.0,
                                 std::array<double, 2> gammas = {0.5, 0.5},
                                 std::array<double, 2> detunings = {0.0, 0.0}) {
    LevelSystem sys;
    sys.ground = {{"g1", 0.0}, {"g2", 0.0}};
    sys.excited = {{"e1", kExcitedEnergy}};
    sys.couplings = {
        detail::coupling(0, 0, V11, kExcitedEnergy - detunings[0]),
        detail::coupling(1, 0, V21, kExcitedEnergy - detunings[1]),
    };
    sys.decays = {{0, 0, gammas[0]}, {1, 0, gammas[1]}};
    return sys;
}

/// Zigzag M system of the first worked example: 3 ground, 2 excited, all
/// detunings zero. V11 = 1 by the unit convention. With the extra coupling the
/// connectivity acquires one loop and the added laser frequency is fixed by
/// the cycle constraint (here all frequencies coincide, so it is automatic).
inline LevelSystem m_system(bool withExtraCoupling = false) {
    LevelSystem sys;
    sys.ground = {{"g1", 0.0}, {"g2", 0.0}, {"g3", 0.0}};
    sys.excited = {{"e1", kExcitedEnergy}, {"e2", kExcitedEnergy}};
    sys.couplings = {
        detail::coupling(0, 0, 1.0, kExcitedEnergy),
        detail::coupling(1, 0, 0.56, kExcitedEnergy),
        detail::coupling(1, 1, 0.23, kExcitedEnergy),
        detail::coupling(2, 1, 0.45, kExcitedEnergy),
    };
    if (withExtraCoupling)
        sys.couplings.push_back(detail::coupling(2, 0, 0.57, kExcitedEnergy));
    // published rates, read as (excited -> ground) and stored per (ground, excited)
    sys.decays = {
        {0, 0, 0.04}, {1, 0, 0.01}, {2, 0, 0.09},
        {0, 1, 0.14}, {1, 1, 0.02}, {2, 1, 0.04},
    };
    return sys;
}

/// Four ground levels coupled to one excited level with unit Rabi frequencies
/// and unequal decay rates. Cases select the detuning pattern:
///   a: all degenerate     b: g1 detuned          (reproduces the published
///   c: g1,g2 detuned      d: g1,g2 split apart    asymptotic purities)
inline LevelSystem fan_system(char caseLabel = 'a') {
    std::array<double, 4> delta{};
    switch (caseLabel) {
        case 'a': delta = {0.0, 0.0, 0.0, 0.0}; break;
        case 'b': delta = {1.0, 0.0, 0.0, 0.0}; break;
        case 'c': delta = {1.0, 1.0, 0.0, 0.0}; break;
        case 'd': delta = {1.0, 2.0, 0.0, 0.0}; break;
        default: throw std::invalid_argument("fan_system: case must be one of a, b, c, d");
    }
    LevelSystem sys;
    sys.ground = {{"g1", 0.0}, {"g2", 0.0}, {"g3", 0.0}, {"g4", 0.0}};
    sys.excited = {{"e1", kExcitedEnergy}};
    for (int i = 0; i < 4; ++i)
        sys.couplings.push_back(detail::coupling(i, 0, 1.0, kExcitedEnergy - delta[i]));
    sys.decays = {{0, 0, 0.1}, {1, 0, 0.2}, {2, 0, 0.3}, {3, 0, 0.4}};
    return sys;
}

/// Two ground and two excited levels with all four lasers, forming one loop.
/// Detunings are given for (1,1), (1,2), (2,1); the fourth is fixed by the
/// loop frequency constraint. groundSplit is the bare energy of g2 (the
/// ground-block splitting scanned in the detuning maps).
inline LevelSystem pair_two_level(Complex V11 = 1.0, Complex V12 = 1.0, Complex V21 = 1.0,
                                  Complex V22 = 1.0,
                                  std::array<double, 3> detunings = {0.0, 0.0, 0.0},
                                  std::array<double, 4> gammas = {0.2, 0.5, 0.44, 0.7},
                                  double groundSplit = 0.0) {
    const double d11 = detunings[0], d12 = detunings[1], d21 = detunings[2];
    const double d22 = d21 + d12 - d11;  // closes the cycle
    const double Ee1 = kExcitedEnergy, Ee2 = kExcitedEnergy + 1.0;
    LevelSystem sys;
    sys.ground = {{"g1", 0.0}, {"g2", groundSplit}};
    sys.excited = {{"e1", Ee1}, {"e2", Ee2}};
    sys.couplings = {
        detail::coupling(0, 0, V11, Ee1 - 0.0 - d11),
        detail::coupling(0, 1, V12, Ee2 - 0.0 - d12),
        detail::coupling(1, 0, V21, Ee1 - groundSplit - d21),
        detail::coupling(1, 1, V22, Ee2 - groundSplit - d22),
    };
    sys.decays = {{0, 0, gammas[0]}, {0, 1, gammas[1]}, {1, 0, gammas[2]}, {1, 1, gammas[3]}};
    return sys;
}

// ---------------------------------------------------------------------------
// Rb-87 hyperfine schemes (S1/2 F=2, F=1 -> P1/2 F'=1)

enum Polarization { kPolS = 0, kPolSigmaPlus = 1, kPolSigmaMinus = 2 };

struct Rb87Scheme {
    int schemeId = 0;
    std::array<bool, 3> laserA{};  // F=2 <-> F'=1, indexed by Polarization
    std::array<bool, 3> laserB{};  // F=1 <-> F'=1
};

inline Rb87Scheme rb87_polarizations(int schemeId) {
    // {s, sigma+, sigma-} per laser, matching the published scheme list
    static constexpr std::array<std::array<bool, 3>, 10> A = {{
        {false, true, true},  {false, false, false}, {false, true, true},
        {true, true, true},   {false, false, false}, {true, false, false},
        {false, true, true},  {true, true, true},    {false, true, true},
        {true, true, true},
    }};
    static constexpr std::array<std::array<bool, 3>, 10> B = {{
        {false, false, false}, {false, true, true},  {false, true, true},
        {false, false, false}, {true, true, true},   {false, true, true},
        {true, false, false},  {false, true, true},  {true, true, true},
        {true, true, true},
    }};
    if (schemeId < 1 || schemeId > 10)
        throw std::invalid_argument("rb87 scheme id must be in 1..10");
    return {schemeId, A[schemeId - 1], B[schemeId - 1]};
}

/// The one physics rule beyond the Delta-m selection rules: the
/// F=1, m=0 <-> F'=1, m'=0 line has vanishing transition strength and is
/// excluded from both driving and decay.
inline bool rb87_transition_allowed(int F, int m, int mp) {
    if (std::abs(m - mp) > 1) return false;
    if (F == 1 && m == 0 && mp == 0) return false;
    return true;
}

/// Build a hyperfine scheme: 8 ground sublevels (F=2: m=-2..2, F=1: m=-1..1),
/// 3 excited (F'=1: m'=-1..1). Couplings follow the selection rules with equal
/// magnitude within each (laser, polarization); decays run from every excited
/// sublevel to every dipole-connected ground sublevel at equal rate.
/// amplitudesA/B give the complex amplitude per polarization {s, sigma+, sigma-}.
inline LevelSystem rb87_scheme(int schemeId,
                               std::array<Complex, 3> amplitudesA = {1.0, 1.0, 1.0},
                               std::array<Complex, 3> amplitudesB = {1.0, 1.0, 1.0},
                               double decayRate = 0.1) {
    Rb87Scheme scheme = rb87_polarizations(schemeId);
    const double EF2 = 0.0, EF1 = -5.0;
    LevelSystem sys;
    for (int m = -2; m <= 2; ++m)
        sys.ground.push_back({"F2m" + std::string(m >= 0 ? "+" : "") + std::to_string(m), EF2});
    for (int m = -1; m <= 1; ++m)
        sys.ground.push_back({"F1m" + std::string(m >= 0 ? "+" : "") + std::to_string(m), EF1});
    for (int m = -1; m <= 1; ++m)
        sys.excited.push_back({"F'1m" + std::string(m >= 0 ? "+" : "") + std::to_string(m),
                               kExcitedEnergy});

    auto groundIndex = [](int F, int m) { return F == 2 ? m + 2 : m + 6; };
    auto excitedIndex = [](int mp) { return mp + 1; };
    auto addLaser = [&](int F, const std::array<bool, 3>& pols,
                        const std::array<Complex, 3>& amps, double omega) {
        const int mLo = F == 2 ? -2 : -1, mHi = -mLo;
        for (int pol = 0; pol < 3; ++pol) {
            if (!pols[pol]) continue;
            int dm = pol == kPolSigmaPlus ? 1 : pol == kPolSigmaMinus ? -1 : 0;
            for (int m = mLo; m <= mHi; ++m) {
                int mp = m + dm;
                if (mp < -1 || mp > 1 || !rb87_transition_allowed(F, m, mp)) continue;
                sys.couplings.push_back(
                    detail::coupling(groundIndex(F, m), excitedIndex(mp), amps[pol], omega));
            }
        }
    };
    addLaser(2, scheme.laserA, amplitudesA, kExcitedEnergy - EF2);
    addLaser(1, scheme.laserB, amplitudesB, kExcitedEnergy - EF1);

    for (int mp = -1; mp <= 1; ++mp)
        for (int F : {2, 1})
            for (int m = (F == 2 ? -2 : -1); m <= (F == 2 ? 2 : 1); ++m)
                if (rb87_transition_allowed(F, m, mp))
                    sys.decays.push_back({groundIndex(F, m), excitedIndex(mp), decayRate});
    return sys;
}

// ---------------------------------------------------------------------------
// Rb-87 classification table (one row per scheme, decoupled subsystems listed
// separately, the way the published table is organized)

struct Rb87TableEntry {
    std::vector<std::string> states;  // ground labels spanning the dark manifold's group
    int dim = 0;                      // dark-manifold dimension (hypothetical if conditioned)
    bool pure = false;
    int cycles = 0;
    bool conditioned = false;   // existence requires a Rabi-frequency constraint
    bool satisfiable = true;    // constraint reachable under polarization equality
    double residual = 0.0;      // |existence residual| at the default amplitudes
};

struct Rb87TableRow {
    int schemeId = 0;
    std::vector<Rb87TableEntry> entries;
    std::vector<std::string> sinkLevels;  // uncoupled ground levels (population sinks)
};

namespace detail {

/// Numerically probe whether the existence residual of a conditioned group can
/// vanish for some per-polarization amplitudes. Random multi-start search over
/// magnitudes in [0.25, 2] and free phases; deterministic seed.
inline bool rb87_condition_satisfiable(int schemeId, const std::vector<int>& groupMembers) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> mag(0.25, 2.0);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    double best = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 400; ++trial) {
        std::array<Complex, 3> ampA, ampB;
        for (int p = 0; p < 3; ++p) {
            ampA[p] = std::polar(mag(rng), ph(rng));
            ampB[p] = std::polar(mag(rng), ph(rng));
        }
        LevelSystem sys = rb87_scheme(schemeId, ampA, ampB);
        RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
        ComponentReport rep = classify_components(sys, H);
        for (const auto& comp : rep.components) {
            for (const auto& g : comp.groups) {
                if (g.memberIndices != groupMembers) continue;
                if (g.kernelDim >= 1) return true;
                if (g.rabiResidual) best = std::min(best, std::abs(*g.rabiResidual));
            }
        }
    }
    return best < 1e-9;
}

}  // namespace detail

inline Rb87TableRow rb87_table_row(int schemeId) {
    LevelSystem sys = rb87_scheme(schemeId);
    RwaHamiltonian H = build_hamiltonian(sys, solve_frame(sys));
    ComponentReport rep = classify_components(sys, H);

    Rb87TableRow row;
    row.schemeId = schemeId;
    for (int s : rep.sinkLevels) row.sinkLevels.push_back(sys.ground[s].label);
    for (const auto& comp : rep.components) {
        for (const auto& g : comp.groups) {
            Rb87TableEntry entry;
            for (int i : g.memberIndices) entry.states.push_back(sys.ground[i].label);
            entry.cycles = comp.cycles;
            if (g.kernelDim >= 1) {
                entry.dim = g.kernelDim;
            } else if (g.caseLabel == CaseLabel::RabiConditioned &&
                       g.effectiveExcited == g.dimension) {
                // square conditioned block: one scalar condition away from a dark state
                entry.dim = 1;
                entry.conditioned = true;
                entry.residual = g.rabiResidual ? std::abs(*g.rabiResidual) : 0.0;
                entry.satisfiable =
                    detail::rb87_condition_satisfiable(schemeId, g.memberIndices);
            } else {
                continue;  // no dark state and no single-condition rescue; not tabulated
            }
            entry.pure = (entry.dim == 1);
            row.entries.push_back(std::move(entry));
        }
    }
    return row;
}

inline std::vector<Rb87TableRow> rb87_table() {
    std::vector<Rb87TableRow> rows;
    for (int id = 1; id <= 10; ++id) rows.push_back(rb87_table_row(id));
    return rows;
}

// ---------------------------------------------------------------------------
// Preset registry

struct PresetDescriptor {
    std::string name;
    std::string description;
    std::function<LevelSystem()> build;
};

inline const std::vector<PresetDescriptor>& registry() {
    static const std::vector<PresetDescriptor> list = [] {
        std::vector<PresetDescriptor> v;
        v.push_back({"lambda", "2 ground + 1 excited, unit couplings", [] { return lambda_system(); }});
        v.push_back({"m", "zigzag M system (3 ground, 2 excited)", [] { return m_system(false); }});
        v.push_back({"m-loop", "M system with the extra loop coupling", [] { return m_system(true); }});
        for (char c : {'a', 'b', 'c', 'd'})
            v.push_back({std::string("fan-") + c, "four-level fan, detuning case " + std::string(1, c),
                         [c] { return fan_system(c); }});
        v.push_back({"pair", "paired two-level systems (2 ground, 2 excited)",
                     [] { return pair_two_level(); }});
        for (int id = 1; id <= 10; ++id)
            v.push_back({"rb87-" + std::to_string(id), "Rb-87 hyperfine scheme " + std::to_string(id),
                         [id] { return rb87_scheme(id); }});
        return v;
    }();
    return list;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& p : registry()) names.push_back(p.name);
    return names;
}

inline LevelSystem make_preset(const std::string& name) {
    for (const auto& p : registry())
        if (p.name == name) return p.build();
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace presets
}  // namespace darkstate

#endif  // DARKSTATE_PRESETS_HPP
