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

#ifndef DARKSTATE_MODEL_HPP
#define DARKSTATE_MODEL_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace darkstate {

using Complex = std::complex<double>;

/// Wrap a phase into [0, 2*pi).
inline double normalize_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phase, two_pi);
    if (p < 0.0) p += two_pi;
    return p;
}

struct Level {
    std::string label;
    double energy = 0.0;  // angular frequency units, hbar = 1
};

/// One laser driving the transition ground <-> excited.
/// Indices are 0-based positions into the ground/excited level lists.
struct LaserCoupling {
    int ground = 0;
    int excited = 0;
    double magnitude = 0.0;  // Rabi magnitude, reference-Rabi units
    double phase = 0.0;      // radians, [0, 2*pi)
    double frequency = 0.0;  // laser angular frequency

    Complex rabi() const { return std::polar(magnitude, phase); }
};

struct DecayChannel {
    int ground = 0;
    int excited = 0;
    double rate = 0.0;
};

/// Declaration of a driven dissipative N-level system.
///
/// Basis order is fixed everywhere downstream: ground levels first
/// (0 .. numGround-1), then excited (numGround .. dim-1).
/// Value object; immutable by convention after construction.
struct LevelSystem {
    std::vector<Level> ground;
    std::vector<Level> excited;
    std::vector<LaserCoupling> couplings;
    std::vector<DecayChannel> decays;

    int numGround() const { return static_cast<int>(ground.size()); }
    int numExcited() const { return static_cast<int>(excited.size()); }
    int dim() const { return numGround() + numExcited(); }

    /// Basis index of excited level j in the combined ordering.
    int excitedIndex(int j) const { return numGround() + j; }
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const { return errors.empty(); }
};

/// Structural checks on a declared system. Findings are data, nothing throws.
inline ValidationReport validate_system(const LevelSystem& sys) {
    ValidationReport rep;
    if (sys.ground.empty()) rep.errors.push_back("system has no ground levels");
    if (sys.excited.empty()) rep.errors.push_back("system has no excited levels");

    std::set<std::string> labels;
    for (const auto& lv : sys.ground) {
        if (!labels.insert(lv.label).second)
            rep.errors.push_back("duplicate level label '" + lv.label + "'");
    }
    for (const auto& lv : sys.excited) {
        if (!labels.insert(lv.label).second)
            rep.errors.push_back("duplicate level label '" + lv.label + "'");
    }

    std::set<std::pair<int, int>> pairs;
    for (const auto& c : sys.couplings) {
        if (c.ground < 0 || c.ground >= sys.numGround() ||
            c.excited < 0 || c.excited >= sys.numExcited()) {
            rep.errors.push_back("coupling references invalid level index (g=" +
                                 std::to_string(c.ground + 1) + ", e=" +
                                 std::to_string(c.excited + 1) + ")");
            continue;
        }
        if (!pairs.insert({c.ground, c.excited}).second)
            rep.errors.push_back("duplicate coupling on pair (g=" +
                                 std::to_string(c.ground + 1) + ", e=" +
                                 std::to_string(c.excited + 1) +
                                 "): each transition may be driven by at most one laser");
        if (c.magnitude < 0.0)
            rep.errors.push_back("coupling (g=" + std::to_string(c.ground + 1) + ", e=" +
                                 std::to_string(c.excited + 1) + ") has negative magnitude");
        if (c.frequency <= 0.0)
            rep.errors.push_back("coupling (g=" + std::to_string(c.ground + 1) + ", e=" +
                                 std::to_string(c.excited + 1) + ") has non-positive laser frequency");
    }
    for (const auto& d : sys.decays) {
        if (d.ground < 0 || d.ground >= sys.numGround() ||
            d.excited < 0 || d.excited >= sys.numExcited()) {
            rep.errors.push_back("decay channel references invalid level index (g=" +
                                 std::to_string(d.ground + 1) + ", e=" +
                                 std::to_string(d.excited + 1) + ")");
            continue;
        }
        if (d.rate < 0.0)
            rep.errors.push_back("decay channel (g=" + std::to_string(d.ground + 1) + ", e=" +
                                 std::to_string(d.excited + 1) + ") has negative rate");
    }
    // A non-decaying excited level breaks the strict-negativity argument that
    // pins dark states to the ground manifold.
    for (int j = 0; j < sys.numExcited(); ++j) {
        double total = 0.0;
        for (const auto& d : sys.decays)
            if (d.excited == j) total += d.rate;
        if (sys.numExcited() > 0 && total == 0.0)
            rep.warnings.push_back("excited level '" +
                                   (j < sys.numExcited() ? sys.excited[j].label : "?") +
                                   "' has zero total decay rate; dark-state classification "
                                   "assumptions are violated for it");
    }
    return rep;
}

/// N_g x N_e matrix of complex Rabi frequencies; zero where no laser is declared.
inline Eigen::MatrixXcd coupling_matrix(const LevelSystem& sys) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(sys.numGround(), sys.numExcited());
    for (const auto& c : sys.couplings) V(c.ground, c.excited) = c.rabi();
    return V;
}

// ---------------------------------------------------------------------------
// System-spec file format (JSON, 1-based indices; see docs/system-spec.schema.json)

namespace detail {

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key))
        throw std::runtime_error("system spec: missing field '" + key + "' in " + where);
    if (!obj[key].is_number())
        throw std::runtime_error("system spec: field '" + key + "' in " + where +
                                 " must be a number");
    return obj[key].get<double>();
}

inline int require_index(const nlohmann::json& obj, const std::string& key,
                         const std::string& where) {
    if (!obj.contains(key))
        throw std::runtime_error("system spec: missing field '" + key + "' in " + where);
    if (!obj[key].is_number_integer())
        throw std::runtime_error("system spec: field '" + key + "' in " + where +
                                 " must be an integer index");
    return obj[key].get<int>();
}

inline std::vector<Level> parse_levels(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key))
        throw std::runtime_error("system spec: missing top-level key '" + key + "'");
    if (!doc[key].is_array())
        throw std::runtime_error("system spec: '" + key + "' must be an array");
    std::vector<Level> out;
    int n = 0;
    for (const auto& item : doc[key]) {
        std::string where = key + "[" + std::to_string(n++) + "]";
        if (!item.is_object())
            throw std::runtime_error("system spec: " + where + " must be an object");
        Level lv;
        if (!item.contains("label") || !item["label"].is_string())
            throw std::runtime_error("system spec: " + where + " needs a string 'label'");
        lv.label = item["label"].get<std::string>();
        lv.energy = require_number(item, "energy", where);
        out.push_back(std::move(lv));
    }
    return out;
}

}  // namespace detail

inline nlohmann::json system_to_json(const LevelSystem& sys) {
    nlohmann::json doc;
    doc["ground"] = nlohmann::json::array();
    for (const auto& lv : sys.ground)
        doc["ground"].push_back({{"label", lv.label}, {"energy", lv.energy}});
    doc["excited"] = nlohmann::json::array();
    for (const auto& lv : sys.excited)
        doc["excited"].push_back({{"label", lv.label}, {"energy", lv.energy}});
    doc["couplings"] = nlohmann::json::array();
    for (const auto& c : sys.couplings)
        doc["couplings"].push_back({{"g", c.ground + 1},
                                    {"e", c.excited + 1},
                                    {"magnitude", c.magnitude},
                                    {"phase", c.phase},
                                    {"frequency", c.frequency}});
    doc["decays"] = nlohmann::json::array();
    for (const auto& d : sys.decays)
        doc["decays"].push_back({{"g", d.ground + 1}, {"e", d.excited + 1}, {"rate", d.rate}});
    return doc;
}

inline std::string save_system(const LevelSystem& sys) {
    return system_to_json(sys).dump(2) + "\n";
}

inline LevelSystem system_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw std::runtime_error("system spec: top-level document must be an object");
    LevelSystem sys;
    sys.ground = detail::parse_levels(doc, "ground");
    sys.excited = detail::parse_levels(doc, "excited");
    if (doc.contains("couplings")) {
        if (!doc["couplings"].is_array())
            throw std::runtime_error("system spec: 'couplings' must be an array");
        int n = 0;
        for (const auto& item : doc["couplings"]) {
            std::string where = "couplings[" + std::to_string(n++) + "]";
            LaserCoupling c;
            c.ground = detail::require_index(item, "g", where) - 1;
            c.excited = detail::require_index(item, "e", where) - 1;
            c.magnitude = detail::require_number(item, "magnitude", where);
            c.phase = normalize_phase(detail::require_number(item, "phase", where));
            c.frequency = detail::require_number(item, "frequency", where);
            sys.couplings.push_back(c);
        }
    }
    if (doc.contains("decays")) {
        if (!doc["decays"].is_array())
            throw std::runtime_error("system spec: 'decays' must be an array");
        int n = 0;
        for (const auto& item : doc["decays"]) {
            std::string where = "decays[" + std::to_string(n++) + "]";
            DecayChannel d;
            d.ground = detail::require_index(item, "g", where) - 1;
            d.excited = detail::require_index(item, "e", where) - 1;
            d.rate = detail::require_number(item, "rate", where);
            sys.decays.push_back(d);
        }
    }
    return sys;
}

/// Parse a system-spec document. Throws std::runtime_error with a positional
/// message on malformed JSON and a field path on schema violations.
inline LevelSystem load_system(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("system spec: ") + e.what());
    }
    return system_from_json(doc);
}

inline bool operator==(const Level& a, const Level& b) {
    return a.label == b.label && a.energy == b.energy;
}
inline bool operator==(const LaserCoupling& a, const LaserCoupling& b) {
    return a.ground == b.ground && a.excited == b.excited && a.magnitude == b.magnitude &&
           a.phase == b.phase && a.frequency == b.frequency;
}
inline bool operator==(const DecayChannel& a, const DecayChannel& b) {
    return a.ground == b.ground && a.excited == b.excited && a.rate == b.rate;
}
inline bool operator==(const LevelSystem& a, const LevelSystem& b) {
    return a.ground == b.ground && a.excited == b.excited && a.couplings == b.couplings &&
           a.decays == b.decays;
}

}  // namespace darkstate

#endif  // DARKSTATE_MODEL_HPP
