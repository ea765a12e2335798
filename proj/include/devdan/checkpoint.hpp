#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "devdan/network.hpp"

namespace devdan {

inline constexpr int kStateFormatVersion = 1;

/// Versioned flat document: dimensions first, then the parameter blocks in
/// a fixed order (w row-major, b, c, phi row-major, eta).
inline nlohmann::ordered_json state_to_json(const NetworkState& s) {
    nlohmann::ordered_json doc;
    doc["format"] = "devdan-state";
    doc["version"] = kStateFormatVersion;
    doc["n"] = s.inputs();
    doc["r"] = s.hidden();
    doc["m"] = s.classes();
    doc["w"] = s.w.storage();
    doc["b"] = s.b;
    doc["c"] = s.c;
    doc["phi"] = s.phi.storage();
    doc["eta"] = s.eta;
    return doc;
}

inline NetworkState state_from_json(const nlohmann::json& doc) {
    if (doc.value("format", "") != "devdan-state")
        throw std::runtime_error("state_from_json: not a devdan-state document");
    if (doc.value("version", 0) != kStateFormatVersion)
        throw std::runtime_error("state_from_json: unsupported version");
    const auto n = doc.at("n").get<std::size_t>();
    const auto r = doc.at("r").get<std::size_t>();
    const auto m = doc.at("m").get<std::size_t>();
    NetworkState s;
    s.w = Matrix(n, r);
    s.w.storage() = doc.at("w").get<std::vector<double>>();
    s.b = doc.at("b").get<std::vector<double>>();
    s.c = doc.at("c").get<std::vector<double>>();
    s.phi = Matrix(r, m);
    s.phi.storage() = doc.at("phi").get<std::vector<double>>();
    s.eta = doc.at("eta").get<std::vector<double>>();
    if (s.w.size() != n * r || s.b.size() != r || s.c.size() != n ||
        s.phi.size() != r * m || s.eta.size() != m)
        throw std::runtime_error("state_from_json: inconsistent dimensions");
    return s;
}

inline void save_state(const NetworkState& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_state: cannot write '" + path + "'");
    out << state_to_json(s).dump(2) << '\n';
}

inline NetworkState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_state: cannot open '" + path + "'");
    nlohmann::json doc;
    in >> doc;
    return state_from_json(doc);
}

} // namespace devdan
