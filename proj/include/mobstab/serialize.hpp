#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mobstab/sphere.hpp"
#include "mobstab/stability.hpp"

namespace mobstab {

// Locale-independent shortest round-trip formatting.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// Non-finite numbers would serialize as JSON null; use the "inf" token the
// point schema already uses.
inline nlohmann::json json_number(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

// SpherePoint <-> [re, im] | "inf"
inline nlohmann::json point_to_json(const SpherePoint& p) {
    if (p.is_infinity()) return "inf";
    return nlohmann::json::array({p.value().real(), p.value().imag()});
}

inline SpherePoint point_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return SpherePoint::infinity();
        throw std::invalid_argument("point_from_json: unknown token");
    }
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("point_from_json: expected [re, im] or \"inf\"");
    return SpherePoint(j[0].get<double>(), j[1].get<double>());
}

inline nlohmann::json to_json(const PseudoOrbit& po) {
    nlohmann::json j;
    j["epsilon"] = po.epsilon;
    j["preperiod"] = po.preperiod;
    j["period"] = po.period;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const SpherePoint& p : po.points) pts.push_back(point_to_json(p));
    return j;
}

inline PseudoOrbit pseudo_orbit_from_json(const nlohmann::json& j) {
    PseudoOrbit po;
    po.epsilon = j.at("epsilon").get<double>();
    po.preperiod = j.at("preperiod").get<int>();
    po.period = j.at("period").get<int>();
    for (const auto& jp : j.at("points")) po.points.push_back(point_from_json(jp));
    return po;
}

inline nlohmann::json to_json(const StabilityVerdict& v) {
    nlohmann::json j;
    j["epsilon"] = v.epsilon;
    j["defect_observed"] = json_number(v.defect_observed);
    j["separation_threshold"] = v.separation_threshold;
    j["exceed_count"] = v.exceed_count;
    j["exceed_indices"] = v.exceed_indices;
    j["conclusion"] = name(v.conclusion);
    return j;
}

// CSV schemas used by the CLI: orbits are "n,re,im,dist_to_alpha",
// separation profiles are "n,separation".
inline std::string orbit_csv(const std::vector<std::pair<int, SpherePoint>>& points,
                             const SpherePoint& alpha) {
    std::string out = "n,re,im,dist_to_alpha\n";
    for (const auto& [n, p] : points) {
        out += std::to_string(n);
        out += ',';
        if (p.is_infinity()) {
            out += "inf,inf";
        } else {
            out += format_double(p.value().real());
            out += ',';
            out += format_double(p.value().imag());
        }
        out += ',';
        out += format_double(euclid_distance(p, alpha));
        out += '\n';
    }
    return out;
}

inline std::string separation_csv(const std::vector<std::pair<int, double>>& profile) {
    std::string out = "n,separation\n";
    for (const auto& [n, sep] : profile) {
        out += std::to_string(n);
        out += ',';
        out += format_double(sep);
        out += '\n';
    }
    return out;
}

}  // namespace mobstab
