#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mobstab/mobius.hpp"
#include "mobstab/realline.hpp"
#include "mobstab/sphere.hpp"

namespace testutil {

using mobstab::Complex;
using mobstab::MobiusMap;
using mobstab::RealMobiusMap;

inline std::mt19937 seeded_rng(unsigned seed) { return std::mt19937(seed); }

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Parabolic map from (alpha, c, s): a = c alpha + s, d = s - c alpha,
// b = -c alpha^2. Determinant is 1 and trace 2s up to rounding; the ranges
// keep every coefficient modulus below 5.
inline MobiusMap parabolic_from(Complex alpha, Complex c, int s) {
    const Complex a = c * alpha + static_cast<double>(s);
    const Complex d = static_cast<double>(s) - c * alpha;
    const Complex b = -c * alpha * alpha;
    return {a, b, c, d};
}

inline MobiusMap random_parabolic(std::mt19937& rng, int sign) {
    const Complex alpha(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5));
    const double mod = uniform(rng, 0.3, 1.5);
    const double phase = uniform(rng, 0.0, 6.283185307179586);
    return parabolic_from(alpha, std::polar(mod, phase), sign);
}

inline MobiusMap random_parabolic(std::mt19937& rng) {
    return random_parabolic(rng, rng() % 2 == 0 ? +1 : -1);
}

// Real parabolic map of the requested orientation class sigma = sign((a+d)c).
inline RealMobiusMap random_real_parabolic(std::mt19937& rng, int sigma) {
    const double alpha = uniform(rng, -1.5, 1.5);
    const int s = rng() % 2 == 0 ? +1 : -1;
    const double c = sigma * s * uniform(rng, 0.3, 1.5);
    const double a = c * alpha + s;
    const double d = s - c * alpha;
    const double b = -c * alpha * alpha;
    return {a, b, c, d};
}

// Random finite point bounded away from a forbidden point.
inline Complex random_point_off(std::mt19937& rng, Complex avoid, double min_dist,
                                double box = 2.0) {
    for (;;) {
        const Complex z(uniform(rng, -box, box), uniform(rng, -box, box));
        if (std::abs(z - avoid) >= min_dist) return z;
    }
}

// ------------------------------------------------------------------- CLI --

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Runs the built CLI binary with shell-quoted args, capturing both streams.
inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() / "mobstab_cli_tests";
    std::filesystem::create_directories(dir);
    const auto out_path = dir / ("out" + std::to_string(counter) + ".txt");
    const auto err_path = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(MOBSTAB_CLI_PATH) + " " + args + " >" + out_path.string() +
                            " 2>" + err_path.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

// ------------------------------------------------------- SVG well-formedness

// Minimal XML well-formedness check for the SVG output: balanced tags,
// quoted attributes, single <svg> root carrying xmlns and version="1.1".
inline bool svg_well_formed(const std::string& s, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    std::vector<std::string> stack;
    bool seen_root = false, root_is_svg = false, root_has_ns = false, root_v11 = false;
    size_t i = 0;
    const size_t n = s.size();
    while (i < n) {
        if (s[i] != '<') {
            if (s[i] == '>') return fail("stray '>'");
            ++i;
            continue;
        }
        if (s.compare(i, 2, "<?") == 0) {
            const size_t end = s.find("?>", i);
            if (end == std::string::npos) return fail("unterminated prolog");
            i = end + 2;
            continue;
        }
        if (s.compare(i, 2, "</") == 0) {
            size_t j = i + 2;
            std::string tag;
            while (j < n && s[j] != '>') tag += s[j++];
            if (j == n) return fail("unterminated close tag");
            if (stack.empty() || stack.back() != tag) return fail("mismatched </" + tag + ">");
            stack.pop_back();
            i = j + 1;
            continue;
        }
        size_t j = i + 1;
        std::string tag;
        while (j < n && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '>' && s[j] != '/')
            tag += s[j++];
        if (tag.empty()) return fail("empty tag name");
        bool self_close = false;
        bool has_ns = false, has_v11 = false;
        while (j < n && s[j] != '>') {
            if (s[j] == '/') {
                self_close = true;
                ++j;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(s[j]))) {
                ++j;
                continue;
            }
            std::string attr;
            while (j < n && s[j] != '=' && !std::isspace(static_cast<unsigned char>(s[j])) &&
                   s[j] != '>')
                attr += s[j++];
            if (j == n || s[j] != '=') return fail("attribute '" + attr + "' without value");
            ++j;
            if (j == n || s[j] != '"') return fail("unquoted attribute value");
            ++j;
            std::string value;
            while (j < n && s[j] != '"') {
                if (s[j] == '<') return fail("'<' inside attribute value");
                value += s[j++];
            }
            if (j == n) return fail("unterminated attribute value");
            ++j;
            if (attr == "xmlns") has_ns = true;
            if (attr == "version" && value == "1.1") has_v11 = true;
        }
        if (j == n) return fail("unterminated tag <" + tag);
        ++j;
        if (stack.empty()) {
            if (seen_root && !self_close) return fail("multiple roots");
            if (!seen_root) {
                seen_root = true;
                root_is_svg = tag == "svg";
                root_has_ns = has_ns;
                root_v11 = has_v11;
            }
        }
        if (!self_close) stack.push_back(tag);
        i = j;
    }
    if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
    if (!seen_root || !root_is_svg) return fail("root element is not <svg>");
    if (!root_has_ns) return fail("missing xmlns on <svg>");
    if (!root_v11) return fail("missing version=\"1.1\" on <svg>");
    return true;
}

}  // namespace testutil
