// mobstab command line: classify maps, run orbits and horocycles, build and
// verify non-stability witnesses, and emit JSON/CSV/SVG artifacts.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobstab/horocycle.hpp"
#include "mobstab/mobius.hpp"
#include "mobstab/orbit.hpp"
#include "mobstab/realline.hpp"
#include "mobstab/serialize.hpp"
#include "mobstab/sphere.hpp"
#include "mobstab/stability.hpp"
#include "mobstab/svg.hpp"

namespace {

using namespace mobstab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDomain = 3;       // not parabolic / singular matrix
constexpr int kExitInconclusive = 4;

struct JobConfig {
    std::string map_text;
    bool real = false;
    std::string b0_text = "0";
    std::string z_text;
    double epsilon = 0.1;
    int horizon = 200;
    int forward = 20;
    int backward = 0;
    bool do_verify = false;
    int min_exceed = 1;
    double threshold = 1.0;
    double tol = kDefaultPointTol;
    int family = 3;
    std::string sweep;
    std::string scene = "separation";
    std::string format = "json";
    std::string out_path;
    std::string in_path;
};

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        const double v = std::stod(item, &pos);
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw std::invalid_argument("bad number: '" + item + "'");
        values.push_back(v);
    }
    return values;
}

Complex parse_complex(const std::string& text) {
    const auto v = parse_csv_doubles(text);
    if (v.size() == 1) return Complex(v[0], 0.0);
    if (v.size() == 2) return Complex(v[0], v[1]);
    throw std::invalid_argument("expected 're' or 're,im': '" + text + "'");
}

struct ParsedMap {
    MobiusMap map;                       // always set, normalized
    std::optional<RealMobiusMap> real;   // set when coefficients are real
};

ParsedMap parse_map(const std::string& text, bool force_real) {
    const auto v = parse_csv_doubles(text);
    ParsedMap pm;
    if (v.size() == 4) {
        pm.real = normalize_real(v[0], v[1], v[2], v[3]);
        pm.map = to_complex(*pm.real);
        return pm;
    }
    if (v.size() == 8) {
        if (force_real) throw std::invalid_argument("--real expects 4 coefficients");
        pm.map = normalize(Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]),
                           Complex(v[6], v[7]));
        return pm;
    }
    throw std::invalid_argument("--map expects 4 real or 8 (re,im) comma-separated values");
}

std::string format_complex(Complex z) {
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.real())))
        return format_double(z.real());
    return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) +
           "i";
}

void emit(const JobConfig& cfg, const std::string& body) {
    if (cfg.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + cfg.out_path);
    f << body;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- classify

int run_classify(const JobConfig& cfg) {
    const ParsedMap pm = parse_map(cfg.map_text, cfg.real);
    const MapClass cls = classify(pm.map);
    json out;
    out["class"] = name(cls.kind);
    if (cls.kind == MapKind::Parabolic) {
        out["sign"] = cls.sign;
        out["alpha"] = point_to_json(fixed_point(pm.map));
    } else {
        out["trace"] = json::array({pm.map.trace().real(), pm.map.trace().imag()});
    }
    emit(cfg, dump(out));
    if (cls.kind != MapKind::Parabolic) {
        std::cerr << "not parabolic (trace " << format_complex(pm.map.trace()) << ")\n";
        return kExitDomain;
    }
    return kExitOk;
}

// ------------------------------------------------------------------- orbit

std::vector<std::pair<int, SpherePoint>> orbit_rows(const Orbit& orbit) {
    std::vector<std::pair<int, SpherePoint>> rows;
    rows.reserve(orbit.points.size());
    for (int k = -orbit.backward; k <= orbit.forward(); ++k) rows.emplace_back(k, orbit.at(k));
    return rows;
}

int run_orbit(const JobConfig& cfg) {
    const ParsedMap pm = parse_map(cfg.map_text, cfg.real);
    if (!is_parabolic(pm.map)) {
        std::cerr << "not parabolic (trace " << format_complex(pm.map.trace()) << ")\n";
        return kExitDomain;
    }
    const SpherePoint b0(parse_complex(cfg.b0_text));
    const Orbit orbit = iterate(pm.map, b0, cfg.forward, cfg.backward);
    const SpherePoint alpha = fixed_point(pm.map);
    const auto rows = orbit_rows(orbit);

    if (cfg.format == "csv") {
        emit(cfg, orbit_csv(rows, alpha));
    } else if (cfg.format == "svg") {
        emit(cfg, render_orbit_svg(rows, alpha));
    } else {
        json out;
        out["alpha"] = point_to_json(alpha);
        out["direction"] = orbit.direction;
        auto& arr = out["orbit"] = json::array();
        for (const auto& [n, p] : rows) {
            json row;
            row["n"] = n;
            row["point"] = point_to_json(p);
            row["dist_to_alpha"] = json_number(euclid_distance(p, alpha));
            arr.push_back(row);
        }
        emit(cfg, dump(out));
    }
    return kExitOk;
}

// --------------------------------------------------------------- horocycle

std::vector<Horocycle> horocycle_family(const MobiusMap& g, const Horocycle& through, int count) {
    std::vector<Horocycle> circles;
    if (through.kind != Horocycle::Kind::Circle || count < 1) return circles;
    const Complex alpha = fixed_point(g).value();
    for (int j = 1; j <= count; ++j) {
        const double factor = std::pow(2.0, j - 1 - (count - 1) / 2.0);
        const Complex p = alpha + (through.center - alpha) * factor;
        circles.push_back(Horocycle::circle(p, std::abs(p - alpha)));
    }
    return circles;
}

int run_horocycle(const JobConfig& cfg) {
    const ParsedMap pm = parse_map(cfg.map_text, cfg.real);
    if (cfg.z_text.empty()) throw std::invalid_argument("horocycle: --z is required");
    const SpherePoint z(parse_complex(cfg.z_text));
    const Horocycle hc = horocycle_through(pm.map, z, cfg.tol);

    if (cfg.format == "svg") {
        emit(cfg, render_horocycles_svg(pm.map, horocycle_family(pm.map, hc, cfg.family)));
        return kExitOk;
    }
    json out;
    if (hc.kind == Horocycle::Kind::Circle) {
        out["kind"] = "circle";
        out["center"] = json::array({hc.center.real(), hc.center.imag()});
        out["radius"] = hc.radius;
    } else {
        out["kind"] = "extended_line";
        out["anchor"] = json::array({hc.anchor.real(), hc.anchor.imag()});
        out["direction"] = json::array({hc.direction.real(), hc.direction.imag()});
    }
    emit(cfg, dump(out));
    return kExitOk;
}

// ----------------------------------------------------------------- witness

struct WitnessRun {
    PseudoOrbit pseudo;
    std::optional<StabilityVerdict> verdict;
};

bool is_translation(const MobiusMap& g) { return std::abs(g.c) < kPoleGuard; }

PseudoOrbit build_any_witness(const ParsedMap& pm, const SpherePoint& b0, double epsilon,
                              int horizon, bool real_mode) {
    if (is_translation(pm.map)) {
        const MapClass cls = classify(pm.map);
        if (cls.kind != MapKind::Parabolic && cls.kind != MapKind::Identity)
            throw NotParabolic("witness: map is not parabolic (trace " +
                               format_complex(pm.map.trace()) + ")");
        const Complex q = pm.map.b / pm.map.d;
        return build_translation_witness(q, b0.value(), epsilon, horizon);
    }
    if (real_mode) {
        if (!pm.real) throw std::invalid_argument("witness: --real expects 4 real coefficients");
        if (b0.is_infinity() || std::abs(b0.value().imag()) > 0.0)
            throw std::invalid_argument("witness: --real expects a real --b0");
        return build_real_witness(*pm.real, b0.value().real(), epsilon, horizon);
    }
    return build_complex_witness(pm.map, b0, epsilon, horizon);
}

// With --verify the horizon is treated as a minimum and extended so that
// min_exceed periodic exceedances fit.
int verified_horizon(const PseudoOrbit& po, const JobConfig& cfg) {
    if (po.period > 0) {
        const std::int64_t needed = po.preperiod + static_cast<std::int64_t>(cfg.min_exceed) * po.period;
        return static_cast<int>(std::max<std::int64_t>(cfg.horizon, needed));
    }
    if (po.epsilon > 0.0) {
        const std::int64_t first = static_cast<std::int64_t>(std::ceil(cfg.threshold / po.epsilon));
        return static_cast<int>(std::max<std::int64_t>(cfg.horizon, first + cfg.min_exceed));
    }
    return cfg.horizon;
}

WitnessRun run_one_witness(const ParsedMap& pm, const JobConfig& cfg, double epsilon) {
    const SpherePoint b0(parse_complex(cfg.b0_text));
    WitnessRun run;
    run.pseudo = build_any_witness(pm, b0, epsilon, cfg.horizon, cfg.real);
    if (cfg.do_verify) {
        const int h = verified_horizon(run.pseudo, cfg);
        if (h > run.pseudo.horizon()) run.pseudo = build_any_witness(pm, b0, epsilon, h, cfg.real);
        run.verdict = verify(pm.map, run.pseudo, b0, cfg.min_exceed, cfg.threshold);
    }
    return run;
}

std::vector<double> sweep_values(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("--sweep-epsilon expects a:b:n");
    const double a = std::stod(parts[0]);
    const double b = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    if (n < 1) throw std::invalid_argument("--sweep-epsilon: n must be >= 1");
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        if (i == 0)
            values.push_back(a);
        else if (i == n - 1)
            values.push_back(b);
        else
            values.push_back(a + (b - a) * i / static_cast<double>(n - 1));
    }
    return values;
}

int run_witness(const JobConfig& cfg) {
    const ParsedMap pm = parse_map(cfg.map_text, cfg.real);
    if (!(cfg.epsilon > 0.0) && cfg.sweep.empty() && !is_translation(pm.map))
        throw InvalidEpsilon("witness: --epsilon must be > 0");

    if (!cfg.sweep.empty()) {
        const std::vector<double> eps = sweep_values(cfg.sweep);
        std::vector<std::future<WitnessRun>> jobs;
        jobs.reserve(eps.size());
        for (double e : eps)
            jobs.push_back(std::async(std::launch::async,
                                      [&pm, &cfg, e] { return run_one_witness(pm, cfg, e); }));
        json rows = json::array();
        bool all_witnessed = true;
        for (size_t i = 0; i < jobs.size(); ++i) {
            const WitnessRun run = jobs[i].get();
            json row;
            row["epsilon"] = eps[i];
            row["preperiod"] = run.pseudo.preperiod;
            row["period"] = run.pseudo.period;
            if (run.verdict) {
                row["verdict"] = to_json(*run.verdict);
                all_witnessed =
                    all_witnessed && run.verdict->conclusion == Conclusion::NonStabilityWitnessed;
            }
            rows.push_back(row);
        }
        json out;
        out["sweep"] = rows;
        emit(cfg, dump(out));
        return (cfg.do_verify && !all_witnessed) ? kExitInconclusive : kExitOk;
    }

    const WitnessRun run = run_one_witness(pm, cfg, cfg.epsilon);
    if (cfg.format == "csv" || cfg.format == "svg") {
        const SpherePoint b0(parse_complex(cfg.b0_text));
        const auto profile = separation_profile(pm.map, run.pseudo, b0);
        emit(cfg, cfg.format == "csv" ? separation_csv(profile)
                                      : render_separation_svg(profile, cfg.threshold));
    } else {
        json out;
        out["pseudo_orbit"] = to_json(run.pseudo);
        if (run.verdict) out["verdict"] = to_json(*run.verdict);
        emit(cfg, dump(out));
    }
    if (run.verdict && run.verdict->conclusion == Conclusion::Inconclusive)
        return kExitInconclusive;
    return kExitOk;
}

// ------------------------------------------------------------------ verify

int run_verify(const JobConfig& cfg) {
    const ParsedMap pm = parse_map(cfg.map_text, cfg.real);
    if (cfg.in_path.empty()) throw std::invalid_argument("verify: --in is required");
    std::ifstream f(cfg.in_path);
    if (!f) throw std::invalid_argument("cannot open input file: " + cfg.in_path);
    json j;
    f >> j;
    const PseudoOrbit po = pseudo_orbit_from_json(j.contains("pseudo_orbit") ? j["pseudo_orbit"] : j);
    const SpherePoint b0(parse_complex(cfg.b0_text));
    const StabilityVerdict verdict = verify(pm.map, po, b0, cfg.min_exceed, cfg.threshold);
    emit(cfg, dump(to_json(verdict)));
    return verdict.conclusion == Conclusion::Inconclusive ? kExitInconclusive : kExitOk;
}

// -------------------------------------------------------------------- plot

int run_plot(const JobConfig& cfg) {
    JobConfig sub = cfg;
    sub.format = "svg";
    if (cfg.scene == "separation") return run_witness(sub);
    if (cfg.scene == "orbit") return run_orbit(sub);
    if (cfg.scene == "horocycles") return run_horocycle(sub);
    throw std::invalid_argument("plot: --scene must be separation, orbit or horocycles");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parabolic Moebius dynamics: orbits, horocycles and "
                 "non-stability witnesses"};
    app.require_subcommand(1);
    JobConfig cfg;

    auto add_common = [&cfg](CLI::App* sub) {
        sub->add_option("--map", cfg.map_text,
                        "map coefficients: a,b,c,d (real) or 8 re,im pairs (complex)")
            ->required();
        sub->add_flag("--real", cfg.real, "treat the map and data as real");
        sub->add_option("--tol", cfg.tol, "point comparison tolerance");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "json|csv|svg")
            ->check(CLI::IsMember({"json", "csv", "svg"}));
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify a map, report alpha");
    add_common(classify_cmd);

    CLI::App* orbit_cmd = app.add_subcommand("orbit", "iterate a parabolic map");
    add_common(orbit_cmd);
    orbit_cmd->add_option("--b0", cfg.b0_text, "starting point re[,im]");
    orbit_cmd->add_option("--forward", cfg.forward, "forward steps");
    orbit_cmd->add_option("--backward", cfg.backward, "backward steps");

    CLI::App* horo_cmd = app.add_subcommand("horocycle", "horocycle through a point");
    add_common(horo_cmd);
    horo_cmd->add_option("--z", cfg.z_text, "point re[,im] the horocycle passes through");
    horo_cmd->add_option("--family", cfg.family, "number of circles in the SVG family");

    CLI::App* witness_cmd =
        app.add_subcommand("witness", "build a non-stability pseudo-orbit witness");
    add_common(witness_cmd);
    witness_cmd->add_option("--b0", cfg.b0_text, "exact-orbit start re[,im]");
    witness_cmd->add_option("--epsilon", cfg.epsilon, "pseudo-orbit defect bound");
    witness_cmd->add_option("--horizon", cfg.horizon,
                            "sequence length (extended as needed under --verify)")
        ->check(CLI::Range(1, 100000000));
    witness_cmd->add_flag("--verify", cfg.do_verify, "verify the witness after building");
    witness_cmd->add_option("--min-exceed", cfg.min_exceed,
                            "required number of indices with separation >= threshold");
    witness_cmd->add_option("--threshold", cfg.threshold, "separation threshold (default 1)");
    witness_cmd->add_option("--sweep-epsilon", cfg.sweep, "a:b:n sweep over epsilon");

    CLI::App* verify_cmd = app.add_subcommand("verify", "verify a stored pseudo-orbit");
    add_common(verify_cmd);
    verify_cmd->add_option("--b0", cfg.b0_text, "exact-orbit start re[,im]");
    verify_cmd->add_option("--in", cfg.in_path, "pseudo-orbit JSON file")->required();
    verify_cmd->add_option("--min-exceed", cfg.min_exceed, "required exceed count");
    verify_cmd->add_option("--threshold", cfg.threshold, "separation threshold (default 1)");

    CLI::App* plot_cmd = app.add_subcommand("plot", "render an SVG scene");
    add_common(plot_cmd);
    plot_cmd->add_option("--scene", cfg.scene, "separation|orbit|horocycles");
    plot_cmd->add_option("--b0", cfg.b0_text, "starting point re[,im]");
    plot_cmd->add_option("--z", cfg.z_text, "horocycle point re[,im]");
    plot_cmd->add_option("--family", cfg.family, "horocycle family size");
    plot_cmd->add_option("--epsilon", cfg.epsilon, "pseudo-orbit defect bound");
    plot_cmd->add_option("--horizon", cfg.horizon, "sequence length")
        ->check(CLI::Range(1, 100000000));
    plot_cmd->add_option("--forward", cfg.forward, "forward steps");
    plot_cmd->add_option("--backward", cfg.backward, "backward steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (app.got_subcommand(classify_cmd)) return run_classify(cfg);
        if (app.got_subcommand(orbit_cmd)) return run_orbit(cfg);
        if (app.got_subcommand(horo_cmd)) return run_horocycle(cfg);
        if (app.got_subcommand(witness_cmd)) return run_witness(cfg);
        if (app.got_subcommand(verify_cmd)) return run_verify(cfg);
        if (app.got_subcommand(plot_cmd)) return run_plot(cfg);
    } catch (const SingularMatrix& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
    } catch (const NotParabolic& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
    } catch (const FixesInfinity& e) {
        std::cerr << e.what() << "\n";
        return kExitDomain;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}
