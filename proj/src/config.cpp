#include "anelastic/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "anelastic/errors.hpp"

namespace anelastic {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigInvalid(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigInvalid(where + ": unknown key \"" + it.key() + "\"");
}

double get_number(const nlohmann::json& j, const std::string& key, double fallback,
                  const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigInvalid(where + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

int get_int(const nlohmann::json& j, const std::string& key, int fallback,
            const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigInvalid(where + "." + key + ": expected an integer");
    return j.at(key).get<int>();
}

std::string get_string(const nlohmann::json& j, const std::string& key,
                       const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string())
        throw ConfigInvalid(where + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

}  // namespace

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

// ---------------------------------------------------------------- density

DensityConfig DensityConfig::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"kind", "constant_value", "alpha", "epsilon"}, "density");
    DensityConfig c;
    if (!j.contains("kind")) throw ConfigInvalid("density.kind is required");
    c.kind = get_string(j, "kind", c.kind, "density");
    c.constant_value = get_number(j, "constant_value", c.constant_value, "density");
    c.alpha = get_number(j, "alpha", c.alpha, "density");
    c.has_epsilon = j.contains("epsilon");
    c.epsilon = get_number(j, "epsilon", c.epsilon, "density");
    c.validate();
    return c;
}

void DensityConfig::validate() const {
    if (kind != "constant" && kind != "vacuum" && kind != "regularized")
        throw ConfigInvalid("density.kind must be one of constant|vacuum|regularized, got \"" +
                            kind + "\"");
    if (kind == "constant") {
        if (!(constant_value > 0.0) || !std::isfinite(constant_value))
            throw ConfigInvalid("density.constant_value must be positive");
        return;
    }
    if (!(alpha > 1.5))
        throw ConfigInvalid("density.alpha must exceed 3/2 (got " + std::to_string(alpha) + ")");
    if (kind == "vacuum") {
        if (!has_epsilon)
            throw ConfigInvalid(
                "density.kind=vacuum vanishes at the boundary and cannot be time-stepped "
                "directly; provide density.epsilon to select the regularized profile");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw ConfigInvalid("density.epsilon must lie in (0,1)");
    }
    if (kind == "regularized") {
        if (!has_epsilon) throw ConfigInvalid("density.kind=regularized requires epsilon");
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw ConfigInvalid("density.epsilon must lie in (0,1)");
    }
}

DensityProfile DensityConfig::make_profile() const {
    validate();
    if (kind == "constant") return DensityProfile::constant(constant_value);
    return DensityProfile::regularized(alpha, epsilon);
}

nlohmann::json DensityConfig::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    if (kind == "constant") {
        j["constant_value"] = constant_value;
    } else {
        j["alpha"] = alpha;
        if (has_epsilon) j["epsilon"] = epsilon;
    }
    return j;
}

// ---------------------------------------------------------------- initial

InitialConfig InitialConfig::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"type", "amplitude", "delta", "x_mode", "seed"}, "initial");
    InitialConfig c;
    c.type = get_string(j, "type", c.type, "initial");
    c.amplitude = get_number(j, "amplitude", c.amplitude, "initial");
    c.delta = get_number(j, "delta", c.delta, "initial");
    c.x_mode = get_int(j, "x_mode", c.x_mode, "initial");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw ConfigInvalid("initial.seed: expected an integer");
        c.seed = j.at("seed").get<uint64_t>();
    }
    c.validate();
    return c;
}

void InitialConfig::validate() const {
    if (type != "stream_bump" && type != "taylor_green" && type != "random")
        throw ConfigInvalid("initial.type must be one of stream_bump|taylor_green|random");
    if (!std::isfinite(amplitude))
        throw ConfigInvalid("initial.amplitude must be finite");
    if (type == "stream_bump") {
        if (!(delta > 0.0 && delta < 0.25))
            throw ConfigInvalid("initial.delta must lie in (0, 1/4)");
        if (x_mode < 1) throw ConfigInvalid("initial.x_mode must be >= 1");
    }
}

nlohmann::json InitialConfig::to_json() const {
    nlohmann::json j;
    j["type"] = type;
    j["amplitude"] = amplitude;
    if (type == "stream_bump") {
        j["delta"] = delta;
        j["x_mode"] = x_mode;
    }
    if (type == "random") j["seed"] = seed;
    return j;
}

// ---------------------------------------------------------------- run

double RunConfig::rk4_dt_bound() const {
    const double pi = std::acos(-1.0);
    return 2.8 / (2.0 * pi * pi * double(m) * double(m));
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"m", "dt", "t_end", "scheme", "cadence", "reproject_every", "density",
                         "initial"},
                        "config");
    RunConfig c;
    c.m = get_int(j, "m", c.m, "config");
    c.dt = get_number(j, "dt", c.dt, "config");
    c.t_end = get_number(j, "t_end", c.t_end, "config");
    c.scheme = get_string(j, "scheme", c.scheme, "config");
    c.cadence = get_int(j, "cadence", c.cadence, "config");
    c.reproject_every = get_int(j, "reproject_every", c.reproject_every, "config");
    if (j.contains("density")) c.density = DensityConfig::from_json(j.at("density"));
    if (j.contains("initial")) c.initial = InitialConfig::from_json(j.at("initial"));
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_json(parse_json_file(path));
}

void RunConfig::validate() const {
    if (m < 1) throw ConfigInvalid("m must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigInvalid("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigInvalid("t_end must be >= 0");
    if (scheme != "rk4" && scheme != "imex-euler")
        throw ConfigInvalid("scheme must be rk4 or imex-euler, got \"" + scheme + "\"");
    if (cadence < 1) throw ConfigInvalid("cadence must be >= 1");
    if (reproject_every < 0) throw ConfigInvalid("reproject_every must be >= 0");
    if (scheme == "rk4" && dt > rk4_dt_bound())
        throw ConfigInvalid("dt exceeds the rk4 stability validation bound " +
                            std::to_string(rk4_dt_bound()) + " for m=" + std::to_string(m));
    density.validate();
    initial.validate();
    if (initial.type == "taylor_green") {
        if (m < 2) throw ConfigInvalid("taylor_green initial data requires m >= 2");
        if (density.kind != "constant" || density.constant_value != 1.0)
            throw ConfigInvalid("taylor_green initial data requires constant density 1");
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["m"] = m;
    j["dt"] = dt;
    j["t_end"] = t_end;
    j["scheme"] = scheme;
    j["cadence"] = cadence;
    if (reproject_every > 0) j["reproject_every"] = reproject_every;
    j["density"] = density.to_json();
    j["initial"] = initial.to_json();
    return j;
}

// ---------------------------------------------------------------- sweep

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"m", "dt", "t_end", "scheme", "cadence", "reproject_every", "density",
                         "initial", "j_min", "j_max"},
                        "sweep");
    SweepConfig s;
    nlohmann::json base = j;
    base.erase("j_min");
    base.erase("j_max");
    // The swept runs supply epsilon themselves; insert a placeholder so the
    // base config validates.
    if (base.contains("density") && base.at("density").is_object() &&
        !base.at("density").contains("epsilon"))
        base["density"]["epsilon"] = 0.5;
    s.base = RunConfig::from_json(base);
    s.j_min = get_int(j, "j_min", s.j_min, "sweep");
    s.j_max = get_int(j, "j_max", s.j_max, "sweep");
    s.validate();
    return s;
}

SweepConfig SweepConfig::from_file(const std::string& path) {
    return from_json(parse_json_file(path));
}

void SweepConfig::validate() const {
    base.validate();
    if (base.density.kind == "constant")
        throw ConfigInvalid("sweep requires a vacuum or regularized density kind");
    if (j_min < 1) throw ConfigInvalid("sweep.j_min must be >= 1");
    if (j_max < j_min + 1)
        throw ConfigInvalid("sweep.j_max must exceed j_min (need at least two runs)");
}

nlohmann::json SweepConfig::to_json() const {
    nlohmann::json j = base.to_json();
    j["density"].erase("epsilon");
    j["j_min"] = j_min;
    j["j_max"] = j_max;
    return j;
}

// ---------------------------------------------------------------- probe

ProbeConfig ProbeConfig::from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"m", "dt", "t_end", "scheme", "cadence", "reproject_every", "density",
                         "initial", "eta", "x_mode2", "delta2"},
                        "probe");
    ProbeConfig p;
    nlohmann::json base = j;
    base.erase("eta");
    base.erase("x_mode2");
    base.erase("delta2");
    p.base = RunConfig::from_json(base);
    p.eta = get_number(j, "eta", p.eta, "probe");
    p.x_mode2 = get_int(j, "x_mode2", p.x_mode2, "probe");
    p.delta2 = get_number(j, "delta2", p.delta2, "probe");
    p.validate();
    return p;
}

ProbeConfig ProbeConfig::from_file(const std::string& path) {
    return from_json(parse_json_file(path));
}

void ProbeConfig::validate() const {
    base.validate();
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigInvalid("probe.eta must be positive");
    if (x_mode2 < 1) throw ConfigInvalid("probe.x_mode2 must be >= 1");
    if (!(delta2 > 0.0 && delta2 < 0.25)) throw ConfigInvalid("probe.delta2 must lie in (0,1/4)");
}

nlohmann::json ProbeConfig::to_json() const {
    nlohmann::json j = base.to_json();
    j["eta"] = eta;
    j["x_mode2"] = x_mode2;
    j["delta2"] = delta2;
    return j;
}

}  // namespace anelastic
