#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "anelastic/density.hpp"

namespace anelastic {

struct DensityConfig {
    std::string kind = "constant";  // constant | smooth | vacuum | regularized
    double constant_value = 1.0;    // constant
    double alpha = 2.0;             // vacuum | regularized
    double epsilon = 0.0;           // regularized (and vacuum regularization)
    bool has_epsilon = false;

    DensityProfile make_profile() const;
    void validate() const;
    nlohmann::json to_json() const;
    static DensityConfig from_json(const nlohmann::json& j);
};

struct InitialConfig {
    std::string type = "stream_bump";  // stream_bump | taylor_green | random
    double amplitude = 0.1;
    double delta = 0.15;  // stream_bump support margin, in (0, 1/4)
    int x_mode = 1;       // stream_bump horizontal wavenumber
    uint64_t seed = 1;    // random

    void validate() const;
    nlohmann::json to_json() const;
    static InitialConfig from_json(const nlohmann::json& j);
};

struct RunConfig {
    int m = 8;
    double dt = 1e-4;
    double t_end = 0.1;
    std::string scheme = "rk4";  // rk4 | imex-euler
    int cadence = 1;             // emit diagnostics every `cadence` steps
    int reproject_every = 0;     // 0: default per scheme (rk4: never, imex: 1)
    DensityConfig density;
    InitialConfig initial;

    /// Explicit-scheme step bound used for validation: 2.8 / (2 pi^2 m^2).
    double rk4_dt_bound() const;

    void validate() const;  // throws ConfigInvalid
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
};

struct SweepConfig {
    RunConfig base;     // density kind must be vacuum (epsilon comes from j)
    int j_min = 2;      // epsilon_j = 2^{-j}
    int j_max = 5;

    void validate() const;
    static SweepConfig from_json(const nlohmann::json& j);
    static SweepConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
};

struct ProbeConfig {
    RunConfig base;
    double eta = 1e-4;    // perturbation magnitude
    int x_mode2 = 2;      // perturbation shape: second stream bump
    double delta2 = 0.2;

    void validate() const;
    static ProbeConfig from_json(const nlohmann::json& j);
    static ProbeConfig from_file(const std::string& path);
    nlohmann::json to_json() const;
};

/// Parse a JSON document, rejecting malformed input with ConfigInvalid.
nlohmann::json parse_json_file(const std::string& path);

}  // namespace anelastic
