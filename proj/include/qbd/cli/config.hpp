#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"

namespace qbd::cli {

using json = nlohmann::ordered_json;

/// Thrown on config validation failure; carries field-level messages.
struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> list);
};

struct RunConfig {
    BathParams params;
    std::string units = "reduced"; // "reduced" (k_B = 1) or "si" (T in kelvin)

    TimeGrid time_grid{0.0, 0.01, 16384};
    SpaceGrid space_grid{16.0, 256, true};

    std::string potential_type = "free"; // free | harmonic | double_well | tabulated
    double harmonic_k = 1.0;
    double harmonic_center = 0.0;
    double dw_a = 1.0;
    double dw_b = 1.0;
    std::string tabulated_file;
    int tabulated_order = 3;

    bool cutoff_auto = true; // solve the cutoff equation (quantum) / Nyquist (classical)
    double cutoff = 0.0;     // explicit Omega when cutoff_auto is false
    int realizations = 64;
    int bands = 16;
    double burn_in = -1.0;
    int hist_bins = 32;
    double hist_halfwidth = 0.0; // 0: auto from thermal width

    double pde_dt = 0.0;
    double t_end = 10.0;
    double p_max = 0.0; // 0: auto 7*sqrt(m*T)
    int np = 97;
    bool quantum_correction = false;
    bool radiation_correction = false;
    int save_every = 0;
    double init_temp_factor = 1.0; // initial state: equilibrium at factor*T

    std::string sweep_key; // "theta" (cutoff) or "omega" (dispersion); empty = default
    double sweep_start = 0.0;
    double sweep_stop = 0.0;
    int sweep_steps = 0;

    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir;
};

/// Parses and fully validates a config document. Unknown keys are rejected
/// (they are usually typos). SI unit conversion happens here: temperatures
/// arrive in kelvin and leave as thermal energies.
RunConfig parse_config(const json& doc);

/// Serializes a config such that parse_config(to_json(c)) reproduces c.
json to_json(const RunConfig& cfg);

langevin::Potential build_potential(const RunConfig& cfg);

} // namespace qbd::cli
