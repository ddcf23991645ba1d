#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "machlimit/initial_data.hpp"

namespace machlimit {

/// Runtime configuration, parsed from a `key = value` text file
/// (# comments allowed). Unknown keys are rejected.
struct RunConfig {
    std::string system = "compressible"; // or "incompressible"
    int d = 2;
    int n = 64;
    double L = 2.0 * M_PI;
    double eps = 0.1;
    double gamma = 1.4;
    double mu = 0.5;
    double lambda = 0.0;
    double dt = 0.0;          // 0: spec'd default policy
    double dt_over_eps = 0.0; // when set, dt = dt_over_eps * eps (per member)
    double t_end = 1.0;
    double cfl = 0.4;
    int sample_stride = 1;
    std::uint64_t seed = 1;
    bool nonlinear = true;
    double positivity_floor = 0.1;

    std::string init = "random_band";
    int init_kmax = 4;
    double init_amp_a = 0.0;
    double init_amp_u = 0.5;
    bool init_solenoidal = true;
    double init_m = 8.0;
    int init_phi_kmax = 1;

    // diagnostics exponents
    double q = 3.0;
    double r = 12.0;
    double alpha = 2.0;
    double beta0 = 1.0;
    bool validate = true; // set false to run with inadmissible exponents

    // sweep controls
    std::vector<double> eps_list;
    double wref_dt = 0.0;    // w-reference snapshot spacing; 0: t_end/400
    int snapshot_stride = 0; // store fields every k-th sample; 0: ends only

    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    /// Resolved snapshot in the same key = value format (deterministic).
    std::string to_text() const;

    InitParams init_params() const;
    InitKind init_kind() const { return init_kind_from_string(init); }
};

} // namespace machlimit
