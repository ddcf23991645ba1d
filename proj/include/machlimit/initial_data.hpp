#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "machlimit/spectral_field.hpp"

namespace machlimit {

enum class InitKind { random_band, taylor_green, remark_example };

InitKind init_kind_from_string(const std::string& s);
std::string to_string(InitKind k);

struct InitParams {
    // random_band
    int kmax = 4;
    double amplitude_a = 0.0; // 0 keeps the acoustic component well-prepared
    double amplitude_u = 0.5;
    bool solenoidal_u = true;

    // remark_example: Pu0 = sin(M x3) (-d2 phi, d1 phi, 0) with phi built
    // from lattice modes |k1|,|k2| <= phi_kmax, k3 = 0
    double oscillation_m = 8.0; // physical frequency; M L / (2 pi) must be integer
    int phi_kmax = 1;
};

/// Deterministic initial data (a0, u0); both fields are Hermitian,
/// dealiased and mean-free. remark_example output is divergence-free
/// exactly and requires d = 3.
std::pair<SpectralField, VectorField> gen_initial_data(InitKind kind, const InitParams& params,
                                                       const Grid& grid, std::uint64_t seed);

} // namespace machlimit
