#include "machlimit/initial_data.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "machlimit/operators.hpp"
#include "machlimit/probes.hpp"
#include "machlimit/rng.hpp"

namespace machlimit {

InitKind init_kind_from_string(const std::string& s) {
    if (s == "random_band") return InitKind::random_band;
    if (s == "taylor_green") return InitKind::taylor_green;
    if (s == "remark_example") return InitKind::remark_example;
    throw std::invalid_argument("unknown init kind '" + s + "'");
}

std::string to_string(InitKind k) {
    switch (k) {
        case InitKind::random_band: return "random_band";
        case InitKind::taylor_green: return "taylor_green";
        case InitKind::remark_example: return "remark_example";
    }
    return "?";
}

namespace {

void rescale_max(SpectralField& f, double target) {
    if (target <= 0.0) {
        f *= 0.0;
        return;
    }
    double peak = lp_norm(f, std::numeric_limits<double>::infinity());
    if (peak > 0.0) f *= target / peak;
}

std::pair<SpectralField, VectorField> random_band(const InitParams& p, const Grid& grid,
                                                  std::uint64_t seed) {
    Rng rng(seed);
    SpectralField a0 = sample_band_limited(grid, rng, p.kmax, 1.0);
    rescale_max(a0, p.amplitude_a);
    VectorField u0 = zero_vector_field(grid);
    for (int axis = 0; axis < grid.dim(); ++axis)
        u0[axis] = sample_band_limited(grid, rng, p.kmax, 1.0);
    if (p.solenoidal_u) u0 = helmholtz_p(u0);
    double peak = 0.0;
    for (const auto& comp : u0)
        peak = std::max(peak, lp_norm(comp, std::numeric_limits<double>::infinity()));
    if (peak > 0.0)
        for (auto& comp : u0) comp *= p.amplitude_u / peak;
    return {std::move(a0), std::move(u0)};
}

std::pair<SpectralField, VectorField> taylor_green(const Grid& grid) {
    SpectralField a0(grid);
    VectorField u0 = zero_vector_field(grid);
    // lattice-mode-1 vortex: (sin x cos y, -cos x sin y), times cos z in 3d
    const int n = grid.n();
    const double step = 2.0 * M_PI / n;
    std::vector<double> v1(grid.size()), v2(grid.size());
    std::size_t idx = 0;
    if (grid.dim() == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx) {
                double x = i * step, y = j * step;
                v1[idx] = std::sin(x) * std::cos(y);
                v2[idx] = -std::cos(x) * std::sin(y);
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    double x = i * step, y = j * step, z = k * step;
                    v1[idx] = std::sin(x) * std::cos(y) * std::cos(z);
                    v2[idx] = -std::cos(x) * std::sin(y) * std::cos(z);
                }
    }
    u0[0] = SpectralField::from_physical(grid, v1);
    u0[1] = SpectralField::from_physical(grid, v2);
    return {std::move(a0), std::move(u0)};
}

std::pair<SpectralField, VectorField> remark_example(const InitParams& p, const Grid& grid,
                                                     std::uint64_t seed) {
    if (grid.dim() != 3)
        throw std::invalid_argument("remark_example requires d = 3");
    const double m_real = p.oscillation_m / grid.xi_unit();
    const int m3 = static_cast<int>(std::lround(m_real));
    if (std::abs(m_real - m3) > 1e-9 || m3 <= 0)
        throw std::invalid_argument(
            "remark_example: M must be a positive integer multiple of 2*pi/L");
    if (m3 + p.phi_kmax > grid.dealias_limit())
        throw std::invalid_argument("remark_example: M beyond dealias radius");

    // band-limited stream profile phi(x1, x2)
    Rng rng(seed);
    SpectralField phi(grid);
    for (int k1 = -p.phi_kmax; k1 <= p.phi_kmax; ++k1)
        for (int k2 = -p.phi_kmax; k2 <= p.phi_kmax; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            phi.at_mode(k1, k2, 0) = cplx(rng.normal(), rng.normal());
        }
    phi.enforce_hermitian();
    phi.set_mean(cplx(0.0, 0.0));

    VectorField profile = zero_vector_field(grid);
    profile[0] = derivative(phi, 1);
    profile[0] *= -1.0;
    profile[1] = derivative(phi, 0);

    // multiply by sin(M x3): shift k3 by +-m3 with weights -+ 1/(2i)
    VectorField u0 = zero_vector_field(grid);
    const cplx half_over_i(0.0, -0.5); // 1/(2i)
    for (int axis = 0; axis < 2; ++axis) {
        for (int k1 = -p.phi_kmax; k1 <= p.phi_kmax; ++k1)
            for (int k2 = -p.phi_kmax; k2 <= p.phi_kmax; ++k2) {
                cplx c = profile[axis].at_mode(k1, k2, 0);
                if (c == cplx(0.0, 0.0)) continue;
                u0[axis].at_mode(k1, k2, m3) += half_over_i * c;
                u0[axis].at_mode(k1, k2, -m3) -= half_over_i * c;
            }
    }
    SpectralField a0(grid);
    return {std::move(a0), std::move(u0)};
}

} // namespace

std::pair<SpectralField, VectorField> gen_initial_data(InitKind kind, const InitParams& params,
                                                       const Grid& grid, std::uint64_t seed) {
    std::pair<SpectralField, VectorField> out = [&] {
        switch (kind) {
            case InitKind::random_band: return random_band(params, grid, seed);
            case InitKind::taylor_green: return taylor_green(grid);
            case InitKind::remark_example: return remark_example(params, grid, seed);
        }
        throw std::logic_error("unreachable");
    }();
    out.first.dealias();
    out.first.set_mean(cplx(0.0, 0.0));
    for (auto& comp : out.second) {
        comp.dealias();
        comp.set_mean(cplx(0.0, 0.0));
    }
    return out;
}

} // namespace machlimit
