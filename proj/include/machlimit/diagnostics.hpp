#pragma once

#include <string>
#include <vector>

#include "machlimit/solvers.hpp"
#include "machlimit/trajectory.hpp"

namespace machlimit {

/// Exponent/cutoff configuration behind every diagnostic quantity.
/// beta0 is only known to exist (not constructible); it is configuration,
/// default 1. Admissibility also requires 0 < eps <= beta0 / alpha.
struct ExponentConfig {
    int d = 2;
    double q = 3.0;
    double r = 12.0;
    double alpha = 2.0;
    double beta0 = 1.0;
    double eps = 0.1;

    double high_cut() const { return beta0 / eps; } // band boundary beta0/eps
};

struct AdmissibilityCheck {
    std::string condition;
    bool ok = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct AdmissibilityVerdict {
    bool admissible = false;
    std::vector<AdmissibilityCheck> checks;

    std::string describe() const;
};

/// Evaluate every exponent condition; the verdict carries the per-condition
/// breakdown instead of throwing.
AdmissibilityVerdict validate_exponents(const ExponentConfig& cfg);

/// Besov norm of the initial datum that controls the solution:
/// high/middle channels of (a0, Qu0) at the q-variant indices, the low
/// channel at the energy indices, plus the full-band norm of Pu0.
/// variant_q = 2 gives the plain energy version.
double data_norm_d(const SpectralField& a0, const VectorField& u0, const LPFilterBank& bank,
                   const ExponentConfig& cfg, double variant_q);

/// Space-time energy norm of a trajectory pair: channels "a" and a velocity
/// channel (key `u_key`, default the full velocity).
double energy_norm_x(const ChannelMap& channels, const ExponentConfig& cfg, const Interval& I,
                     TimeNormFlavor flavor = TimeNormFlavor::chemin_lerner,
                     const std::string& u_key = "u");

struct YParts {
    double high = 0.0; // (a, Qu) high + middle channels
    double low = 0.0;  // (a, Qu) low channel (enters the auxiliary quantity)
    double P = 0.0;    // Pu channel
    double total() const { return high + low + P; }
};

YParts auxiliary_norm_y(const ChannelMap& channels, const ExponentConfig& cfg,
                        const Interval& I,
                        TimeNormFlavor flavor = TimeNormFlavor::chemin_lerner);

/// The smallness quantity combining the energy and auxiliary norms:
///   alpha * eps * ||(a, Qu)||_X + ||(a, u)||_Y
///   + (Y_low)^{1/(r-1)} (||(a, Qu)||_X)^{(r-2)/(r-1)}.
double smallness_quantity_a(const ChannelMap& channels, const ExponentConfig& cfg,
                            const Interval& I,
                            TimeNormFlavor flavor = TimeNormFlavor::chemin_lerner);

/// Same with the incompressible reference added:
/// ||w||_{L^r B^{d/q-1+2/r}_{q,1} cap L^1 B^{d/q+1}_{q,1}} + A.
double smallness_quantity_a_tilde(const ChannelMap& channels, const ChannelMap& w_channels,
                                  const ExponentConfig& cfg, const Interval& I,
                                  TimeNormFlavor flavor = TimeNormFlavor::chemin_lerner);

/// Constructive interval splitter: given samples of t -> ||f(t)||, return
/// cuts {T_0 = 0 < T_1 < ... < T_N = inf} with the L^r norm over each piece
/// <= delta (quadrature tolerance) and interior pieces meeting delta with
/// equality. The sup is found by bisection on the cumulative quadrature.
std::vector<double> split_time_intervals(const std::vector<double>& times,
                                         const std::vector<double>& values, double r,
                                         double delta);

struct LimitNorms {
    double rate_norm = 0.0;
    double critical_norm = 0.0;
};

/// Left sides of the two convergence statements, computed from a
/// compressible run's channels ("a", "Qu", "Pu_minus_w" at p = q):
///   rate:     L^r B^{d/q-1+1/r} of (a, Qu) + (L^inf B^{d/q-1-1/r} cap
///             L^1 B^{d/q+1-1/r}) of Pu - w
///   critical: the same with exponents d/q-1+2/r, d/q-1, d/q+1.
LimitNorms limit_norms(const ChannelMap& comp_channels, const ExponentConfig& cfg,
                       const Interval& I);

struct NormReport {
    double D_eps = 0.0;
    double X_eps = 0.0;
    double Y_high = 0.0;
    double Y_low = 0.0;
    double Y_P = 0.0;
    double A = 0.0;
    double A_tilde = 0.0;
    double limit_lhs_rate_norm = 0.0;
    double limit_lhs_critical_norm = 0.0;
    double interval_t0 = 0.0;
    double interval_t1 = 0.0;
    ExponentConfig cfg;

    std::string to_json() const;
};

struct RateFit {
    std::vector<double> eps_values;
    std::vector<double> error_values;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;

    std::string to_json() const;
    std::string points_csv() const;
};

/// Least-squares slope of log(error) against log(eps). Requires >= 3
/// strictly positive points with strictly decreasing eps.
RateFit convergence_rate_fit(const std::vector<std::pair<double, double>>& points);

} // namespace machlimit
