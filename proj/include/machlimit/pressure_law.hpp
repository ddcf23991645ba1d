#pragma once

#include <functional>

#include "machlimit/operators.hpp"
#include "machlimit/spectral_field.hpp"

namespace machlimit {

/// Barotropic pressure law. After normalization P'(1) = 1, so the rescaled
/// sound speed is 1 and the coupling coefficients below vanish at a = 0.
class PressureLaw {
  public:
    static PressureLaw gamma_law(double gamma);
    static PressureLaw custom(std::function<double(double)> pressure,
                              std::function<double(double)> dpressure);

    double pressure(double rho) const { return pressure_(rho); }
    double dpressure(double rho) const { return dpressure_(rho); }

    bool normalized(double tol = 1e-14) const;

    /// Relative specific-volume perturbation a / (1 + a); multiplies the
    /// viscous term in the velocity equation.
    static double j_coeff(double a);

    /// Pressure-coefficient deviation P'(1 + a)/(1 + a) - 1; multiplies the
    /// density gradient.
    double k_coeff(double a) const;

  private:
    PressureLaw() = default;
    std::function<double(double)> pressure_;
    std::function<double(double)> dpressure_;
};

/// Rescalings that bring (rho_inf, c_inf, nu) to (1, 1, 1); applying the
/// recorded factors to a normalized solution recovers the original one.
struct ScaleFactors {
    double time = 1.0;
    double space = 1.0;
    double velocity = 1.0;
    double density = 1.0;

    bool is_identity(double tol = 1e-14) const;
};

struct NormalizedSystem {
    PressureLaw law;
    LameParams lame;
    ScaleFactors scales;
};

/// Normalize the reference density, sound speed and total viscosity to one.
/// Throws if P'(rho_inf) <= 0 or nu <= 0.
NormalizedSystem normalize_parameters(double rho_inf, const PressureLaw& law,
                                      const LameParams& lame);

/// Pointwise composition on the 2x oversampled grid with the vacuum guard
/// min(1 + a) > 0; throws "vacuum-adjacent state" otherwise.
SpectralField apply_j(const SpectralField& a);
SpectralField apply_k(const SpectralField& a, const PressureLaw& law);

} // namespace machlimit
