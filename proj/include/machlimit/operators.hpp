#pragma once

#include <functional>
#include <string>
#include <utility>

#include "machlimit/spectral_field.hpp"

namespace machlimit {

/// Constant viscosity coefficients of the Lame operator
/// mu * Laplacian + (mu + lambda) * grad div; nu = 2 mu + lambda is the
/// effective coefficient on gradient fields. Ellipticity asks mu > 0 and
/// nu > 0; the normalized system has nu = 1.
struct LameParams {
    double mu = 0.5;
    double lambda = 0.0;

    double nu() const { return 2.0 * mu + lambda; }
};

/// Scalar Fourier multiplier with an explicit rule for the mean mode.
struct SymbolOp {
    enum class ZeroModeRule { annihilate, identity };

    std::string name;
    std::function<cplx(const Grid&, std::size_t)> symbol; // nonzero modes only
    ZeroModeRule zero_mode_rule = ZeroModeRule::annihilate;

    SpectralField apply(const SpectralField& f) const;

    static SymbolOp identity();
};

SpectralField divergence(const VectorField& u);
VectorField gradient(const SpectralField& f);

/// (-Laplacian)^{-1}, mean mode annihilated.
SpectralField inverse_laplacian(const SpectralField& f);

/// Projection onto divergence-free fields; the mean mode passes through
/// (constants are divergence-free).
VectorField helmholtz_p(const VectorField& u);

/// Projection onto curl-free (gradient) fields; zero on the mean mode.
VectorField helmholtz_q(const VectorField& u);

VectorField lame_apply(const VectorField& u, const LameParams& lp);

/// w = Q u + (1/eps) grad (-Laplacian)^{-1} a, the combination that damps
/// the high-frequency acoustics.
VectorField effective_velocity(const SpectralField& a, const VectorField& u, double eps);

/// Scalar potential |grad|^{-1} div Q u of the compressible part.
SpectralField acoustic_potential(const VectorField& u);

/// Rebuild the curl-free velocity from its acoustic potential.
VectorField velocity_from_potential(const SpectralField& v);

/// Inviscid acoustic flow: per mode the 2x2 rotation by |xi| t applied to
/// (a, v). Unitary for every t.
std::pair<SpectralField, SpectralField>
acoustic_propagate(const SpectralField& a, const SpectralField& v, double t);

/// Heat semigroup: per-mode factor exp(-kappa |xi|^2 t).
SpectralField heat_propagate(const SpectralField& f, double t, double kappa);
VectorField heat_propagate(const VectorField& f, double t, double kappa);

} // namespace machlimit
