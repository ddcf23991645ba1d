#pragma once

#include "machlimit/littlewood_paley.hpp"
#include "machlimit/operators.hpp"

namespace machlimit {

/// Low-high Bony piece T_f g = sum_j (low_cut f up to j-3) * block_j g.
/// Acts on the fluctuation parts only; the mean channels are handled by
/// bony_mean_correction.
SpectralField paraproduct_low_high(const SpectralField& f, const SpectralField& g,
                                   const LPFilterBank& bank);

/// Resonant Bony piece R(f, g) = sum over |j - j'| <= 2 of
/// block_j f * block_j' g. Symmetric in its arguments.
SpectralField paraproduct_resonant(const SpectralField& f, const SpectralField& g,
                                   const LPFilterBank& bank);

/// mean(f) g + (f - mean(f)) mean(g): the exact torus corrections that the
/// mean-free Bony pieces leave out of f*g.
SpectralField bony_mean_correction(const SpectralField& f, const SpectralField& g);

/// T_f g + T_g f + R(f, g) + mean corrections; equals the dealiased product
/// f*g up to quadrature rounding.
SpectralField bony_reconstruct(const SpectralField& f, const SpectralField& g,
                               const LPFilterBank& bank);

/// Transport commutator [v . grad, eta(D) block_j] a.
SpectralField commutator_transport(const VectorField& v, const SpectralField& a, int j,
                                   const LPFilterBank& bank,
                                   const SymbolOp& eta = SymbolOp::identity());

/// v . grad a, dealiased.
SpectralField advect(const VectorField& v, const SpectralField& a);

} // namespace machlimit
