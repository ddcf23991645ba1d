#include "machlimit/paraproduct.hpp"

namespace machlimit {

SpectralField paraproduct_low_high(const SpectralField& f, const SpectralField& g,
                                   const LPFilterBank& bank) {
    const Grid& grid = f.grid();
    SpectralField acc(grid);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        if (j - 3 < bank.j_min()) continue; // empty low cut
        SpectralField low = bank.low_cut(f, j - 3);
        if (low.max_abs_coeff() == 0.0) continue;
        SpectralField blk = bank.dyadic_block(g, j);
        if (blk.max_abs_coeff() == 0.0) continue;
        acc += dealiased_product(low, blk);
    }
    return acc;
}

SpectralField paraproduct_resonant(const SpectralField& f, const SpectralField& g,
                                   const LPFilterBank& bank) {
    const Grid& grid = f.grid();
    SpectralField acc(grid);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        SpectralField fj = bank.dyadic_block(f, j);
        if (fj.max_abs_coeff() == 0.0) continue;
        SpectralField gnear(grid);
        bool any = false;
        for (int jp = std::max(j - 2, bank.j_min()); jp <= std::min(j + 2, bank.j_max()); ++jp) {
            SpectralField gj = bank.dyadic_block(g, jp);
            if (gj.max_abs_coeff() == 0.0) continue;
            gnear += gj;
            any = true;
        }
        if (!any) continue;
        acc += dealiased_product(fj, gnear);
    }
    return acc;
}

SpectralField bony_mean_correction(const SpectralField& f, const SpectralField& g) {
    double fbar = f.mean().real();
    double gbar = g.mean().real();
    SpectralField out = g;
    out *= fbar; // mean(f) * g
    SpectralField fluct = f;
    fluct.set_mean(cplx(0.0, 0.0));
    out.axpy(gbar, fluct); // + f' * mean(g)
    return out;
}

SpectralField bony_reconstruct(const SpectralField& f, const SpectralField& g,
                               const LPFilterBank& bank) {
    SpectralField out = paraproduct_low_high(f, g, bank);
    out += paraproduct_low_high(g, f, bank);
    out += paraproduct_resonant(f, g, bank);
    out += bony_mean_correction(f, g);
    return out;
}

SpectralField advect(const VectorField& v, const SpectralField& a) {
    const Grid& grid = a.grid();
    SpectralField acc(grid);
    for (int axis = 0; axis < grid.dim(); ++axis)
        acc += dealiased_product(v[static_cast<std::size_t>(axis)], derivative(a, axis));
    return acc;
}

SpectralField commutator_transport(const VectorField& v, const SpectralField& a, int j,
                                   const LPFilterBank& bank, const SymbolOp& eta) {
    SpectralField localized = eta.apply(bank.dyadic_block(a, j));
    SpectralField first = advect(v, localized);
    SpectralField second = eta.apply(bank.dyadic_block(advect(v, a), j));
    return first - second;
}

} // namespace machlimit
