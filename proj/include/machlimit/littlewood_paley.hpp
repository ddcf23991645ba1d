#pragma once

#include <vector>

#include "machlimit/spectral_field.hpp"

namespace machlimit {

/// Smooth radial cutoff used to build the dyadic filters: theta(r) = 1 for
/// r <= 1, 0 for r >= 2, and on (1,2) the degree-7 smoothstep
///   theta(1+t) = 1 - (35 t^4 - 84 t^5 + 70 t^6 - 20 t^7),
/// which is C^3 and strictly monotone.
double theta_profile(double r);

/// Family of dyadic annular filters phi_j(xi) = theta(2^-j |xi|) -
/// theta(2^-j+1 |xi|), sampled on the grid modes, plus the mean channel
/// (xi = 0), which no filter touches. The filters telescope exactly:
/// sum_j phi_j = 1 on every nonzero resolvable mode.
class LPFilterBank {
  public:
    explicit LPFilterBank(const Grid& grid);

    const Grid& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }

    /// phi_j evaluated at radius rho (any rho >= 0).
    static double filter_value(int j, double rho);

    /// Sampled filter for shell j (throws if j out of range).
    const std::vector<double>& filter(int j) const;

    /// Frequency-localized piece on the dyadic annulus ~2^j.
    SpectralField dyadic_block(const SpectralField& f, int j) const;

    /// Sum of the blocks up to and including j (the mean stays excluded).
    SpectralField low_cut(const SpectralField& f, int j) const;

    /// ||dyadic_block(f, j)||_{L^p} without materializing the block for p=2.
    double block_lp_norm(const SpectralField& f, int j, double p,
                         bool oversample = true) const;

  private:
    void check_range(int j) const;

    Grid grid_;
    int j_min_;
    int j_max_;
    std::vector<double> xi_mod_;                 // |xi| per flat mode
    std::vector<std::vector<double>> filters_;   // per shell, per flat mode
};

/// Lebesgue/summation/regularity triple (p, sigma, s) of a Besov norm.
struct BesovIndex {
    double p = 2.0;
    double sigma = 1.0;
    double s = 0.0;
};

/// Dyadic-shell restriction. Cutoffs are compared against 2^j with the
/// half-open convention: low = {2^j < alpha}, mid = {alpha <= 2^j < beta},
/// high = {beta <= 2^j}.
struct Band {
    enum class Kind { all, low, mid, high };
    Kind kind = Kind::all;
    double alpha = 0.0;
    double beta = 0.0;

    static Band all() { return {Kind::all, 0.0, 0.0}; }
    static Band low(double alpha);
    static Band mid(double alpha, double beta);
    static Band high(double beta);

    bool contains(int j) const;
};

/// Homogeneous Besov norm restricted to a band:
/// || {2^{s j} ||block_j f||_{L^p}}_j ||_{l^sigma}. An empty band gives 0.
double besov_norm(const SpectralField& f, const LPFilterBank& bank,
                  const BesovIndex& idx, const Band& band = Band::all(),
                  bool oversample = true);

/// Vector fields use the componentwise-sum convention.
double besov_norm(const VectorField& f, const LPFilterBank& bank,
                  const BesovIndex& idx, const Band& band = Band::all(),
                  bool oversample = true);

} // namespace machlimit
