#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "machlimit/grid.hpp"

namespace machlimit {

using cplx = std::complex<double>;

/// Scalar field on the torus stored as complex Fourier coefficients.
/// Fields representing physical quantities are Hermitian-symmetric
/// (real-valued in physical space); constructors and products maintain this.
class SpectralField {
  public:
    explicit SpectralField(const Grid& grid)
        : grid_(grid), coeffs_(grid.size(), cplx(0.0, 0.0)) {}

    SpectralField(const Grid& grid, std::vector<cplx> coeffs)
        : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != grid_.size())
            throw std::invalid_argument("SpectralField: coefficient count mismatch");
    }

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    std::vector<cplx>& coeffs() { return coeffs_; }

    cplx& operator[](std::size_t i) { return coeffs_[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs_[i]; }

    /// Coefficient at integer wavevector (kx, ky[, kz]).
    cplx& at_mode(int kx, int ky, int kz = 0);
    cplx at_mode(int kx, int ky, int kz = 0) const;

    cplx mean() const { return coeffs_[0]; }
    void set_mean(cplx m) { coeffs_[0] = m; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField f) { return f *= s; }

    /// this += s * other
    void axpy(double s, const SpectralField& o);

    /// Multiply each coefficient by m(flat index).
    void apply_multiplier(const std::function<cplx(std::size_t)>& m);

    /// Real collocation values (imaginary parts discarded).
    std::vector<double> to_physical() const;

    /// Real collocation values on the 2x oversampled grid (zero-padded).
    std::vector<double> to_physical_oversampled() const;

    static SpectralField from_physical(const Grid& grid, const std::vector<double>& values);

    /// Inverse of to_physical_oversampled: transform 2x-grid values and keep
    /// the coarse-grid modes.
    static SpectralField from_physical_oversampled(const Grid& grid,
                                                   const std::vector<double>& values);

    /// Zero every coefficient with |k_i| > n/3 on some axis (2/3 rule).
    void dealias();

    /// max_k |c(-k) - conj(c(k))| / max_k |c(k)|; 0 on the zero field.
    double hermitian_error() const;

    /// Symmetrize coefficients so the physical field is exactly real.
    void enforce_hermitian();

    double max_abs_coeff() const;

  private:
    Grid grid_;
    std::vector<cplx> coeffs_;
};

using VectorField = std::vector<SpectralField>;

VectorField zero_vector_field(const Grid& grid);

/// L^p norm over the torus. p = 2 uses Parseval (exact for trigonometric
/// polynomials); p = inf is the max over collocation points; other p use a
/// Riemann sum, on a 2x oversampled evaluation grid when `oversample`.
double lp_norm(const SpectralField& f, double p, bool oversample = true);

/// Dealiased pointwise product: evaluate on the 2x oversampled grid,
/// multiply, truncate back, apply the 2/3 mask.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// Dealiased pointwise composition h(f): f is evaluated on the 2x
/// oversampled grid, h applied pointwise, result truncated and masked.
SpectralField pointwise_map(const SpectralField& f, const std::function<double(double)>& h);

/// d/dx_axis as a spectral multiplier.
SpectralField derivative(const SpectralField& f, int axis);

/// Minimum of the collocation values.
double min_physical(const SpectralField& f);

} // namespace machlimit
