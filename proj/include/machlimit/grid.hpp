#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace machlimit {

/// Uniform periodic grid on a d-dimensional torus of period `box_length`.
/// Wave vectors are (2*pi/box_length) * k with integer k per axis in
/// [-n/2, n/2). Spectral storage is full-complex, row-major, FFT layout
/// (non-negative k first, then negative).
class Grid {
  public:
    Grid(int d, int n, double box_length)
        : d_(d), n_(n), box_length_(box_length) {
        if (d != 2 && d != 3)
            throw std::invalid_argument("Grid: d must be 2 or 3");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two >= 8");
        if (!(box_length > 0.0))
            throw std::invalid_argument("Grid: box_length must be positive");
    }

    int dim() const { return d_; }
    int n() const { return n_; }
    double box_length() const { return box_length_; }

    /// Total number of modes (= collocation points).
    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < d_; ++i) s *= static_cast<std::size_t>(n_);
        return s;
    }

    /// Lattice spacing of wave vectors.
    double xi_unit() const { return 2.0 * M_PI / box_length_; }

    /// Collocation spacing.
    double dx() const { return box_length_ / n_; }

    /// Cell volume of the collocation grid.
    double cell_volume() const { return std::pow(dx(), d_); }

    /// Torus volume.
    double volume() const { return std::pow(box_length_, d_); }

    /// Integer wavenumber along one axis for FFT index i.
    int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }

    /// FFT index for integer wavenumber k (k in [-n/2, n/2)).
    int index_of(int k) const { return k >= 0 ? k : k + n_; }

    /// Largest retained |k| per axis under the 2/3 dealiasing rule.
    int dealias_limit() const { return n_ / 3; }

    /// Decompose a flat index into per-axis integer wavenumbers.
    std::array<int, 3> wavevector(std::size_t flat) const {
        std::array<int, 3> k{0, 0, 0};
        for (int axis = d_ - 1; axis >= 0; --axis) {
            k[axis] = wavenumber(static_cast<int>(flat % n_));
            flat /= n_;
        }
        return k;
    }

    /// |xi| for a flat index.
    double xi_modulus(std::size_t flat) const {
        auto k = wavevector(flat);
        double s = 0.0;
        for (int axis = 0; axis < d_; ++axis) s += double(k[axis]) * k[axis];
        return xi_unit() * std::sqrt(s);
    }

    /// xi component along `axis` for a flat index.
    double xi_component(std::size_t flat, int axis) const {
        std::size_t stride = 1;
        for (int a = d_ - 1; a > axis; --a) stride *= n_;
        int i = static_cast<int>((flat / stride) % n_);
        return xi_unit() * wavenumber(i);
    }

    bool operator==(const Grid& o) const {
        return d_ == o.d_ && n_ == o.n_ && box_length_ == o.box_length_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int d_;
    int n_;
    double box_length_;
};

} // namespace machlimit
