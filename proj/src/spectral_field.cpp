#include "machlimit/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "machlimit/fft.hpp"

namespace machlimit {

namespace {

std::size_t flat_index(const Grid& g, int kx, int ky, int kz) {
    std::size_t ix = static_cast<std::size_t>(g.index_of(kx));
    std::size_t iy = static_cast<std::size_t>(g.index_of(ky));
    if (g.dim() == 2) return ix * g.n() + iy;
    std::size_t iz = static_cast<std::size_t>(g.index_of(kz));
    return (ix * g.n() + iy) * g.n() + iz;
}

// Flat index of the wavevector -k.
std::size_t conj_index(const Grid& g, std::size_t flat) {
    auto k = g.wavevector(flat);
    int n = g.n();
    auto neg = [n](int v) {
        // -(-n/2) aliases back to -n/2 on the even grid
        int w = -v;
        if (w == n / 2) w = -n / 2;
        return w;
    };
    return flat_index(g, neg(k[0]), neg(k[1]), g.dim() == 3 ? neg(k[2]) : 0);
}

// Flat index of coarse-grid wavevector `k` in the FFT layout of an m-grid.
std::size_t fine_index(const Grid& g, std::size_t flat, int m) {
    auto k = g.wavevector(flat);
    std::size_t t = 0;
    for (int axis = 0; axis < g.dim(); ++axis) {
        int idx = k[axis] >= 0 ? k[axis] : k[axis] + m;
        t = t * m + static_cast<std::size_t>(idx);
    }
    return t;
}

std::vector<cplx> embed(const Grid& g, const std::vector<cplx>& c, int m) {
    std::size_t total = 1;
    for (int i = 0; i < g.dim(); ++i) total *= static_cast<std::size_t>(m);
    std::vector<cplx> out(total, cplx(0.0, 0.0));
    for (std::size_t s = 0; s < c.size(); ++s)
        if (c[s] != cplx(0.0, 0.0)) out[fine_index(g, s, m)] = c[s];
    return out;
}

std::vector<cplx> extract(const Grid& g, const std::vector<cplx>& fine, int m) {
    std::vector<cplx> out(g.size());
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = fine[fine_index(g, s, m)];
    return out;
}

} // namespace

cplx& SpectralField::at_mode(int kx, int ky, int kz) {
    return coeffs_[flat_index(grid_, kx, ky, kz)];
}

cplx SpectralField::at_mode(int kx, int ky, int kz) const {
    return coeffs_[flat_index(grid_, kx, ky, kz)];
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

void SpectralField::axpy(double s, const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
}

void SpectralField::apply_multiplier(const std::function<cplx(std::size_t)>& m) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] *= m(i);
}

std::vector<double> SpectralField::to_physical() const {
    std::vector<cplx> work = coeffs_;
    fft::backward(grid_, work);
    std::vector<double> out(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
}

std::vector<double> SpectralField::to_physical_oversampled() const {
    int m = 2 * grid_.n();
    std::vector<cplx> work = embed(grid_, coeffs_, m);
    fft::backward_shape(grid_.dim(), m, work);
    std::vector<double> out(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
}

SpectralField SpectralField::from_physical(const Grid& grid, const std::vector<double>& values) {
    if (values.size() != grid.size())
        throw std::invalid_argument("from_physical: value count mismatch");
    std::vector<cplx> work(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) work[i] = cplx(values[i], 0.0);
    fft::forward(grid, work);
    return SpectralField(grid, std::move(work));
}

SpectralField SpectralField::from_physical_oversampled(const Grid& grid,
                                                       const std::vector<double>& values) {
    int m = 2 * grid.n();
    std::size_t total = 1;
    for (int i = 0; i < grid.dim(); ++i) total *= static_cast<std::size_t>(m);
    if (values.size() != total)
        throw std::invalid_argument("from_physical_oversampled: value count mismatch");
    std::vector<cplx> work(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) work[i] = cplx(values[i], 0.0);
    fft::forward_shape(grid.dim(), m, work);
    return SpectralField(grid, extract(grid, work, m));
}

void SpectralField::dealias() {
    int lim = grid_.dealias_limit();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        auto k = grid_.wavevector(i);
        for (int axis = 0; axis < grid_.dim(); ++axis) {
            if (std::abs(k[axis]) > lim) {
                coeffs_[i] = cplx(0.0, 0.0);
                break;
            }
        }
    }
}

double SpectralField::hermitian_error() const {
    double scale = max_abs_coeff();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        std::size_t j = conj_index(grid_, i);
        worst = std::max(worst, std::abs(coeffs_[j] - std::conj(coeffs_[i])));
    }
    return worst / scale;
}

void SpectralField::enforce_hermitian() {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        std::size_t j = conj_index(grid_, i);
        if (j < i) continue;
        cplx avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[j]));
        coeffs_[i] = avg;
        coeffs_[j] = std::conj(avg);
    }
}

double SpectralField::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

VectorField zero_vector_field(const Grid& grid) {
    return VectorField(static_cast<std::size_t>(grid.dim()), SpectralField(grid));
}

double lp_norm(const SpectralField& f, double p, bool oversample) {
    const Grid& g = f.grid();
    if (p == 2.0) {
        double s = 0.0;
        for (const auto& c : f.coeffs()) s += std::norm(c);
        return std::sqrt(g.volume() * s);
    }
    if (std::isinf(p)) {
        auto vals = f.to_physical();
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> vals;
    double cell;
    if (oversample) {
        vals = f.to_physical_oversampled();
        cell = g.volume() / static_cast<double>(vals.size());
    } else {
        vals = f.to_physical();
        cell = g.cell_volume();
    }
    double s = 0.0;
    for (double v : vals) s += std::pow(std::abs(v), p);
    return std::pow(cell * s, 1.0 / p);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    if (f.grid() != g.grid())
        throw std::invalid_argument("dealiased_product: grid mismatch");
    const Grid& gr = f.grid();
    const int d = gr.dim();
    const int m = 2 * gr.n();
    std::vector<cplx> a = embed(gr, f.coeffs(), m);
    std::vector<cplx> b = embed(gr, g.coeffs(), m);
    fft::backward_shape(d, m, a);
    fft::backward_shape(d, m, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = cplx(a[i].real() * b[i].real(), 0.0);
    fft::forward_shape(d, m, a);
    SpectralField result(gr, extract(gr, a, m));
    result.dealias();
    return result;
}

SpectralField pointwise_map(const SpectralField& f, const std::function<double(double)>& h) {
    const Grid& gr = f.grid();
    const int d = gr.dim();
    const int m = 2 * gr.n();
    std::vector<cplx> fine = embed(gr, f.coeffs(), m);
    fft::backward_shape(d, m, fine);
    for (auto& v : fine) v = cplx(h(v.real()), 0.0);
    fft::forward_shape(d, m, fine);
    SpectralField result(gr, extract(gr, fine, m));
    result.dealias();
    return result;
}

SpectralField derivative(const SpectralField& f, int axis) {
    SpectralField out = f;
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < out.coeffs().size(); ++i) {
        double xi = g.xi_component(i, axis);
        out[i] *= cplx(0.0, xi);
    }
    return out;
}

double min_physical(const SpectralField& f) {
    auto vals = f.to_physical();
    double m = vals.empty() ? 0.0 : vals[0];
    for (double v : vals) m = std::min(m, v);
    return m;
}

} // namespace machlimit
