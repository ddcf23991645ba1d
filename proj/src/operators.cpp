#include "machlimit/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace machlimit {

SpectralField SymbolOp::apply(const SpectralField& f) const {
    SpectralField out = f;
    for (std::size_t i = 0; i < out.coeffs().size(); ++i) {
        if (i == 0) {
            if (zero_mode_rule == ZeroModeRule::annihilate) out[0] = cplx(0.0, 0.0);
            continue;
        }
        out[i] *= symbol(f.grid(), i);
    }
    return out;
}

SymbolOp SymbolOp::identity() {
    return SymbolOp{"identity",
                    [](const Grid&, std::size_t) { return cplx(1.0, 0.0); },
                    SymbolOp::ZeroModeRule::identity};
}

SpectralField divergence(const VectorField& u) {
    const Grid& g = u.at(0).grid();
    SpectralField out(g);
    for (int axis = 0; axis < g.dim(); ++axis)
        for (std::size_t i = 0; i < out.coeffs().size(); ++i)
            out[i] += cplx(0.0, g.xi_component(i, axis)) * u[axis][i];
    return out;
}

VectorField gradient(const SpectralField& f) {
    const Grid& g = f.grid();
    VectorField out = zero_vector_field(g);
    for (int axis = 0; axis < g.dim(); ++axis)
        for (std::size_t i = 0; i < f.coeffs().size(); ++i)
            out[axis][i] = cplx(0.0, g.xi_component(i, axis)) * f[i];
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
    const Grid& g = f.grid();
    SpectralField out = f;
    out[0] = cplx(0.0, 0.0);
    for (std::size_t i = 1; i < out.coeffs().size(); ++i) {
        double k2 = g.xi_modulus(i);
        k2 *= k2;
        out[i] /= k2;
    }
    return out;
}

VectorField helmholtz_q(const VectorField& u) {
    const Grid& g = u.at(0).grid();
    VectorField out = zero_vector_field(g);
    for (std::size_t i = 1; i < u[0].coeffs().size(); ++i) {
        double k2 = 0.0;
        cplx dot(0.0, 0.0);
        for (int axis = 0; axis < g.dim(); ++axis) {
            double xi = g.xi_component(i, axis);
            k2 += xi * xi;
            dot += xi * u[axis][i];
        }
        for (int axis = 0; axis < g.dim(); ++axis)
            out[axis][i] = g.xi_component(i, axis) * dot / k2;
    }
    return out;
}

VectorField helmholtz_p(const VectorField& u) {
    VectorField q = helmholtz_q(u);
    VectorField out = u;
    for (std::size_t axis = 0; axis < out.size(); ++axis) out[axis] -= q[axis];
    return out; // mean mode untouched: P = I there
}

VectorField lame_apply(const VectorField& u, const LameParams& lp) {
    const Grid& g = u.at(0).grid();
    VectorField out = zero_vector_field(g);
    for (std::size_t i = 0; i < u[0].coeffs().size(); ++i) {
        double k2 = 0.0;
        cplx dot(0.0, 0.0);
        for (int axis = 0; axis < g.dim(); ++axis) {
            double xi = g.xi_component(i, axis);
            k2 += xi * xi;
            dot += xi * u[axis][i];
        }
        for (int axis = 0; axis < g.dim(); ++axis) {
            double xi = g.xi_component(i, axis);
            out[axis][i] = -lp.mu * k2 * u[axis][i] - (lp.mu + lp.lambda) * xi * dot;
        }
    }
    return out;
}

VectorField effective_velocity(const SpectralField& a, const VectorField& u, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("effective_velocity: eps must be positive");
    VectorField w = helmholtz_q(u);
    VectorField corr = gradient(inverse_laplacian(a));
    for (std::size_t axis = 0; axis < w.size(); ++axis) w[axis].axpy(1.0 / eps, corr[axis]);
    return w;
}

SpectralField acoustic_potential(const VectorField& u) {
    const Grid& g = u.at(0).grid();
    SpectralField div = divergence(u); // div Q u = div u
    for (std::size_t i = 1; i < div.coeffs().size(); ++i) div[i] /= g.xi_modulus(i);
    div[0] = cplx(0.0, 0.0);
    return div;
}

VectorField velocity_from_potential(const SpectralField& v) {
    const Grid& g = v.grid();
    VectorField out = zero_vector_field(g);
    for (std::size_t i = 1; i < v.coeffs().size(); ++i) {
        double k = g.xi_modulus(i);
        for (int axis = 0; axis < g.dim(); ++axis)
            out[axis][i] = cplx(0.0, -g.xi_component(i, axis) / k) * v[i];
    }
    return out;
}

std::pair<SpectralField, SpectralField>
acoustic_propagate(const SpectralField& a, const SpectralField& v, double t) {
    if (a.grid() != v.grid())
        throw std::invalid_argument("acoustic_propagate: grid mismatch");
    const Grid& g = a.grid();
    SpectralField ao = a, vo = v;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        double angle = g.xi_modulus(i) * t;
        double c = std::cos(angle), s = std::sin(angle);
        cplx av = a[i], vv = v[i];
        ao[i] = c * av - s * vv;
        vo[i] = s * av + c * vv;
    }
    return {std::move(ao), std::move(vo)};
}

SpectralField heat_propagate(const SpectralField& f, double t, double kappa) {
    if (t < 0.0) throw std::invalid_argument("heat_propagate: t must be nonnegative");
    if (kappa < 0.0) throw std::invalid_argument("heat_propagate: kappa must be nonnegative");
    const Grid& g = f.grid();
    SpectralField out = f;
    for (std::size_t i = 0; i < out.coeffs().size(); ++i) {
        double k = g.xi_modulus(i);
        out[i] *= std::exp(-kappa * k * k * t);
    }
    return out;
}

VectorField heat_propagate(const VectorField& f, double t, double kappa) {
    VectorField out;
    out.reserve(f.size());
    for (const auto& comp : f) out.push_back(heat_propagate(comp, t, kappa));
    return out;
}

} // namespace machlimit
