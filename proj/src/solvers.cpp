#include "machlimit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "machlimit/fft.hpp"
#include "machlimit/parallel.hpp"

namespace machlimit {

namespace {

struct Mat2 {
    // [[a, b], [c, d]]
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 ident(double s = 1.0) { return {s, 0.0, 0.0, s}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 scaled(double s) const { return {a * s, b * s, c * s, d * s}; }
    void apply(cplx& x, cplx& y) const {
        cplx nx = a * x + b * y, ny = c * x + d * y;
        x = nx;
        y = ny;
    }
};

// Stable scalar phi functions of a complex argument. Series below |z| = 0.5
// (truncation under 1e-16), closed forms above.
std::complex<double> phi1_z(std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        std::complex<double> acc(0.0, 0.0), pow(1.0, 0.0);
        double fact = 1.0;
        for (int k = 0; k <= 14; ++k) {
            acc += pow / (fact * (k + 1));
            pow *= z;
            fact *= (k + 1);
        }
        return acc;
    }
    return (std::exp(z) - 1.0) / z;
}

std::complex<double> phi2_z(std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        std::complex<double> acc(0.0, 0.0), pow(1.0, 0.0);
        double fact = 1.0;
        for (int k = 0; k <= 14; ++k) {
            acc += pow / (fact * (k + 1) * (k + 2));
            pow *= z;
            fact *= (k + 1);
        }
        return acc;
    }
    return (phi1_z(z) - 1.0) / z;
}

std::complex<double> dphi1_z(std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        std::complex<double> acc(0.0, 0.0), pow(1.0, 0.0);
        double fact = 1.0; // sum k z^{k-1} / (k+1)!
        for (int k = 1; k <= 14; ++k) {
            fact *= k;
            acc += double(k) * pow / (fact * (k + 1));
            pow *= z;
        }
        return acc;
    }
    return (std::exp(z) - phi1_z(z)) / z;
}

std::complex<double> dphi2_z(std::complex<double> z) {
    if (std::abs(z) < 0.5) {
        std::complex<double> acc(0.0, 0.0), pow(1.0, 0.0);
        double fact = 1.0; // sum k z^{k-1} / (k+2)!
        for (int k = 1; k <= 14; ++k) {
            fact *= k;
            acc += double(k) * pow / (fact * (k + 1) * (k + 2));
            pow *= z;
        }
        return acc;
    }
    return (dphi1_z(z) - phi2_z(z)) / z;
}

// f(A) for the acoustic-viscous block A = [[0, -wh], [wh, -gh]]:
// with m = tr/2 and eigenvalues m +- q, any analytic f gives
// f(A) = c0 I + c1 (A - m I), c0 = (f(m+q)+f(m-q))/2,
// c1 = (f(m+q)-f(m-q))/(2q) -> f'(m) as q -> 0.
// Both eigenvalues have nonpositive real part, so nothing overflows.
void acoustic_phis(double wh, double gh, Mat2& E, Mat2& P1, Mat2& P2) {
    using C = std::complex<double>;
    const Mat2 A{0.0, -wh, wh, -gh};
    const C m(-gh / 2.0, 0.0);
    const C q = std::sqrt(m * m - C(wh * wh, 0.0));
    const C lp = m + q, lm = m - q;
    const bool degenerate = std::abs(q) < 1e-7 * std::max(1.0, std::abs(m));

    auto assemble = [&](const std::function<C(C)>& f, const std::function<C(C)>& df) {
        C c0 = 0.5 * (f(lp) + f(lm));
        C c1 = degenerate ? df(m) : (f(lp) - f(lm)) / (2.0 * q);
        Mat2 out = Mat2::ident(c0.real()) + (A - Mat2::ident(m.real())).scaled(c1.real());
        return out;
    };
    E = assemble([](C z) { return std::exp(z); }, [](C z) { return std::exp(z); });
    P1 = assemble(phi1_z, dphi1_z);
    P2 = assemble(phi2_z, dphi2_z);
}

// scalar phi functions for the heat factor z = -kappa k^2 h
void heat_phis(double z, double& e, double& p1, double& p2) {
    e = std::exp(z);
    if (std::abs(z) < 1e-2) {
        p1 = 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0;
        p2 = 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0 + z * z * z * z / 720.0;
    } else {
        p1 = std::expm1(z) / z;
        p2 = (p1 - 1.0) / z;
    }
}

// Per-mode propagator tables for one (grid, eps, lame, dt) quadruple.
struct CompressibleTable {
    Grid grid;
    double eps;
    LameParams lame;
    double dt;
    std::vector<double> xi[3];
    std::vector<double> k2;
    std::vector<Mat2> E, P1, P2;         // acoustic block
    std::vector<double> he, hp1, hp2;    // solenoidal heat channel

    CompressibleTable(const Grid& g, double eps_, const LameParams& lp, double h)
        : grid(g), eps(eps_), lame(lp), dt(h) {
        const std::size_t total = g.size();
        for (int axis = 0; axis < g.dim(); ++axis) {
            xi[axis].resize(total);
            for (std::size_t i = 0; i < total; ++i) xi[axis][i] = g.xi_component(i, axis);
        }
        k2.resize(total);
        E.resize(total);
        P1.resize(total);
        P2.resize(total);
        he.resize(total);
        hp1.resize(total);
        hp2.resize(total);
        const double nu = lp.nu();
        for (std::size_t i = 0; i < total; ++i) {
            double kk = 0.0;
            for (int axis = 0; axis < g.dim(); ++axis) kk += xi[axis][i] * xi[axis][i];
            k2[i] = kk;
            double k = std::sqrt(kk);
            if (i == 0) {
                E[i] = Mat2::ident();
                P1[i] = Mat2::ident();
                P2[i] = Mat2::ident(0.5);
            } else {
                acoustic_phis(k * h / eps, nu * kk * h, E[i], P1[i], P2[i]);
            }
            heat_phis(-lp.mu * kk * h, he[i], hp1[i], hp2[i]);
        }
    }
};

struct NonlinearEval {
    SpectralField f;
    VectorField g;
    double max_speed = 0.0;
    double min_density = 1.0; // min over the oversampled grid of 1 + eps a

    NonlinearEval(const Grid& grid) : f(grid), g(zero_vector_field(grid)) {}
};

std::vector<double> physical(const SpectralField& s) { return s.to_physical(); }

// f = -div(a u), g = -[(u.grad)u + J(eps a) L u + (1/eps) K(eps a) grad a];
// quadratic terms on the collocation grid under the 2/3 mask, compositions
// on the 2x grid.
NonlinearEval eval_nonlinearity(const CompressibleState& s) {
    const Grid& grid = s.a.grid();
    const int d = grid.dim();
    NonlinearEval out(grid);

    std::vector<std::vector<double>> u_phys(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> du_phys(static_cast<std::size_t>(d * d));
    std::vector<double> a_phys;
    // independent transforms; safe to run concurrently
    parallel_for(static_cast<std::size_t>(d + d * d + 1), [&](std::size_t task) {
        if (task < static_cast<std::size_t>(d)) {
            u_phys[task] = physical(s.u[task]);
        } else if (task < static_cast<std::size_t>(d + d * d)) {
            std::size_t q = task - d;
            du_phys[q] = physical(derivative(s.u[q / d], static_cast<int>(q % d)));
        } else {
            a_phys = physical(s.a);
        }
    });

    for (int axis = 0; axis < d; ++axis)
        for (double v : u_phys[static_cast<std::size_t>(axis)])
            out.max_speed = std::max(out.max_speed, std::abs(v));

    const std::size_t total = grid.size();
    // advection (u.grad)u and mass flux a u
    std::vector<double> work(total);
    VectorField conv = zero_vector_field(grid);
    VectorField au = zero_vector_field(grid);
    for (int axis = 0; axis < d; ++axis) {
        for (std::size_t i = 0; i < total; ++i) {
            double acc = 0.0;
            for (int a2 = 0; a2 < d; ++a2)
                acc += u_phys[a2][i] * du_phys[static_cast<std::size_t>(axis * d + a2)][i];
            work[i] = acc;
        }
        conv[axis] = SpectralField::from_physical(grid, work);
        for (std::size_t i = 0; i < total; ++i) work[i] = a_phys[i] * u_phys[axis][i];
        au[axis] = SpectralField::from_physical(grid, work);
    }

    // composition terms on the oversampled grid
    VectorField lu = lame_apply(s.u, s.lame);
    std::vector<double> a_fine = s.a.to_physical_oversampled();
    out.min_density = 1.0 + s.eps * *std::min_element(a_fine.begin(), a_fine.end());
    if (out.min_density <= 0.0) throw std::domain_error("vacuum-adjacent state");
    std::vector<double> jv(a_fine.size()), kv(a_fine.size());
    for (std::size_t i = 0; i < a_fine.size(); ++i) {
        double ea = s.eps * a_fine[i];
        jv[i] = PressureLaw::j_coeff(ea);
        kv[i] = s.law.k_coeff(ea);
    }
    VectorField gjk = zero_vector_field(grid);
    parallel_for(static_cast<std::size_t>(d), [&](std::size_t axis) {
        std::vector<double> lu_fine = lu[axis].to_physical_oversampled();
        std::vector<double> ga_fine =
            derivative(s.a, static_cast<int>(axis)).to_physical_oversampled();
        for (std::size_t i = 0; i < lu_fine.size(); ++i)
            lu_fine[i] = jv[i] * lu_fine[i] + kv[i] * ga_fine[i] / s.eps;
        gjk[axis] = SpectralField::from_physical_oversampled(grid, lu_fine);
    });

    out.f = divergence(au);
    out.f *= -1.0;
    for (int axis = 0; axis < d; ++axis) {
        out.g[axis] = conv[axis];
        out.g[axis] += gjk[axis];
        out.g[axis] *= -1.0;
        out.g[axis].dealias();
        out.g[axis].set_mean(cplx(0.0, 0.0)); // zero-mean gauge
    }
    out.f.dealias();
    out.f.set_mean(cplx(0.0, 0.0));
    return out;
}

// Channel split of a state or increment on one mode: (a, v, uP) with
// v = i xi.u / k and uP the solenoidal residual.
struct ModeView {
    cplx a;
    cplx v;
    cplx uP[3];
};

ModeView to_channels(const CompressibleTable& T, std::size_t i, const cplx& a,
                     const cplx* u, int d) {
    ModeView m;
    m.a = a;
    if (T.k2[i] == 0.0) {
        m.v = cplx(0.0, 0.0);
        for (int axis = 0; axis < d; ++axis) m.uP[axis] = u[axis];
        return m;
    }
    cplx dot(0.0, 0.0);
    for (int axis = 0; axis < d; ++axis) dot += T.xi[axis][i] * u[axis];
    const double k = std::sqrt(T.k2[i]);
    m.v = cplx(0.0, 1.0) * dot / k;
    for (int axis = 0; axis < d; ++axis)
        m.uP[axis] = u[axis] - T.xi[axis][i] * dot / T.k2[i];
    return m;
}

void from_channels(const CompressibleTable& T, std::size_t i, const ModeView& m, cplx& a,
                   cplx* u, int d) {
    a = m.a;
    if (T.k2[i] == 0.0) {
        for (int axis = 0; axis < d; ++axis) u[axis] = m.uP[axis];
        return;
    }
    const double k = std::sqrt(T.k2[i]);
    for (int axis = 0; axis < d; ++axis)
        u[axis] = m.uP[axis] + cplx(0.0, -T.xi[axis][i] / k) * m.v;
}

CompressibleState advance(const CompressibleTable& T, const CompressibleState& s,
                          const StepControl& ctl) {
    const Grid& grid = s.a.grid();
    const int d = grid.dim();
    const std::size_t total = grid.size();
    const double h = T.dt;

    NonlinearEval N0(grid);
    if (ctl.nonlinear) {
        N0 = eval_nonlinearity(s);
        double limit = ctl.cfl * grid.dx() / std::max(N0.max_speed, 1e-14);
        if (h > limit) throw StepRejected("nonlinear CFL exceeded: reduce dt");
    }

    auto mode_of = [&](const CompressibleState& st, std::size_t i) {
        cplx uu[3] = {st.u[0][i], st.u[1][i], d == 3 ? st.u[2][i] : cplx(0.0, 0.0)};
        return to_channels(T, i, st.a[i], uu, d);
    };
    auto mode_of_rhs = [&](const NonlinearEval& N, const NonlinearEval* minus, std::size_t i) {
        cplx gg[3];
        for (int axis = 0; axis < d; ++axis)
            gg[axis] = minus ? N.g[axis][i] - minus->g[axis][i] : N.g[axis][i];
        if (d == 2) gg[2] = cplx(0.0, 0.0);
        return to_channels(T, i, minus ? N.f[i] - minus->f[i] : N.f[i], gg, d);
    };
    auto store = [&](CompressibleState& st, std::size_t i, const ModeView& x) {
        cplx na, nu2[3];
        from_channels(T, i, x, na, nu2, d);
        st.a[i] = na;
        for (int axis = 0; axis < d; ++axis) st.u[axis][i] = nu2[axis];
    };

    // predictor: x* = E x + h phi1 N0
    CompressibleState pred = s;
    pred.t = s.t + h;
    for (std::size_t i = 0; i < total; ++i) {
        ModeView x = mode_of(s, i);
        T.E[i].apply(x.a, x.v);
        for (int axis = 0; axis < d; ++axis) x.uP[axis] *= T.he[i];
        if (ctl.nonlinear) {
            ModeView n0 = mode_of_rhs(N0, nullptr, i);
            T.P1[i].apply(n0.a, n0.v);
            x.a += h * n0.a;
            x.v += h * n0.v;
            for (int axis = 0; axis < d; ++axis) x.uP[axis] += h * T.hp1[i] * n0.uP[axis];
        }
        store(pred, i, x);
    }

    CompressibleState next = pred;
    if (ctl.nonlinear) {
        // corrector: x_{n+1} = x* + h phi2 (N1 - N0)
        NonlinearEval N1 = eval_nonlinearity(pred);
        for (std::size_t i = 0; i < total; ++i) {
            ModeView x = mode_of(pred, i);
            ModeView dn = mode_of_rhs(N1, &N0, i);
            T.P2[i].apply(dn.a, dn.v);
            x.a += h * dn.a;
            x.v += h * dn.v;
            for (int axis = 0; axis < d; ++axis) x.uP[axis] += h * T.hp2[i] * dn.uP[axis];
            store(next, i, x);
        }
        double min_density = 1.0 + next.eps * min_physical(next.a);
        if (min_density <= ctl.positivity_floor)
            throw StepRejected("density positivity violated: reduce dt");
    }
    return next;
}

} // namespace

std::pair<SpectralField, VectorField> nonlinearity(const CompressibleState& s) {
    NonlinearEval ev = eval_nonlinearity(s);
    return {std::move(ev.f), std::move(ev.g)};
}

CompressibleState step_compressible(const CompressibleState& s, double dt,
                                    const StepControl& ctl) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_compressible: dt must be positive");
    CompressibleTable table(s.a.grid(), s.eps, s.lame, dt);
    return advance(table, s, ctl);
}

double default_dt(const CompressibleState& s, const StepControl& ctl) {
    double umax = 0.0;
    for (const auto& comp : s.u)
        umax = std::max(umax, lp_norm(comp, std::numeric_limits<double>::infinity()));
    double dx = s.a.grid().dx();
    double cfl_dt = ctl.cfl * dx / std::max(umax, 1e-14);
    if (!ctl.nonlinear) return cfl_dt;
    return std::min(cfl_dt, 0.1 * s.eps * dx);
}

// ---------------------------------------------------------------------------
// incompressible side

namespace {

struct IncompressibleTable {
    std::vector<double> he, hp1, hp2;
    IncompressibleTable(const Grid& g, double mu, double h) {
        const std::size_t total = g.size();
        he.resize(total);
        hp1.resize(total);
        hp2.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            double k = g.xi_modulus(i);
            heat_phis(-mu * k * k * h, he[i], hp1[i], hp2[i]);
        }
    }
};

VectorField incompressible_rhs(const VectorField& w, double& max_speed) {
    const Grid& grid = w[0].grid();
    const int d = grid.dim();
    const std::size_t total = grid.size();
    std::vector<std::vector<double>> w_phys(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> dw_phys(static_cast<std::size_t>(d * d));
    parallel_for(static_cast<std::size_t>(d + d * d), [&](std::size_t task) {
        if (task < static_cast<std::size_t>(d))
            w_phys[task] = w[task].to_physical();
        else {
            std::size_t q = task - d;
            dw_phys[q] = derivative(w[q / d], static_cast<int>(q % d)).to_physical();
        }
    });
    max_speed = 0.0;
    for (int axis = 0; axis < d; ++axis)
        for (double v : w_phys[static_cast<std::size_t>(axis)])
            max_speed = std::max(max_speed, std::abs(v));

    VectorField conv = zero_vector_field(grid);
    std::vector<double> work(total);
    for (int axis = 0; axis < d; ++axis) {
        for (std::size_t i = 0; i < total; ++i) {
            double acc = 0.0;
            for (int a2 = 0; a2 < d; ++a2)
                acc += w_phys[a2][i] * dw_phys[static_cast<std::size_t>(axis * d + a2)][i];
            work[i] = acc;
        }
        conv[axis] = SpectralField::from_physical(grid, work);
    }
    VectorField rhs = helmholtz_p(conv);
    for (int axis = 0; axis < d; ++axis) {
        rhs[axis] *= -1.0;
        rhs[axis].dealias();
        rhs[axis].set_mean(cplx(0.0, 0.0));
    }
    return rhs;
}

IncompressibleState advance(const IncompressibleTable& T, const IncompressibleState& s,
                            double h, const StepControl& ctl) {
    const Grid& grid = s.w[0].grid();
    const int d = grid.dim();
    const std::size_t total = grid.size();

    double max_speed = 0.0;
    VectorField N0;
    if (ctl.nonlinear) {
        N0 = incompressible_rhs(s.w, max_speed);
        double limit = ctl.cfl * grid.dx() / std::max(max_speed, 1e-14);
        if (h > limit) throw StepRejected("nonlinear CFL exceeded: reduce dt");
    } else {
        N0 = zero_vector_field(grid);
    }

    IncompressibleState pred = s;
    pred.t = s.t + h;
    for (int axis = 0; axis < d; ++axis)
        for (std::size_t i = 0; i < total; ++i)
            pred.w[axis][i] = T.he[i] * s.w[axis][i] + h * T.hp1[i] * N0[axis][i];

    IncompressibleState next = pred;
    if (ctl.nonlinear) {
        double dummy = 0.0;
        VectorField N1 = incompressible_rhs(pred.w, dummy);
        for (int axis = 0; axis < d; ++axis)
            for (std::size_t i = 0; i < total; ++i)
                next.w[axis][i] += h * T.hp2[i] * (N1[axis][i] - N0[axis][i]);
    }
    next.w = helmholtz_p(next.w); // re-project; the discrete rhs is already solenoidal
    for (auto& comp : next.w) comp.dealias();
    return next;
}

} // namespace

IncompressibleState step_incompressible(const IncompressibleState& s, double dt,
                                        const StepControl& ctl) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_incompressible: dt must be positive");
    IncompressibleTable table(s.w[0].grid(), s.mu, dt);
    return advance(table, s, dt, ctl);
}

// ---------------------------------------------------------------------------
// reference trajectory and sampled runs

void WReference::add(double t, VectorField w) {
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("WReference: times must be strictly increasing");
    times_.push_back(t);
    fields_.push_back(std::move(w));
}

VectorField WReference::eval(double t) const {
    if (times_.empty()) throw std::logic_error("WReference: empty");
    if (t <= times_.front()) return fields_.front();
    if (t >= times_.back()) return fields_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());
    double w1 = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    VectorField out = fields_[i - 1];
    for (std::size_t axis = 0; axis < out.size(); ++axis) {
        out[axis] *= (1.0 - w1);
        out[axis].axpy(w1, fields_[i][axis]);
    }
    return out;
}

namespace {

void record_scalar(TrajectorySeries& ts, const SpectralField& f, const LPFilterBank& bank,
                   const SamplePolicy& policy) {
    for (double p : policy.p_values) {
        if (p == 2.0) {
            for (int j = bank.j_min(); j <= bank.j_max(); ++j)
                ts.record(j, p, bank.block_lp_norm(f, j, 2.0));
        } else {
            const int nj = bank.j_max() - bank.j_min() + 1;
            std::vector<double> vals(static_cast<std::size_t>(nj));
            parallel_for(static_cast<std::size_t>(nj), [&](std::size_t idx) {
                vals[idx] = bank.block_lp_norm(f, bank.j_min() + static_cast<int>(idx), p,
                                               policy.oversample_lp);
            });
            for (int j = bank.j_min(); j <= bank.j_max(); ++j)
                ts.record(j, p, vals[static_cast<std::size_t>(j - bank.j_min())]);
        }
    }
}

void record_vector(TrajectorySeries& ts, const VectorField& f, const LPFilterBank& bank,
                   const SamplePolicy& policy, const std::vector<double>& p_values) {
    for (double p : p_values) {
        const int nj = bank.j_max() - bank.j_min() + 1;
        std::vector<double> vals(static_cast<std::size_t>(nj), 0.0);
        if (p == 2.0) {
            for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
                double acc = 0.0;
                for (const auto& comp : f) acc += bank.block_lp_norm(comp, j, 2.0);
                vals[static_cast<std::size_t>(j - bank.j_min())] = acc;
            }
        } else {
            const std::size_t tasks = static_cast<std::size_t>(nj) * f.size();
            std::vector<double> partial(tasks, 0.0);
            parallel_for(tasks, [&](std::size_t idx) {
                std::size_t jidx = idx / f.size();
                std::size_t comp = idx % f.size();
                partial[idx] = bank.block_lp_norm(f[comp], bank.j_min() + static_cast<int>(jidx),
                                                  p, policy.oversample_lp);
            });
            for (std::size_t idx = 0; idx < tasks; ++idx) vals[idx / f.size()] += partial[idx];
        }
        for (int j = bank.j_min(); j <= bank.j_max(); ++j)
            ts.record(j, p, vals[static_cast<std::size_t>(j - bank.j_min())]);
    }
}

} // namespace

CompressibleRunResult run_compressible(const CompressibleState& init, double dt, double t_end,
                                       const SamplePolicy& policy, const LPFilterBank& bank,
                                       const StepControl& ctl, const WReference* wref,
                                       const SnapshotHook& hook) {
    CompressibleRunResult result{ChannelMap{}, init, 0};
    CompressibleState state = init;
    state.a.dealias();
    for (auto& comp : state.u) comp.dealias();

    const double eps_t = 1e-12;
    int steps = 0;
    double h = 0.0;
    if (t_end > 0.0) {
        if (!(dt > 0.0)) throw std::invalid_argument("run_compressible: dt must be positive");
        steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - eps_t)));
        h = t_end / steps;
    }

    auto sample = [&](const CompressibleState& s) {
        double t = s.t;
        VectorField qu = helmholtz_q(s.u);
        VectorField pu = s.u;
        for (std::size_t axis = 0; axis < pu.size(); ++axis) pu[axis] -= qu[axis];
        auto& chan = result.channels;
        chan["a"].append_time(t);
        record_scalar(chan["a"], s.a, bank, policy);
        chan["u"].append_time(t);
        record_vector(chan["u"], s.u, bank, policy, {2.0});
        chan["Qu"].append_time(t);
        record_vector(chan["Qu"], qu, bank, policy, policy.p_values);
        chan["Pu"].append_time(t);
        record_vector(chan["Pu"], pu, bank, policy, policy.p_values);
        if (wref) {
            VectorField diff = pu;
            VectorField w = wref->eval(t);
            for (std::size_t axis = 0; axis < diff.size(); ++axis) diff[axis] -= w[axis];
            chan["Pu_minus_w"].append_time(t);
            record_vector(chan["Pu_minus_w"], diff, bank, policy, policy.p_values);
        }
        if (hook) hook(t, s.a, s.u);
    };

    sample(state);
    if (steps > 0) {
        CompressibleTable table(state.a.grid(), state.eps, state.lame, h);
        for (int step = 1; step <= steps; ++step) {
            state = advance(table, state, ctl);
            state.t = init.t + step * h; // avoid accumulated roundoff
            if (step % policy.stride == 0 || step == steps) sample(state);
        }
    }
    result.state = state;
    result.steps = steps;
    return result;
}

IncompressibleRunResult run_incompressible(const IncompressibleState& init, double dt,
                                           double t_end, const SamplePolicy& policy,
                                           const LPFilterBank& bank, const StepControl& ctl,
                                           const VectorSnapshotHook& hook) {
    IncompressibleRunResult result{ChannelMap{}, init, 0};
    IncompressibleState state = init;
    state.w = helmholtz_p(state.w);
    for (auto& comp : state.w) comp.dealias();

    const double eps_t = 1e-12;
    int steps = 0;
    double h = 0.0;
    if (t_end > 0.0) {
        if (!(dt > 0.0)) throw std::invalid_argument("run_incompressible: dt must be positive");
        steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - eps_t)));
        h = t_end / steps;
    }

    auto sample = [&](const IncompressibleState& s) {
        result.channels["w"].append_time(s.t);
        record_vector(result.channels["w"], s.w, bank, policy, policy.p_values);
        if (hook) hook(s.t, s.w);
    };

    sample(state);
    if (steps > 0) {
        IncompressibleTable table(state.w[0].grid(), state.mu, h);
        for (int step = 1; step <= steps; ++step) {
            state = advance(table, state, h, ctl);
            state.t = init.t + step * h;
            if (step % policy.stride == 0 || step == steps) sample(state);
        }
    }
    result.state = state;
    result.steps = steps;
    return result;
}

} // namespace machlimit
