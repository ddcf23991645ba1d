#include <doctest.h>

#include <cmath>

#include "machlimit/harness.hpp"
#include "machlimit/littlewood_paley.hpp"
#include "machlimit/operators.hpp"
#include "machlimit/probes.hpp"
#include "machlimit/rng.hpp"

using namespace machlimit;

namespace {

VectorField random_vec(const Grid& g, Rng& rng, int kmax = 10) {
    VectorField u = zero_vector_field(g);
    for (auto& comp : u) comp = sample_band_limited(g, rng, kmax, 1.0);
    return u;
}

double vec_max(const VectorField& u) {
    double m = 0.0;
    for (const auto& comp : u) m = std::max(m, comp.max_abs_coeff());
    return m;
}

VectorField vec_diff(const VectorField& a, const VectorField& b) {
    VectorField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

} // namespace

TEST_CASE("Helmholtz projections: gradient and solenoidal inputs") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(2);

    SpectralField phi = sample_band_limited(g, rng, 8, 1.0);
    VectorField grad = gradient(phi);
    CHECK(vec_max(helmholtz_p(grad)) <= 1e-12 * vec_max(grad));
    CHECK(vec_max(vec_diff(helmholtz_q(grad), grad)) <= 1e-12 * vec_max(grad));

    // u = (sin y, sin x) is divergence-free; oracle: apply I - xi xi^T/|xi|^2
    VectorField u = zero_vector_field(g);
    u[0].at_mode(0, 1) = cplx(0.0, -0.5);
    u[0].at_mode(0, -1) = cplx(0.0, 0.5);
    u[1].at_mode(1, 0) = cplx(0.0, -0.5);
    u[1].at_mode(-1, 0) = cplx(0.0, 0.5);
    CHECK(divergence(u).max_abs_coeff() == 0.0);
    VectorField pu = helmholtz_p(u);
    VectorField oracle = u;
    for (std::size_t i = 1; i < g.size(); ++i) {
        double x0 = g.xi_component(i, 0), x1 = g.xi_component(i, 1);
        double k2 = x0 * x0 + x1 * x1;
        cplx dot = x0 * u[0][i] + x1 * u[1][i];
        oracle[0][i] = u[0][i] - x0 * dot / k2;
        oracle[1][i] = u[1][i] - x1 * dot / k2;
    }
    CHECK(vec_max(vec_diff(pu, oracle)) <= 1e-12);
    CHECK(vec_max(vec_diff(pu, u)) <= 1e-12);
}

TEST_CASE("projection algebra on random fields") {
    Grid g(2, 64, 2.0 * M_PI);
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        VectorField u = random_vec(g, rng);
        u[0].set_mean(cplx(0.4, 0.0));
        VectorField p = helmholtz_p(u), q = helmholtz_q(u);
        double scale = std::max(vec_max(u), 1e-300);
        CHECK(vec_max(vec_diff(helmholtz_p(p), p)) <= 1e-12 * scale);
        CHECK(vec_max(vec_diff(helmholtz_q(q), q)) <= 1e-12 * scale);
        CHECK(vec_max(helmholtz_p(q)) <= 1e-12 * scale);
        CHECK(vec_max(helmholtz_q(p)) <= 1e-12 * scale);
        VectorField sum = p;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += q[i];
        CHECK(vec_max(vec_diff(sum, u)) <= 1e-12 * scale);
        CHECK(divergence(p).max_abs_coeff() <= 1e-12 * scale);
        // curl of the curl-free part (2d scalar curl)
        SpectralField curl = derivative(q[1], 0) - derivative(q[0], 1);
        CHECK(curl.max_abs_coeff() <= 1e-11 * scale);
        // the mean passes through P
        CHECK(std::abs(p[0].mean() - u[0].mean()) == 0.0);
        CHECK(std::abs(q[0].mean()) == 0.0);
    }
}

TEST_CASE("Lame operator symbol") {
    Grid g(2, 32, 2.0 * M_PI);
    LameParams lp{0.7, -0.2};
    CHECK(lp.nu() == doctest::Approx(1.2));

    VectorField c = zero_vector_field(g);
    c[0].set_mean(cplx(1.0, 0.0));
    CHECK(vec_max(lame_apply(c, lp)) == 0.0);

    // single divergence-free mode: L u = -mu |xi|^2 u
    VectorField u = zero_vector_field(g);
    u[0].at_mode(0, 2) = cplx(0.5, 0.0);
    u[0].at_mode(0, -2) = cplx(0.5, 0.0);
    VectorField lu = lame_apply(u, lp);
    VectorField expect = u;
    for (auto& compnt : expect) compnt *= -lp.mu * 4.0;
    CHECK(vec_max(vec_diff(lu, expect)) <= 1e-13);

    // single gradient mode: L u = -nu |xi|^2 u
    SpectralField phi(g);
    phi.at_mode(3, 0) = cplx(0.0, 0.25);
    phi.at_mode(-3, 0) = cplx(0.0, -0.25);
    VectorField gphi = gradient(phi);
    VectorField lg = lame_apply(gphi, lp);
    VectorField expect2 = gphi;
    for (auto& compnt : expect2) compnt *= -lp.nu() * 9.0;
    CHECK(vec_max(vec_diff(lg, expect2)) <= 1e-12);
}

TEST_CASE("Lame ellipticity on random fields") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(31);
    LameParams lp{0.5, 0.0};
    for (int trial = 0; trial < 5; ++trial) {
        VectorField u = random_vec(g, rng);
        VectorField lu = lame_apply(u, lp);
        double inner = 0.0, grad2 = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            for (std::size_t i = 0; i < g.size(); ++i)
                inner += (std::conj(lu[axis][i]) * u[axis][i]).real();
            for (int a2 = 0; a2 < 2; ++a2) {
                double c = lp_norm(derivative(u[axis], a2), 2.0);
                grad2 += c * c;
            }
        }
        inner *= g.volume();
        CHECK(inner <= -std::min(lp.mu, lp.nu()) * grad2 + 1e-10);
    }
}

TEST_CASE("effective velocity combines Q u and the density potential") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(37);
    VectorField u = random_vec(g, rng);
    SpectralField a = sample_band_limited(g, rng, 8, 1.0);

    CHECK_THROWS_AS((void)effective_velocity(a, u, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)effective_velocity(a, u, -1.0), std::invalid_argument);

    SpectralField zero(g);
    VectorField w0 = effective_velocity(zero, u, 0.25);
    CHECK(vec_max(vec_diff(w0, helmholtz_q(u))) <= 1e-13 * vec_max(u));

    VectorField uz = zero_vector_field(g);
    VectorField w1 = effective_velocity(a, uz, 0.25);
    VectorField expect = gradient(inverse_laplacian(a));
    for (auto& compnt : expect) compnt *= 4.0; // 1/eps
    CHECK(vec_max(vec_diff(w1, expect)) <= 1e-13 * vec_max(expect));
}

TEST_CASE("effective velocity satisfies the damped balance along linear flow") {
    // with f = g = 0 the pair (a, w) obeys eps a_t + a/eps = -div w; check a
    // centered finite-difference residual on the exactly-evolved fields
    Grid g(2, 16, 2.0 * M_PI);
    Rng rng(41);
    const double eps = 0.5;
    CompressibleState s{sample_band_limited(g, rng, 4, 0.5), random_vec(g, rng, 4), 0.0, eps,
                        LameParams{0.25, 0.5}, PressureLaw::gamma_law(1.4)};

    const double t = 0.3, h = 1e-3;
    auto states = [&](double tt) { return linear_analytic_state(s, tt); };
    CompressibleState sm2 = states(t - 2 * h), sm1 = states(t - h), s0 = states(t),
                      sp1 = states(t + h), sp2 = states(t + 2 * h);
    VectorField w = effective_velocity(s0.a, s0.u, eps);
    SpectralField divw = divergence(w);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        // 4th-order centered d/dt
        cplx dadt = (-sp2.a[i] + 8.0 * sp1.a[i] - 8.0 * sm1.a[i] + sm2.a[i]) / (12.0 * h);
        cplx residual = eps * dadt + s0.a[i] / eps + divw[i];
        worst = std::max(worst, std::abs(residual));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("acoustic propagator is a per-mode rotation") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(43);
    SpectralField a = sample_band_limited(g, rng, 8, 1.0);
    SpectralField v = sample_band_limited(g, rng, 8, 1.0);

    auto [a0, v0] = acoustic_propagate(a, v, 0.0);
    CHECK((a0 - a).max_abs_coeff() == 0.0);
    CHECK((v0 - v).max_abs_coeff() == 0.0);

    // per-mode norm is preserved exactly
    auto [a1, v1] = acoustic_propagate(a, v, 1.37);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double before = std::norm(a[i]) + std::norm(v[i]);
        double after = std::norm(a1[i]) + std::norm(v1[i]);
        CHECK(after == doctest::Approx(before).epsilon(1e-13));
    }

    // |xi| = 1, t = pi/2 maps (a, v) to (-v, a)
    SpectralField am(g), vm(g);
    am.at_mode(1, 0) = cplx(0.5, 0.0);
    am.at_mode(-1, 0) = cplx(0.5, 0.0);
    vm.at_mode(1, 0) = cplx(0.0, -0.5);
    vm.at_mode(-1, 0) = cplx(0.0, 0.5);
    auto [ar, vr] = acoustic_propagate(am, vm, M_PI / 2.0);
    SpectralField expect_a = vm;
    expect_a *= -1.0;
    CHECK((ar - expect_a).max_abs_coeff() <= 1e-15);
    CHECK((vr - am).max_abs_coeff() <= 1e-15);
}

TEST_CASE("heat propagator") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(47);
    SpectralField f = sample_band_limited(g, rng, 8, 1.0);

    CHECK_THROWS_AS((void)heat_propagate(f, -1.0, 1.0), std::invalid_argument);
    CHECK((heat_propagate(f, 0.0, 1.0) - f).max_abs_coeff() == 0.0);

    SpectralField m(g);
    m.at_mode(2, 0) = cplx(0.5, 0.0);
    m.at_mode(-2, 0) = cplx(0.5, 0.0);
    SpectralField hm = heat_propagate(m, 1.0, 1.0);
    CHECK(std::abs(hm.at_mode(2, 0)) ==
          doctest::Approx(0.5 * std::exp(-4.0)).epsilon(1e-14));

    double prev = lp_norm(f, 2.0);
    for (double t : {0.1, 0.3, 0.9}) {
        double cur = lp_norm(heat_propagate(f, t, 0.7), 2.0);
        CHECK(cur <= prev + 1e-14);
        prev = cur;
    }
}

TEST_CASE("multipliers commute with dyadic blocks") {
    Grid g(2, 32, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(53);
    VectorField u = random_vec(g, rng);
    SpectralField a = sample_band_limited(g, rng, 8, 1.0);
    const int j = 3;

    VectorField pu = helmholtz_p(u);
    VectorField pu_blk = zero_vector_field(g);
    VectorField blk_u = zero_vector_field(g);
    for (int axis = 0; axis < 2; ++axis) {
        pu_blk[axis] = bank.dyadic_block(pu[axis], j);
        blk_u[axis] = bank.dyadic_block(u[axis], j);
    }
    CHECK(vec_max(vec_diff(pu_blk, helmholtz_p(blk_u))) <= 1e-12 * vec_max(u));

    SpectralField ha = heat_propagate(a, 0.4, 0.9);
    CHECK((bank.dyadic_block(ha, j) - heat_propagate(bank.dyadic_block(a, j), 0.4, 0.9))
              .max_abs_coeff() <= 1e-12 * a.max_abs_coeff());

    auto [ra, rv] = acoustic_propagate(a, a, 0.8);
    auto [ba, bv] = acoustic_propagate(bank.dyadic_block(a, j), bank.dyadic_block(a, j), 0.8);
    CHECK((bank.dyadic_block(ra, j) - ba).max_abs_coeff() <= 1e-12 * a.max_abs_coeff());
    CHECK((bank.dyadic_block(rv, j) - bv).max_abs_coeff() <= 1e-12 * a.max_abs_coeff());
}

TEST_CASE("symbol op zero-mode rules") {
    Grid g(2, 16, 2.0 * M_PI);
    SpectralField f(g);
    f.set_mean(cplx(0.9, 0.0));
    f.at_mode(1, 0) = cplx(0.5, 0.0);
    f.at_mode(-1, 0) = cplx(0.5, 0.0);

    SymbolOp annihilating{"half",
                          [](const Grid&, std::size_t) { return cplx(0.5, 0.0); },
                          SymbolOp::ZeroModeRule::annihilate};
    SpectralField out = annihilating.apply(f);
    CHECK(std::abs(out.mean()) == 0.0);
    CHECK(std::abs(out.at_mode(1, 0)) == doctest::Approx(0.25));

    SpectralField idout = SymbolOp::identity().apply(f);
    CHECK((idout - f).max_abs_coeff() == 0.0);
}

TEST_CASE("acoustic potential round-trips the curl-free part") {
    Grid g(2, 32, 2.0 * M_PI);
    Rng rng(59);
    VectorField u = random_vec(g, rng);
    SpectralField v = acoustic_potential(u);
    VectorField qu = helmholtz_q(u);
    VectorField back = velocity_from_potential(v);
    CHECK(vec_max(vec_diff(back, qu)) <= 1e-12 * vec_max(u));
}
