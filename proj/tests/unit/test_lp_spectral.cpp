#include <doctest.h>

#include <cmath>

#include "machlimit/littlewood_paley.hpp"
#include "machlimit/probes.hpp"
#include "machlimit/rng.hpp"
#include "machlimit/trajectory.hpp"

using namespace machlimit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// independent copy of the radial profile for oracle computations
double theta_ref(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double t = r - 1.0;
    return 1.0 - (35.0 * std::pow(t, 4) - 84.0 * std::pow(t, 5) + 70.0 * std::pow(t, 6) -
                  20.0 * std::pow(t, 7));
}

double phi_ref(int j, double rho) {
    return theta_ref(std::ldexp(rho, -j)) - theta_ref(std::ldexp(rho, -j + 1));
}

SpectralField single_cosine(const Grid& g, int kx, int ky, double amp = 1.0) {
    SpectralField f(g);
    f.at_mode(kx, ky) = cplx(amp / 2.0, 0.0);
    f.at_mode(-kx, -ky) = cplx(amp / 2.0, 0.0);
    return f;
}

} // namespace

TEST_CASE("filter bank telescopes exactly on resolvable modes") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    CHECK(bank.j_min() <= 0);
    CHECK(bank.j_max() >= 4);

    // sum of filters equals 1 on 2 <= |k| <= 16, and the mean is excluded
    for (std::size_t i = 0; i < g.size(); ++i) {
        double rho = g.xi_modulus(i);
        if (rho < 2.0 || rho > 16.0) continue;
        double sum = 0.0;
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.filter(j)[i];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) CHECK(bank.filter(j)[0] == 0.0);
}

TEST_CASE("only two shells can see |k| = 3") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    // oracle: evaluate the theta telescope at r = 3
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        double expected = phi_ref(j, 3.0);
        CHECK(LPFilterBank::filter_value(j, 3.0) == doctest::Approx(expected).epsilon(1e-15));
        if (j != 1 && j != 2) CHECK(LPFilterBank::filter_value(j, 3.0) == 0.0);
    }
    CHECK(LPFilterBank::filter_value(1, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(LPFilterBank::filter_value(2, 3.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dyadic blocks: multiplier action, partition, support") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(3);

    SpectralField f = single_cosine(g, 4, 0);
    SpectralField b2 = bank.dyadic_block(f, 2);
    CHECK((b2 - f).max_abs_coeff() == 0.0); // phi_2(4) = 1 exactly

    CHECK_THROWS_AS((void)bank.dyadic_block(f, bank.j_max() + 1), std::out_of_range);

    // partition of unity: sum of blocks recovers f - mean on band-limited f
    SpectralField noise = sample_band_limited(g, rng, 20, 1.0);
    noise.set_mean(cplx(0.7, 0.0));
    SpectralField sum(g);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.dyadic_block(noise, j);
    SpectralField expect = noise;
    expect.set_mean(cplx(0.0, 0.0));
    CHECK((sum - expect).max_abs_coeff() <= 1e-12 * noise.max_abs_coeff());

    // Fourier support of a block stays in the dyadic annulus
    int j = 3;
    SpectralField blk = bank.dyadic_block(noise, j);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double rho = g.xi_modulus(i);
        if (rho < std::ldexp(1.0, j - 1) || rho > std::ldexp(1.0, j + 1))
            CHECK(std::abs(blk[i]) == 0.0);
    }
}

TEST_CASE("low_cut telescope and idempotence") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(5);
    SpectralField f = sample_band_limited(g, rng, 15, 1.0);
    f.set_mean(cplx(0.2, 0.0));

    SpectralField full = bank.low_cut(f, bank.j_max());
    SpectralField expect = f;
    expect.set_mean(cplx(0.0, 0.0));
    CHECK((full - expect).max_abs_coeff() <= 1e-12 * f.max_abs_coeff());

    CHECK(bank.low_cut(f, bank.j_min() - 1).max_abs_coeff() == 0.0);

    SpectralField mode4 = single_cosine(g, 4, 0);
    CHECK(bank.low_cut(mode4, 0).max_abs_coeff() == 0.0);

    // the smooth cutoff is a true projection only where the telescope is
    // exactly 0 or 1, i.e. away from the transition annulus (2^j, 2^{j+1})
    SpectralField inside = sample_band_limited(g, rng, 5, 1.0); // |xi| <= 5 sqrt(2) < 8
    SpectralField once = bank.low_cut(inside, 3);
    SpectralField twice = bank.low_cut(once, 3);
    CHECK((twice - once).max_abs_coeff() <= 1e-12 * std::max(once.max_abs_coeff(), 1e-300));
}

TEST_CASE("besov norm: single-mode oracle and bands") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);

    CHECK(besov_norm(SpectralField(g), bank, {2.0, 1.0, 0.0}) == 0.0);

    SpectralField f = single_cosine(g, 4, 0);
    double l2 = lp_norm(f, 2.0); // = sqrt(vol/2)
    CHECK(l2 == doctest::Approx(std::sqrt(0.5) * 2.0 * M_PI).epsilon(1e-13));

    // direct summation oracle over the active shells
    double expected = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) expected += phi_ref(j, 4.0) * l2;
    double norm = besov_norm(f, bank, {2.0, 1.0, 0.0});
    CHECK(norm == doctest::Approx(expected).epsilon(1e-13));
    CHECK(norm == doctest::Approx(l2).epsilon(1e-13)); // exactly one active shell

    CHECK(besov_norm(f, bank, {2.0, 1.0, 0.0}, Band::high(16.0)) == 0.0);
}

TEST_CASE("band completeness splits the full norm") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(11);
    SpectralField f = sample_band_limited(g, rng, 20, 1.0);
    for (double sigma : {1.0, 2.0}) {
        BesovIndex idx{2.0, sigma, 0.37};
        double alpha = 2.0, beta = 8.0;
        double lo = besov_norm(f, bank, idx, Band::low(alpha));
        double mid = besov_norm(f, bank, idx, Band::mid(alpha, beta));
        double hi = besov_norm(f, bank, idx, Band::high(beta));
        double all = besov_norm(f, bank, idx);
        double combined = std::pow(std::pow(lo, sigma) + std::pow(mid, sigma) +
                                   std::pow(hi, sigma), 1.0 / sigma);
        CHECK(combined == doctest::Approx(all).epsilon(1e-10));
    }
}

TEST_CASE("quasi-orthogonality of distant shells is exact") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(13);
    SpectralField f = sample_band_limited(g, rng, 20, 1.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        for (int jp = j + 2; jp <= bank.j_max(); ++jp) {
            SpectralField both = bank.dyadic_block(bank.dyadic_block(f, j), jp);
            CHECK(both.max_abs_coeff() == 0.0);
        }
}

TEST_CASE("Bernstein bounds are exact on a single shell") {
    Grid g(2, 64, 2.0 * M_PI);
    LPFilterBank bank(g);
    Rng rng(17);
    SpectralField f = bank.dyadic_block(sample_band_limited(g, rng, 20, 1.0), 3);
    double fn = lp_norm(f, 2.0);
    REQUIRE(fn > 0.0);
    double gn = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        double c = lp_norm(derivative(f, axis), 2.0);
        gn += c * c;
    }
    gn = std::sqrt(gn);
    CHECK(gn <= std::ldexp(1.0, 4) * fn);
    CHECK(gn >= std::ldexp(1.0, 2) * fn);
}

TEST_CASE("dilation rescales critical norms by the scaling factor") {
    // f_lambda(x) = f(2x) on the half-period box; Besov B^s_{2,1} changes by
    // 2^{s - d/2} exactly up to shell bookkeeping
    Grid g1(2, 32, 2.0 * M_PI);
    Grid g2(2, 32, M_PI);
    LPFilterBank bank1(g1), bank2(g2);
    Rng rng(19);
    SpectralField f1 = sample_band_limited(g1, rng, 6, 1.0);
    SpectralField f2(g2, f1.coeffs()); // same lattice coefficients, doubled |xi|

    for (double s : {0.5, -0.5, 1.0}) {
        double n1 = besov_norm(f1, bank1, {2.0, 1.0, s});
        double n2 = besov_norm(f2, bank2, {2.0, 1.0, s});
        double predicted = std::pow(2.0, s - 1.0) * n1; // 2^{s - d/2}, d = 2
        CHECK(n2 == doctest::Approx(predicted).epsilon(0.02));
    }
}

TEST_CASE("lp norms: analytic values and oversampling") {
    Grid g(2, 64, 2.0 * M_PI);
    SpectralField f = single_cosine(g, 3, 1);
    double vol = g.volume();
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(vol / 2.0)).epsilon(1e-13));
    // mean |cos|^4 = 3/8 over full periods
    CHECK(lp_norm(f, 4.0) == doctest::Approx(std::pow(vol * 3.0 / 8.0, 0.25)).epsilon(1e-12));
    CHECK(lp_norm(f, kInf) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian bookkeeping") {
    Grid g(2, 16, 2.0 * M_PI);
    SpectralField f(g);
    f.at_mode(1, 2) = cplx(0.3, 0.4);
    CHECK(f.hermitian_error() > 0.1);
    f.enforce_hermitian();
    CHECK(f.hermitian_error() <= 1e-15);
    auto vals = f.to_physical();
    SpectralField back = SpectralField::from_physical(g, vals);
    CHECK((back - f).max_abs_coeff() <= 1e-14);
}

TEST_CASE("time besov norms over sampled trajectories") {
    Grid g(2, 32, 2.0 * M_PI);
    LPFilterBank bank(g);
    SpectralField f = single_cosine(g, 4, 0);
    BesovIndex idx{2.0, 1.0, 0.0};
    double stat = besov_norm(f, bank, idx);

    // constant-in-time: L^1 over (0, T) is T * static value
    TrajectorySeries traj;
    const double T = 0.8;
    for (int i = 0; i <= 40; ++i) {
        traj.append_time(T * i / 40.0);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j)
            traj.record(j, 2.0, bank.block_lp_norm(f, j, 2.0));
    }
    for (auto flavor : {TimeNormFlavor::chemin_lerner, TimeNormFlavor::lebesgue}) {
        CHECK(time_besov_norm(traj, 1.0, idx, Band::all(), flavor) ==
              doctest::Approx(T * stat).epsilon(1e-12));
        CHECK(time_besov_norm(traj, kInf, idx, Band::all(), flavor) ==
              doctest::Approx(stat).epsilon(1e-12));
    }

    // zero trajectory
    TrajectorySeries zero;
    zero.append_time(0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) zero.record(j, 2.0, 0.0);
    zero.append_time(1.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) zero.record(j, 2.0, 0.0);
    CHECK(time_besov_norm(zero, 2.0, idx) == 0.0);

    // exponential decay: the sup in time sits at t = 0 (dense sampling)
    TrajectorySeries decay;
    for (int i = 0; i <= 400; ++i) {
        double t = i / 400.0;
        decay.append_time(t);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j)
            decay.record(j, 2.0, std::exp(-t) * bank.block_lp_norm(f, j, 2.0));
    }
    CHECK(time_besov_norm(decay, kInf, idx) == doctest::Approx(stat).epsilon(1e-12));

    // single sample with finite r is rejected
    TrajectorySeries single;
    single.append_time(0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) single.record(j, 2.0, 1.0);
    CHECK_THROWS_WITH_AS((void)time_besov_norm(single, 2.0, idx), "insufficient samples",
                         std::invalid_argument);
    CHECK(time_besov_norm(single, kInf, idx) > 0.0);

    // empty band is zero, not an error
    CHECK(time_besov_norm(traj, 1.0, idx, Band::high(1e9)) == 0.0);
}
