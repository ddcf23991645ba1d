#include "machlimit/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace machlimit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument("estimate_probe: hypothesis violated: " + what);
}

struct Ctx {
    const Grid& grid;
    const LPFilterBank& bank;
    const ProbeParams& pp;
    Rng& rng;
    const FieldSampler& sample;
};

SpectralField draw(Ctx& c) { return c.sample(c.grid, c.rng, c.pp); }

double bnorm(const SpectralField& f, const Ctx& c, double p, double sigma, double s,
             const Band& band = Band::all()) {
    return besov_norm(f, c.bank, BesovIndex{p, sigma, s}, band);
}

double bnorm(const VectorField& f, const Ctx& c, double p, double sigma, double s,
             const Band& band = Band::all()) {
    return besov_norm(f, c.bank, BesovIndex{p, sigma, s}, band);
}

// --- individual lemma probes; each returns LHS / RHS for one trial --------

std::optional<double> probe_para_T(Ctx& c, bool truncated) {
    const auto& pp = c.pp;
    require(std::abs(inv(pp.p) - inv(pp.p1) - inv(pp.p2)) < 1e-12, "1/p = 1/p1 + 1/p2");
    require(pp.s1 <= 0.0, "s1 <= 0 for the low-high paraproduct");
    const double s = pp.s1 + pp.s2;
    SpectralField f = draw(c), g = draw(c);
    SpectralField t = paraproduct_low_high(f, g, c.bank);
    double lhs, rhs;
    if (truncated) {
        lhs = bnorm(t, c, pp.p, pp.sigma, s, Band::low(pp.beta));
        rhs = bnorm(f, c, pp.p1, 1.0, pp.s1, Band::low(pp.beta)) *
              bnorm(g, c, pp.p2, pp.sigma, pp.s2, Band::low(4.0 * pp.beta));
    } else {
        lhs = bnorm(t, c, pp.p, pp.sigma, s);
        rhs = bnorm(f, c, pp.p1, 1.0, pp.s1) * bnorm(g, c, pp.p2, pp.sigma, pp.s2);
    }
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_para_R(Ctx& c, bool truncated) {
    const auto& pp = c.pp;
    require(std::abs(inv(pp.p) - inv(pp.p1) - inv(pp.p2)) < 1e-12, "1/p = 1/p1 + 1/p2");
    require(inv(pp.sigma) <= inv(pp.sigma1) + inv(pp.sigma2) + 1e-12,
            "1/sigma <= 1/sigma1 + 1/sigma2");
    require(pp.s1 + pp.s2 > 0.0, "s = s1 + s2 > 0");
    const double s = pp.s1 + pp.s2;
    SpectralField f = draw(c), g = draw(c);
    SpectralField r = paraproduct_resonant(f, g, c.bank);
    double lhs = bnorm(r, c, pp.p, pp.sigma, s);
    double rhs;
    if (truncated) {
        require(std::abs(inv(pp.p) - inv(pp.p3) - inv(pp.p4)) < 1e-12, "1/p = 1/p3 + 1/p4");
        require(inv(pp.sigma) <= inv(pp.sigma3) + inv(pp.sigma4) + 1e-12,
                "1/sigma <= 1/sigma3 + 1/sigma4");
        require(std::abs((pp.s1 + pp.s2) - (pp.s3 + pp.s4)) < 1e-12, "s1 + s2 = s3 + s4");
        rhs = bnorm(f, c, pp.p1, pp.sigma1, pp.s1, Band::high(pp.beta / 4.0)) *
                  bnorm(g, c, pp.p2, pp.sigma2, pp.s2, Band::high(pp.beta)) +
              bnorm(f, c, pp.p3, pp.sigma3, pp.s3, Band::low(4.0 * pp.beta)) *
                  bnorm(g, c, pp.p4, pp.sigma4, pp.s4, Band::low(pp.beta));
    } else {
        rhs = bnorm(f, c, pp.p1, pp.sigma1, pp.s1) * bnorm(g, c, pp.p2, pp.sigma2, pp.s2);
    }
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_prod_1(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(pp.s + d * inv(pp.p1) > 0.0, "s + d/p1 > 0");
    require(inv(pp.p) + inv(pp.p1) <= 1.0 + 1e-12, "1/p + 1/p1 <= 1");
    require(pp.alpha1 >= 0.0 && pp.alpha2 >= 0.0, "alpha1, alpha2 >= 0");
    SpectralField f = draw(c), g = draw(c);
    SpectralField prod = dealiased_product(f, g);
    double lhs = bnorm(prod, c, pp.p, pp.sigma, pp.s);
    double rhs = bnorm(f, c, pp.p1, 1.0, d * inv(pp.p1) - pp.alpha1) *
                     bnorm(g, c, pp.p, pp.sigma, pp.s + pp.alpha1) +
                 bnorm(f, c, pp.p, pp.sigma, pp.s + pp.alpha2) *
                     bnorm(g, c, pp.p2, 1.0, d * inv(pp.p2) - pp.alpha2);
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_prod_2(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    const double gap = d * (2.0 * inv(pp.q) - 0.5);
    require(2.0 <= pp.q && pp.q <= 4.0, "2 <= q <= 4");
    require(pp.s1 <= gap + 1e-12 && pp.s4 <= gap + 1e-12, "s1, s4 <= d(2/q - 1/2)");
    require(pp.s1 + pp.s2 > 0.0, "s > 0");
    require(std::abs((pp.s1 + pp.s2) - (pp.s3 + pp.s4)) < 1e-12, "s1 + s2 = s3 + s4");
    const double s = pp.s1 + pp.s2;
    SpectralField f = draw(c), g = draw(c);
    SpectralField prod = dealiased_product(f, g);
    double lhs = bnorm(prod, c, 2.0, pp.sigma, s - gap, Band::low(pp.beta));
    double rhs = bnorm(f, c, pp.q, 1.0, pp.s1, Band::low(pp.beta)) *
                     bnorm(g, c, pp.q, pp.sigma, pp.s2, Band::low(4.0 * pp.beta)) +
                 bnorm(f, c, pp.q, pp.sigma, pp.s3) * bnorm(g, c, pp.q, 1.0, pp.s4);
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_comm(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(pp.s + d * inv(pp.p1) > 0.0, "s + d/p1 > 0");
    require(inv(pp.p) + inv(pp.p1) <= 1.0 + 1e-12, "1/p + 1/p1 <= 1");
    require(pp.alpha1 >= 0.0 && pp.alpha2 >= 0.0, "alpha1, alpha2 >= 0");
    SpectralField a = draw(c);
    VectorField u = sample_band_limited_solenoidal(c.grid, c.rng, pp.band_kmax, pp.amplitude);
    // lhs: l^sigma over j of 2^{s j} || [u.grad, eta(D) block_j] a ||_{L^p}
    bool sigma_inf = std::isinf(pp.sigma);
    double acc = 0.0;
    for (int j = c.bank.j_min(); j <= c.bank.j_max(); ++j) {
        SpectralField comm = commutator_transport(u, a, j, c.bank);
        double term = std::pow(2.0, pp.s * j) * lp_norm(comm, pp.p);
        acc = sigma_inf ? std::max(acc, term) : acc + std::pow(term, pp.sigma);
    }
    double lhs = sigma_inf ? acc : std::pow(acc, 1.0 / pp.sigma);
    double rhs = bnorm(u, c, pp.p1, 1.0, d * inv(pp.p1) + 1.0 - pp.alpha1) *
                     bnorm(a, c, pp.p, pp.sigma, pp.s + pp.alpha1) +
                 bnorm(u, c, pp.p, pp.sigma, pp.s + 1.0 + pp.alpha2) *
                     bnorm(a, c, pp.p2, 1.0, d * inv(pp.p2) - pp.alpha2);
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_composition(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(pp.s + d * inv(pp.p1) > 0.0, "s + d/p1 > 0");
    require(inv(pp.p) + inv(pp.p1) <= 1.0 + 1e-12, "1/p + 1/p1 <= 1");
    require(!std::isinf(pp.p1), "p1 < inf");
    SpectralField psi = draw(c);
    // keep |psi| well inside the domain of a/(1+a)
    double sup = lp_norm(psi, kInf);
    if (sup == 0.0) return std::nullopt;
    psi *= 0.4 / sup;
    SpectralField fpsi = apply_j(psi);
    double lhs = bnorm(fpsi, c, pp.p, 1.0, pp.s);
    double rhs = (1.0 + bnorm(psi, c, pp.p1, 1.0, d * inv(pp.p1))) *
                 bnorm(psi, c, pp.p, 1.0, pp.s);
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

// Time-dependent lemmas are probed on constant-in-time fields over I=(0,1),
// where every L^r-in-time factor reduces to the static norm.
std::optional<double> probe_nonlin_2(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(inv(pp.p) + inv(pp.q) > 0.0 && inv(pp.p) + inv(pp.q) <= 1.0 + 1e-12,
            "0 < 1/p + 1/q <= 1");
    SpectralField a = draw(c);
    VectorField u = sample_band_limited_solenoidal(c.grid, c.rng, pp.band_kmax, pp.amplitude);
    // add a curl-free component so div u is nontrivial
    SpectralField phi = draw(c);
    VectorField gphi = gradient(phi);
    for (int axis = 0; axis < d; ++axis) u[axis].axpy(0.5, gphi[axis]);

    const double eps = pp.eps, beta = pp.beta;
    Band high = Band::high(beta / eps);

    SpectralField divq = divergence(helmholtz_q(u));
    double lhs = eps * bnorm(dealiased_product(a, divq), c, pp.p, 1.0, d * inv(pp.p));
    for (int j = c.bank.j_min(); j <= c.bank.j_max(); ++j) {
        SpectralField comm = commutator_transport(u, a, j, c.bank);
        lhs += eps * std::pow(2.0, d * inv(pp.p) * j) * lp_norm(comm, pp.p);
    }
    lhs += eps * lp_norm(divergence(u), kInf) * bnorm(a, c, pp.p, 1.0, d * inv(pp.p));

    double rhs = eps * bnorm(a, c, pp.q, 1.0, d * inv(pp.q)) *
                     bnorm(u, c, pp.p, 1.0, d * inv(pp.p) + 1.0, high) +
                 eps * bnorm(a, c, pp.p, 1.0, d * inv(pp.p)) *
                     bnorm(u, c, pp.q, 1.0, d * inv(pp.q) + 1.0, high) +
                 beta * bnorm(a, c, pp.q, 1.0, d * inv(pp.q)) *
                     bnorm(u, c, pp.p, 1.0, d * inv(pp.p)) +
                 beta * bnorm(a, c, pp.p, 1.0, d * inv(pp.p)) *
                     bnorm(u, c, pp.q, 1.0, d * inv(pp.q));
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_nonlin_3(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(inv(pp.p) + inv(pp.q) > 1.0 / d && inv(pp.p) + inv(pp.q) <= 1.0 + 1e-12,
            "1/d < 1/p + 1/q <= 1");
    VectorField u = sample_band_limited_solenoidal(c.grid, c.rng, pp.band_kmax, pp.amplitude);
    VectorField v = sample_band_limited_solenoidal(c.grid, c.rng, pp.band_kmax, pp.amplitude);
    VectorField adv = zero_vector_field(c.grid);
    for (int axis = 0; axis < d; ++axis) adv[axis] = advect(u, v[axis]);
    double lhs = bnorm(adv, c, pp.p, 1.0, d * inv(pp.p) - 1.0);
    double rhs = bnorm(u, c, pp.p, 1.0, d * inv(pp.p)) * bnorm(v, c, pp.q, 1.0, d * inv(pp.q)) +
                 bnorm(u, c, pp.q, 1.0, d * inv(pp.q)) * bnorm(v, c, pp.p, 1.0, d * inv(pp.p));
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_nonlin_4(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(inv(pp.p) + inv(pp.q) > 1.0 / d && inv(pp.p) + inv(pp.q) <= 1.0 + 1e-12,
            "1/d < 1/p + 1/q <= 1");
    SpectralField a = draw(c);
    // enforce the smallness hypothesis eps ||a||_{Linf cap B^{d/q}_{q,1}} <= 1/2
    double size = std::max(lp_norm(a, kInf), bnorm(a, c, pp.q, 1.0, d * inv(pp.q)));
    if (size == 0.0) return std::nullopt;
    a *= 0.5 / (pp.eps * size) * 0.9;
    VectorField u = sample_band_limited_solenoidal(c.grid, c.rng, pp.band_kmax, pp.amplitude);
    LameParams lame{0.5, 0.0};
    VectorField lu = lame_apply(u, lame);

    SpectralField ja = apply_j(pp.eps * a);
    VectorField prod = zero_vector_field(c.grid);
    for (int axis = 0; axis < d; ++axis) prod[axis] = dealiased_product(ja, lu[axis]);

    Band high = Band::high(pp.beta / pp.eps);
    double lhs = bnorm(prod, c, pp.p, 1.0, d * inv(pp.p) - 1.0);
    double rhs = pp.eps * bnorm(a, c, pp.q, 1.0, d * inv(pp.q)) *
                     bnorm(u, c, pp.p, 1.0, d * inv(pp.p) + 1.0, high) +
                 pp.eps * bnorm(a, c, pp.p, 1.0, d * inv(pp.p)) *
                     bnorm(u, c, pp.q, 1.0, d * inv(pp.q) + 1.0, high) +
                 pp.beta * bnorm(a, c, pp.q, 1.0, d * inv(pp.q)) *
                     bnorm(u, c, pp.p, 1.0, d * inv(pp.p)) +
                 pp.beta * bnorm(a, c, pp.p, 1.0, d * inv(pp.p)) *
                     bnorm(u, c, pp.q, 1.0, d * inv(pp.q));
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

std::optional<double> probe_nonlin_5(Ctx& c) {
    const auto& pp = c.pp;
    const int d = c.grid.dim();
    require(inv(pp.p) + inv(pp.q) > 1.0 / d && inv(pp.p) + inv(pp.q) <= 1.0 + 1e-12,
            "1/d < 1/p + 1/q <= 1");
    SpectralField a = draw(c);
    double size = std::max(lp_norm(a, kInf), bnorm(a, c, pp.q, 1.0, d * inv(pp.q)));
    if (size == 0.0) return std::nullopt;
    a *= 0.5 / (pp.eps * size) * 0.9;

    auto normalized = normalize_parameters(1.0, PressureLaw::gamma_law(pp.gamma),
                                           LameParams{0.5, 0.0});
    SpectralField ka = apply_k(pp.eps * a, normalized.law);
    VectorField grad_a = gradient(a);
    VectorField prod = zero_vector_field(c.grid);
    for (int axis = 0; axis < d; ++axis) prod[axis] = dealiased_product(ka, grad_a[axis]);

    double lhs = (1.0 / pp.eps) * bnorm(prod, c, pp.p, 1.0, d * inv(pp.p) - 1.0);
    double rhs = bnorm(a, c, pp.q, 1.0, d * inv(pp.q)) * bnorm(a, c, pp.p, 1.0, d * inv(pp.p));
    if (rhs == 0.0) return std::nullopt;
    return lhs / rhs;
}

} // namespace

SpectralField sample_band_limited(const Grid& grid, Rng& rng, int kmax, double amplitude) {
    kmax = std::min(kmax, grid.dealias_limit());
    SpectralField f(grid);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i) {
        auto k = grid.wavevector(i);
        bool inside = true;
        double k2 = 0.0;
        for (int axis = 0; axis < grid.dim(); ++axis) {
            if (std::abs(k[axis]) > kmax) inside = false;
            k2 += double(k[axis]) * k[axis];
        }
        if (!inside) continue;
        double decay = 1.0 / (1.0 + k2);
        f[i] = decay * cplx(rng.normal(), rng.normal());
    }
    f.enforce_hermitian();
    f.set_mean(cplx(0.0, 0.0));
    double peak = f.max_abs_coeff();
    if (peak > 0.0) f *= amplitude / peak;
    return f;
}

VectorField sample_band_limited_solenoidal(const Grid& grid, Rng& rng, int kmax,
                                           double amplitude) {
    VectorField u = zero_vector_field(grid);
    for (int axis = 0; axis < grid.dim(); ++axis)
        u[axis] = sample_band_limited(grid, rng, kmax, amplitude);
    return helmholtz_p(u);
}

std::vector<std::string> probe_lemma_ids() {
    return {"para-0", "para-0-R", "para-1",  "para-2",   "prod-1",   "prod-2",
            "comm",   "composition", "nonlin-2", "nonlin-3", "nonlin-4", "nonlin-5"};
}

ProbeParams default_probe_params(const std::string& lemma_id, int d) {
    ProbeParams pp;
    if (lemma_id == "para-0" || lemma_id == "para-1") {
        pp.p = 2.0;
        pp.p1 = kInf;
        pp.p2 = 2.0;
        pp.sigma = 1.0;
        pp.s1 = -0.5;
        pp.s2 = 1.0;
    } else if (lemma_id == "para-0-R" || lemma_id == "para-2") {
        pp.p = 2.0;
        pp.p1 = pp.p2 = pp.p3 = pp.p4 = 4.0;
        pp.s1 = pp.s2 = pp.s3 = pp.s4 = 0.5;
    } else if (lemma_id == "prod-1" || lemma_id == "comm") {
        pp.p = 2.0;
        pp.p1 = pp.p2 = 4.0;
        pp.s = 0.5;
    } else if (lemma_id == "prod-2") {
        pp.q = 3.0;
        double gap = d * (2.0 / pp.q - 0.5);
        pp.s1 = pp.s4 = 0.9 * gap;
        pp.s2 = 1.0 - pp.s1;
        pp.s3 = 1.0 - pp.s4;
    } else if (lemma_id == "composition") {
        pp.p = 2.0;
        pp.p1 = 4.0;
        pp.s = 0.5;
    } else if (lemma_id == "nonlin-2" || lemma_id == "nonlin-3" || lemma_id == "nonlin-4" ||
               lemma_id == "nonlin-5") {
        pp.p = 2.0;
        pp.q = 2.0;
        pp.beta = 1.0;
    } else {
        throw std::invalid_argument("estimate_probe: unknown lemma id '" + lemma_id + "'");
    }
    return pp;
}

ProbeResult estimate_probe(const std::string& lemma_id, int trial_count, const Grid& grid,
                           std::uint64_t seed, const ProbeParams* params,
                           const FieldSampler* sampler) {
    ProbeParams pp = params ? *params : default_probe_params(lemma_id, grid.dim());
    FieldSampler sample = sampler ? *sampler : FieldSampler([](const Grid& g, Rng& r,
                                                               const ProbeParams& q) {
        return sample_band_limited(g, r, q.band_kmax, q.amplitude);
    });
    LPFilterBank bank(grid);
    Rng root(seed);

    ProbeResult result;
    result.lemma_id = lemma_id;
    for (int trial = 0; trial < trial_count; ++trial) {
        Rng trial_rng = root.fork(static_cast<std::uint64_t>(trial));
        std::uint64_t trial_seed = seed ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
        Ctx ctx{grid, bank, pp, trial_rng, sample};
        std::optional<double> ratio;
        if (lemma_id == "para-0") ratio = probe_para_T(ctx, false);
        else if (lemma_id == "para-1") ratio = probe_para_T(ctx, true);
        else if (lemma_id == "para-0-R") ratio = probe_para_R(ctx, false);
        else if (lemma_id == "para-2") ratio = probe_para_R(ctx, true);
        else if (lemma_id == "prod-1") ratio = probe_prod_1(ctx);
        else if (lemma_id == "prod-2") ratio = probe_prod_2(ctx);
        else if (lemma_id == "comm") ratio = probe_comm(ctx);
        else if (lemma_id == "composition") ratio = probe_composition(ctx);
        else if (lemma_id == "nonlin-2") ratio = probe_nonlin_2(ctx);
        else if (lemma_id == "nonlin-3") ratio = probe_nonlin_3(ctx);
        else if (lemma_id == "nonlin-4") ratio = probe_nonlin_4(ctx);
        else if (lemma_id == "nonlin-5") ratio = probe_nonlin_5(ctx);
        else throw std::invalid_argument("estimate_probe: unknown lemma id '" + lemma_id + "'");

        ProbeRecord rec;
        rec.trial = trial;
        rec.seed = trial_seed;
        if (ratio) {
            rec.ratio = *ratio;
            if (!std::isfinite(rec.ratio))
                throw std::runtime_error("estimate_probe: non-finite ratio for " + lemma_id);
            result.max_ratio = std::max(result.max_ratio, rec.ratio);
        } else {
            rec.skipped = true; // degenerate trial (zero fields): ratio defined as 0
            ++result.skipped;
        }
        result.records.push_back(rec);
        ++result.trials;
    }
    return result;
}

void write_probe_csv(const ProbeResult& result, std::ostream& os) {
    os << "lemma_id,trial,ratio,seed\n";
    char buf[64];
    for (const auto& rec : result.records) {
        std::snprintf(buf, sizeof(buf), "%.17g", rec.skipped ? 0.0 : rec.ratio);
        os << result.lemma_id << ',' << rec.trial << ',' << buf << ',' << rec.seed << '\n';
    }
}

} // namespace machlimit
