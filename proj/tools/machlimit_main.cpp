// Command-line front end: validate | run | sweep | analyze | selftest.
// Exit codes: 0 ok, 1 violation/failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "machlimit/harness.hpp"
#include "machlimit/paraproduct.hpp"
#include "machlimit/probes.hpp"

namespace ml = machlimit;

namespace {

int selftest() {
    using namespace machlimit;
    int passed = 0, failed = 0;
    auto check = [&](const char* name, bool ok, double metric) {
        std::printf("%-44s %s (%.3e)\n", name, ok ? "pass" : "FAIL", metric);
        (ok ? passed : failed) += 1;
    };

    Grid grid(2, 32, 2.0 * M_PI);
    LPFilterBank bank(grid);
    Rng rng(7);

    { // Helmholtz projection algebra
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            VectorField u = zero_vector_field(grid);
            for (auto& comp : u) comp = sample_band_limited(grid, rng, 8, 1.0);
            VectorField p = helmholtz_p(u), q = helmholtz_q(u);
            VectorField pp = helmholtz_p(p), qp = helmholtz_q(p);
            for (int axis = 0; axis < 2; ++axis) {
                SpectralField rsum = p[axis] + q[axis] - u[axis];
                worst = std::max(worst, rsum.max_abs_coeff());
                worst = std::max(worst, (pp[axis] - p[axis]).max_abs_coeff());
                worst = std::max(worst, qp[axis].max_abs_coeff());
            }
            worst = std::max(worst, divergence(p).max_abs_coeff());
        }
        check("projection algebra (P,Q)", worst <= 1e-12, worst);
    }

    { // partition of unity
        SpectralField f = sample_band_limited(grid, rng, 10, 1.0);
        SpectralField sum(grid);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += bank.dyadic_block(f, j);
        sum -= f; // f is mean-free
        double worst = sum.max_abs_coeff() / std::max(f.max_abs_coeff(), 1e-300);
        check("Littlewood-Paley partition of unity", worst <= 1e-12, worst);
    }

    { // Bony reconstruction
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            SpectralField f = sample_band_limited(grid, rng, 8, 1.0);
            SpectralField g = sample_band_limited(grid, rng, 8, 1.0);
            f.set_mean(cplx(0.3, 0.0));
            SpectralField rec = bony_reconstruct(f, g, bank);
            SpectralField prod = dealiased_product(f, g);
            double scale = std::max(prod.max_abs_coeff(), 1e-300);
            worst = std::max(worst, (rec - prod).max_abs_coeff() / scale);
        }
        check("Bony reconstruction", worst <= 1e-10, worst);
    }

    { // acoustic energy conservation
        SpectralField a = sample_band_limited(grid, rng, 8, 1.0);
        SpectralField v = sample_band_limited(grid, rng, 8, 1.0);
        double e0 = 0.0, e1 = 0.0;
        auto [a2, v2] = acoustic_propagate(a, v, 0.7318);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            e0 += std::norm(a[i]) + std::norm(v[i]);
            e1 += std::norm(a2[i]) + std::norm(v2[i]);
        }
        double drift = std::abs(e1 - e0) / e0;
        check("acoustic rotation energy", drift <= 1e-13, drift);
    }

    { // mass and mean-velocity conservation in a nonlinear run
        InitParams ip;
        ip.kmax = 4;
        ip.amplitude_a = 0.2;
        ip.amplitude_u = 0.5;
        ip.solenoidal_u = false;
        auto [a0, u0] = gen_initial_data(InitKind::random_band, ip, grid, 11);
        CompressibleState s{a0, u0, 0.0, 0.5, LameParams{0.5, 0.0},
                            PressureLaw::gamma_law(1.4)};
        SamplePolicy policy;
        auto result = run_compressible(s, 5e-3, 0.1, policy, bank);
        double drift = std::abs(result.state.a.mean() - a0.mean());
        for (int axis = 0; axis < 2; ++axis)
            drift = std::max(drift, std::abs(result.state.u[axis].mean() - u0[axis].mean()));
        check("mass/mean-velocity conservation", drift <= 1e-12, drift);
    }

    std::printf("selftest: %d passed, %d failed\n", passed, failed);
    return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral low-Mach-number simulation and analysis suite"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";

    auto* validate = app.add_subcommand("validate", "check exponent admissibility");
    double vd = 2, vq = 3, vr = 12, valpha = 2, vbeta0 = 1, veps = 0.1;
    validate->add_option("--config", config_path, "config file");
    validate->add_option("--d", vd);
    validate->add_option("--q", vq);
    validate->add_option("--r", vr);
    validate->add_option("--alpha", valpha);
    validate->add_option("--beta0", vbeta0);
    validate->add_option("--eps", veps);

    auto* run = app.add_subcommand("run", "execute one run");
    run->add_option("--config", config_path)->required();
    run->add_option("--out", out_dir);

    auto* sweep = app.add_subcommand("sweep", "execute a Mach-number sweep");
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("--out", out_dir);

    auto* analyze = app.add_subcommand("analyze", "rebuild reports from persisted outputs");
    analyze->add_option("--out", out_dir)->required();

    auto* probe = app.add_subcommand("probe", "empirical inequality-constant probes");
    std::string lemma = "prod-1";
    int trials = 50;
    std::uint64_t probe_seed = 1;
    int probe_n = 64;
    int probe_d = 2;
    probe->add_option("--lemma", lemma, "lemma id or 'all'");
    probe->add_option("--trials", trials);
    probe->add_option("--seed", probe_seed);
    probe->add_option("--n", probe_n);
    probe->add_option("--d", probe_d);
    probe->add_option("--out", out_dir);

    app.add_subcommand("selftest", "run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("validate")) {
            ml::ExponentConfig cfg;
            if (!config_path.empty()) {
                ml::RunConfig rc = ml::RunConfig::from_file(config_path);
                cfg = {rc.d, rc.q, rc.r, rc.alpha, rc.beta0, rc.eps};
            } else {
                cfg = {static_cast<int>(vd), vq, vr, valpha, vbeta0, veps};
            }
            auto verdict = ml::validate_exponents(cfg);
            std::cout << verdict.describe();
            return verdict.admissible ? 0 : 1;
        }
        if (app.got_subcommand("run")) {
            ml::RunConfig cfg = ml::RunConfig::from_file(config_path);
            auto outcome = ml::run_experiment(cfg, out_dir);
            std::cout << "run complete: " << outcome.dir << " (" << outcome.steps
                      << " steps)\n";
            if (outcome.linear_max_deviation)
                std::cout << "linear-mode max deviation vs analytic propagator: "
                          << *outcome.linear_max_deviation << "\n";
            return 0;
        }
        if (app.got_subcommand("sweep")) {
            ml::RunConfig cfg = ml::RunConfig::from_file(config_path);
            auto outcome = ml::run_sweep(cfg, out_dir);
            std::cout << "sweep complete: " << outcome.dir << "\n";
            if (outcome.fit_rate)
                std::cout << "rate_norm slope " << outcome.fit_rate->slope << " (R^2 "
                          << outcome.fit_rate->r_squared << ")\n";
            if (!outcome.all_ok) {
                std::cout << "PARTIAL: some members failed (see sweep_report.md)\n";
                return 1;
            }
            return 0;
        }
        if (app.got_subcommand("analyze")) {
            auto outcome = ml::analyze_directory(out_dir);
            for (const auto& m : outcome.messages) std::cout << m << "\n";
            std::cout << "checksums: " << (outcome.checksums_ok ? "ok" : "MISMATCH")
                      << ", reports: " << (outcome.reports_match ? "rebuilt identically" : "MISMATCH")
                      << "\n";
            return outcome.checksums_ok && outcome.reports_match ? 0 : 1;
        }
        if (app.got_subcommand("probe")) {
            std::filesystem::create_directories(out_dir);
            ml::Grid grid(probe_d, probe_n, 2.0 * M_PI);
            std::vector<std::string> ids =
                lemma == "all" ? ml::probe_lemma_ids() : std::vector<std::string>{lemma};
            for (const auto& id : ids) {
                auto result = ml::estimate_probe(id, trials, grid, probe_seed);
                std::cout << id << ": max ratio " << result.max_ratio << " over "
                          << result.trials << " trials (" << result.skipped << " skipped)\n";
                std::ofstream os(out_dir.empty() ? (id + "_probe.csv")
                                                 : (out_dir + "/" + id + "_probe.csv"));
                ml::write_probe_csv(result, os);
            }
            return 0;
        }
        if (app.got_subcommand("selftest")) return selftest();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
