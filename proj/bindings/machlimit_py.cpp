// Python bindings for the core operations: grids, spectral fields, the
// dyadic filter machinery and Besov norms, Fourier-multiplier operators,
// Bony paraproducts, the two solvers, diagnostics and the run harness.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "machlimit/harness.hpp"
#include "machlimit/paraproduct.hpp"
#include "machlimit/probes.hpp"
#include "machlimit/snapshot_io.hpp"

namespace py = pybind11;
using namespace machlimit;

namespace {

std::vector<ssize_t> grid_shape(const Grid& g) {
    return std::vector<ssize_t>(static_cast<std::size_t>(g.dim()), g.n());
}

py::array_t<std::complex<double>> coeffs_array(const SpectralField& f) {
    py::array_t<std::complex<double>> out(grid_shape(f.grid()));
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.mutable_data());
    return out;
}

SpectralField field_from_array(const Grid& g, py::array_t<std::complex<double>,
                                                          py::array::c_style |
                                                              py::array::forcecast> arr) {
    if (static_cast<std::size_t>(arr.size()) != g.size())
        throw std::invalid_argument("coefficient array does not match the grid");
    std::vector<cplx> coeffs(arr.data(), arr.data() + arr.size());
    return SpectralField(g, std::move(coeffs));
}

py::array_t<double> physical_array(const SpectralField& f) {
    auto vals = f.to_physical();
    py::array_t<double> out(grid_shape(f.grid()));
    std::copy(vals.begin(), vals.end(), out.mutable_data());
    return out;
}

Band band_from_args(const std::string& kind, double alpha, double beta) {
    if (kind == "all") return Band::all();
    if (kind == "low") return Band::low(alpha);
    if (kind == "mid") return Band::mid(alpha, beta);
    if (kind == "high") return Band::high(beta);
    throw std::invalid_argument("band kind must be all|low|mid|high");
}

py::dict verdict_dict(const AdmissibilityVerdict& v) {
    py::dict out;
    out["admissible"] = v.admissible;
    py::list checks;
    for (const auto& c : v.checks) {
        py::dict item;
        item["condition"] = c.condition;
        item["ok"] = c.ok;
        item["lhs"] = c.lhs;
        item["rhs"] = c.rhs;
        checks.append(item);
    }
    out["checks"] = checks;
    return out;
}

py::dict fit_dict(const RateFit& fit) {
    py::dict out;
    out["eps_values"] = fit.eps_values;
    out["error_values"] = fit.error_values;
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r_squared"] = fit.r_squared;
    return out;
}

} // namespace

PYBIND11_MODULE(_machlimit, m) {
    m.doc() = "pseudospectral low-Mach-number simulation and Besov-norm analysis";

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double>(), py::arg("d"), py::arg("n"),
             py::arg("box_length") = 2.0 * M_PI)
        .def_property_readonly("d", &Grid::dim)
        .def_property_readonly("n", &Grid::n)
        .def_property_readonly("box_length", &Grid::box_length)
        .def_property_readonly("dealias_limit", &Grid::dealias_limit)
        .def("__repr__", [](const Grid& g) {
            return "Grid(d=" + std::to_string(g.dim()) + ", n=" + std::to_string(g.n()) +
                   ", L=" + std::to_string(g.box_length()) + ")";
        });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init<const Grid&>())
        .def_static("from_coeffs", &field_from_array, py::arg("grid"), py::arg("coeffs"))
        .def_static("from_physical",
                    [](const Grid& g, py::array_t<double, py::array::c_style |
                                                              py::array::forcecast> arr) {
                        std::vector<double> vals(arr.data(), arr.data() + arr.size());
                        return SpectralField::from_physical(g, vals);
                    })
        .def_property_readonly("grid", &SpectralField::grid)
        .def("coeffs", &coeffs_array)
        .def("to_physical", &physical_array)
        .def("dealias", &SpectralField::dealias)
        .def("enforce_hermitian", &SpectralField::enforce_hermitian)
        .def("hermitian_error", &SpectralField::hermitian_error)
        .def("mean", [](const SpectralField& f) { return f.mean(); })
        .def("scaled", [](const SpectralField& f, double c) {
            SpectralField out = f;
            out *= c;
            return out;
        })
        .def("__add__", [](const SpectralField& a, const SpectralField& b) { return a + b; })
        .def("__sub__", [](const SpectralField& a, const SpectralField& b) { return a - b; })
        .def("max_abs_coeff", &SpectralField::max_abs_coeff);

    m.def("lp_norm", &lp_norm, py::arg("field"), py::arg("p"), py::arg("oversample") = true);
    m.def("dealiased_product", &dealiased_product);
    m.def("derivative", &derivative);

    py::class_<LPFilterBank>(m, "LPFilterBank")
        .def(py::init<const Grid&>())
        .def_property_readonly("j_min", &LPFilterBank::j_min)
        .def_property_readonly("j_max", &LPFilterBank::j_max)
        .def_static("filter_value", &LPFilterBank::filter_value)
        .def("dyadic_block", &LPFilterBank::dyadic_block)
        .def("low_cut", &LPFilterBank::low_cut)
        .def("block_lp_norm", &LPFilterBank::block_lp_norm, py::arg("field"), py::arg("j"),
             py::arg("p"), py::arg("oversample") = true);

    m.def(
        "besov_norm",
        [](const SpectralField& f, const LPFilterBank& bank, double p, double sigma, double s,
           const std::string& band, double alpha, double beta) {
            return besov_norm(f, bank, BesovIndex{p, sigma, s},
                              band_from_args(band, alpha, beta));
        },
        py::arg("field"), py::arg("bank"), py::arg("p") = 2.0, py::arg("sigma") = 1.0,
        py::arg("s") = 0.0, py::arg("band") = "all", py::arg("alpha") = 0.0,
        py::arg("beta") = 0.0);
    m.def(
        "besov_norm_vector",
        [](const VectorField& f, const LPFilterBank& bank, double p, double sigma, double s,
           const std::string& band, double alpha, double beta) {
            return besov_norm(f, bank, BesovIndex{p, sigma, s},
                              band_from_args(band, alpha, beta));
        },
        py::arg("fields"), py::arg("bank"), py::arg("p") = 2.0, py::arg("sigma") = 1.0,
        py::arg("s") = 0.0, py::arg("band") = "all", py::arg("alpha") = 0.0,
        py::arg("beta") = 0.0);

    // Fourier-multiplier operators
    m.def("helmholtz_p", &helmholtz_p);
    m.def("helmholtz_q", &helmholtz_q);
    m.def("divergence", &divergence);
    m.def("gradient", &gradient);
    m.def(
        "lame_apply",
        [](const VectorField& u, double mu, double lambda) {
            return lame_apply(u, LameParams{mu, lambda});
        },
        py::arg("u"), py::arg("mu"), py::arg("lambda"));
    m.def("effective_velocity", &effective_velocity);
    m.def("acoustic_potential", &acoustic_potential);
    m.def("acoustic_propagate", &acoustic_propagate);
    m.def("heat_propagate",
          py::overload_cast<const SpectralField&, double, double>(&heat_propagate));

    // Bony machinery
    m.def("paraproduct_low_high", &paraproduct_low_high);
    m.def("paraproduct_resonant", &paraproduct_resonant);
    m.def("bony_reconstruct", &bony_reconstruct);
    m.def(
        "commutator_transport",
        [](const VectorField& v, const SpectralField& a, int j, const LPFilterBank& bank) {
            return commutator_transport(v, a, j, bank);
        },
        py::arg("v"), py::arg("a"), py::arg("j"), py::arg("bank"));

    m.def("probe_lemma_ids", &probe_lemma_ids);
    m.def(
        "estimate_probe",
        [](const std::string& lemma_id, int trials, const Grid& grid, std::uint64_t seed) {
            auto result = estimate_probe(lemma_id, trials, grid, seed);
            py::dict out;
            out["lemma_id"] = result.lemma_id;
            out["max_ratio"] = result.max_ratio;
            out["trials"] = result.trials;
            out["skipped"] = result.skipped;
            py::list ratios;
            for (const auto& rec : result.records) ratios.append(rec.skipped ? 0.0 : rec.ratio);
            out["ratios"] = ratios;
            return out;
        },
        py::arg("lemma_id"), py::arg("trials"), py::arg("grid"), py::arg("seed") = 1);

    // pressure law and solvers
    m.def("j_coeff", &PressureLaw::j_coeff);
    m.def(
        "k_coeff",
        [](double a, double gamma) {
            return normalize_parameters(1.0, PressureLaw::gamma_law(gamma),
                                        LameParams{0.5, 0.0})
                .law.k_coeff(a);
        },
        py::arg("a"), py::arg("gamma") = 1.4);
    m.def("apply_j", &apply_j);
    m.def(
        "apply_k",
        [](const SpectralField& a, double gamma) {
            return apply_k(a, normalize_parameters(1.0, PressureLaw::gamma_law(gamma),
                                                   LameParams{0.5, 0.0})
                                  .law);
        },
        py::arg("a"), py::arg("gamma") = 1.4);

    m.def(
        "gen_initial_data",
        [](const std::string& kind, const Grid& grid, std::uint64_t seed, int kmax,
           double amplitude_a, double amplitude_u, bool solenoidal_u, double oscillation_m,
           int phi_kmax) {
            InitParams p;
            p.kmax = kmax;
            p.amplitude_a = amplitude_a;
            p.amplitude_u = amplitude_u;
            p.solenoidal_u = solenoidal_u;
            p.oscillation_m = oscillation_m;
            p.phi_kmax = phi_kmax;
            return gen_initial_data(init_kind_from_string(kind), p, grid, seed);
        },
        py::arg("kind"), py::arg("grid"), py::arg("seed") = 1, py::arg("kmax") = 4,
        py::arg("amplitude_a") = 0.0, py::arg("amplitude_u") = 0.5,
        py::arg("solenoidal_u") = true, py::arg("oscillation_m") = 8.0,
        py::arg("phi_kmax") = 1);

    m.def(
        "step_compressible",
        [](const SpectralField& a, const VectorField& u, double eps, double dt, double mu,
           double lambda, double gamma, bool nonlinear, double cfl, double positivity_floor) {
            CompressibleState s{a, u, 0.0, eps, LameParams{mu, lambda},
                                PressureLaw::gamma_law(gamma)};
            StepControl ctl{nonlinear, cfl, positivity_floor};
            CompressibleState out = step_compressible(s, dt, ctl);
            return std::make_pair(out.a, out.u);
        },
        py::arg("a"), py::arg("u"), py::arg("eps"), py::arg("dt"), py::arg("mu") = 0.5,
        py::arg("lambda") = 0.0, py::arg("gamma") = 1.4, py::arg("nonlinear") = true,
        py::arg("cfl") = 0.4, py::arg("positivity_floor") = 0.1);
    m.def(
        "step_incompressible",
        [](const VectorField& w, double mu, double dt, bool nonlinear, double cfl) {
            IncompressibleState s{w, 0.0, mu};
            StepControl ctl{nonlinear, cfl, 0.1};
            return step_incompressible(s, dt, ctl).w;
        },
        py::arg("w"), py::arg("mu"), py::arg("dt"), py::arg("nonlinear") = true,
        py::arg("cfl") = 0.4);
    m.def(
        "nonlinearity",
        [](const SpectralField& a, const VectorField& u, double eps, double mu, double lambda,
           double gamma) {
            CompressibleState s{a, u, 0.0, eps, LameParams{mu, lambda},
                                PressureLaw::gamma_law(gamma)};
            return nonlinearity(s);
        },
        py::arg("a"), py::arg("u"), py::arg("eps"), py::arg("mu") = 0.5,
        py::arg("lambda") = 0.0, py::arg("gamma") = 1.4);

    // diagnostics
    m.def(
        "validate_exponents",
        [](int d, double q, double r, double alpha, double beta0, double eps) {
            return verdict_dict(validate_exponents(ExponentConfig{d, q, r, alpha, beta0, eps}));
        },
        py::arg("d"), py::arg("q"), py::arg("r"), py::arg("alpha") = 2.0,
        py::arg("beta0") = 1.0, py::arg("eps") = 0.1);
    m.def("split_time_intervals", &split_time_intervals, py::arg("times"), py::arg("values"),
          py::arg("r"), py::arg("delta"));
    m.def(
        "convergence_rate_fit",
        [](const std::vector<double>& eps, const std::vector<double>& err) {
            if (eps.size() != err.size())
                throw std::invalid_argument("eps and error lists must match");
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < eps.size(); ++i) pts.emplace_back(eps[i], err[i]);
            return fit_dict(convergence_rate_fit(pts));
        },
        py::arg("eps_values"), py::arg("error_values"));

    // harness
    m.def(
        "run_experiment",
        [](const std::string& config_text, const std::string& out_dir) {
            RunConfig cfg = RunConfig::from_string(config_text);
            auto outcome = run_experiment(cfg, out_dir);
            py::dict out;
            out["dir"] = outcome.dir;
            out["steps"] = outcome.steps;
            out["report_json"] = outcome.report.to_json();
            if (outcome.linear_max_deviation)
                out["linear_max_deviation"] = *outcome.linear_max_deviation;
            return out;
        },
        py::arg("config_text"), py::arg("out_dir"));
    m.def(
        "run_sweep",
        [](const std::string& config_text, const std::string& out_dir) {
            RunConfig cfg = RunConfig::from_string(config_text);
            auto outcome = run_sweep(cfg, out_dir);
            py::dict out;
            out["dir"] = outcome.dir;
            out["all_ok"] = outcome.all_ok;
            out["rate_monotone"] = outcome.rate_monotone;
            out["critical_monotone"] = outcome.critical_monotone;
            if (outcome.fit_rate) out["fit_rate"] = fit_dict(*outcome.fit_rate);
            if (outcome.fit_critical) out["fit_critical"] = fit_dict(*outcome.fit_critical);
            py::list members;
            for (const auto& mem : outcome.members) {
                py::dict item;
                item["eps"] = mem.eps;
                item["ok"] = mem.ok;
                item["rate_norm"] = mem.norms.rate_norm;
                item["critical_norm"] = mem.norms.critical_norm;
                members.append(item);
            }
            out["members"] = members;
            return out;
        },
        py::arg("config_text"), py::arg("out_dir"));
    m.def("write_snapshot_file", &write_snapshot_file);
    m.def("read_snapshot_file", &read_snapshot_file);

    m.attr("__version__") = "0.1.0";
}
