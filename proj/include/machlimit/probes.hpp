#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "machlimit/paraproduct.hpp"
#include "machlimit/pressure_law.hpp"
#include "machlimit/rng.hpp"

namespace machlimit {

/// Exponent configuration for an inequality probe. Fields are interpreted
/// per lemma; defaults satisfying each lemma's hypotheses come from
/// default_probe_params. Hypothesis violations are rejected with a
/// diagnostic at setup.
struct ProbeParams {
    double p = 2.0, p1 = 4.0, p2 = 4.0, p3 = 4.0, p4 = 4.0;
    double q = 3.0;
    double sigma = 1.0, sigma1 = 2.0, sigma2 = 2.0, sigma3 = 2.0, sigma4 = 2.0;
    double s = 1.0, s1 = 0.5, s2 = 0.5, s3 = 0.5, s4 = 0.5;
    double alpha1 = 0.25, alpha2 = 0.25;
    double beta = 8.0;
    double eps = 0.1;
    double gamma = 1.4;
    int band_kmax = 10;
    double amplitude = 1.0;
};

ProbeParams default_probe_params(const std::string& lemma_id, int d);

struct ProbeRecord {
    int trial = 0;
    double ratio = 0.0;
    std::uint64_t seed = 0;
    bool skipped = false;
};

/// Empirical maxima of LHS / (RHS without constant) over random trials.
/// Diagnostic only: the paper-side constants are non-constructive, so no
/// pass/fail threshold is attached to the ratio.
struct ProbeResult {
    std::string lemma_id;
    double max_ratio = 0.0;
    int trials = 0;
    int skipped = 0;
    std::vector<ProbeRecord> records;
};

using FieldSampler = std::function<SpectralField(const Grid&, Rng&, const ProbeParams&)>;

/// Random Hermitian band-limited field with modes |k_i| <= kmax, mean zero,
/// smooth spectral decay.
SpectralField sample_band_limited(const Grid& grid, Rng& rng, int kmax, double amplitude);

/// Divergence-free counterpart of sample_band_limited.
VectorField sample_band_limited_solenoidal(const Grid& grid, Rng& rng, int kmax,
                                           double amplitude);

std::vector<std::string> probe_lemma_ids();

ProbeResult estimate_probe(const std::string& lemma_id, int trial_count, const Grid& grid,
                           std::uint64_t seed,
                           const ProbeParams* params = nullptr,
                           const FieldSampler* sampler = nullptr);

/// CSV columns: lemma_id, trial, ratio, seed.
void write_probe_csv(const ProbeResult& result, std::ostream& os);

} // namespace machlimit
