#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "machlimit/littlewood_paley.hpp"

namespace machlimit {

struct Interval {
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
};

/// Time-indexed per-shell L^p norms of one logical field, as sampled along a
/// solver run: for each stored (j, p) the sequence t -> ||block_j f(t)||_p.
/// Snapshot refs point at persisted field files for selected times.
class TrajectorySeries {
  public:
    using BlockKey = std::pair<int, double>; // (j, p)

    void append_time(double t);

    /// Record a value for shell j at exponent p at the most recent time.
    void record(int j, double p, double value);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& series(int j, double p) const;
    bool has_series(int j, double p) const;
    std::vector<int> shells() const;
    std::vector<double> exponents() const;
    bool empty() const { return times_.empty(); }

    std::vector<std::pair<double, std::string>>& snapshot_refs() { return snapshot_refs_; }
    const std::vector<std::pair<double, std::string>>& snapshot_refs() const {
        return snapshot_refs_;
    }

    /// Scale every recorded value (used by homogeneity checks).
    void scale_values(double c);

    const std::map<BlockKey, std::vector<double>>& blocks() const { return blocks_; }

  private:
    std::vector<double> times_;
    std::map<BlockKey, std::vector<double>> blocks_;
    std::vector<std::pair<double, std::string>> snapshot_refs_;
};

enum class TimeNormFlavor {
    chemin_lerner, // l^sigma over shells of the L^r-in-time block norms
    lebesgue       // L^r in time of the instantaneous Besov norm
};

/// L^r norm in time of a sampled scalar series over [t0, t1], by composite
/// trapezoid on |v|^r (r < inf) or max over samples (r = inf). Interval
/// endpoints falling between samples are handled by linear interpolation.
double lr_time_norm(const std::vector<double>& times, const std::vector<double>& values,
                    double r, const Interval& I);

/// Space-time Besov norm of the trajectory, in either flavor, restricted to
/// a dyadic band and a time interval.
double time_besov_norm(const TrajectorySeries& traj, double r, const BesovIndex& idx,
                       const Band& band = Band::all(),
                       TimeNormFlavor flavor = TimeNormFlavor::chemin_lerner,
                       const Interval& I = Interval{});

} // namespace machlimit
