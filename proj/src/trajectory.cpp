#include "machlimit/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace machlimit {

void TrajectorySeries::append_time(double t) {
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("TrajectorySeries: times must be strictly increasing");
    times_.push_back(t);
}

void TrajectorySeries::record(int j, double p, double value) {
    if (times_.empty())
        throw std::logic_error("TrajectorySeries: record before any time sample");
    if (value < 0.0)
        throw std::invalid_argument("TrajectorySeries: per-block values are nonnegative");
    auto& v = blocks_[{j, p}];
    if (v.size() + 1 != times_.size())
        throw std::logic_error("TrajectorySeries: one value per time sample expected");
    v.push_back(value);
}

const std::vector<double>& TrajectorySeries::series(int j, double p) const {
    auto it = blocks_.find({j, p});
    if (it == blocks_.end())
        throw std::out_of_range("TrajectorySeries: no series for requested (j, p)");
    return it->second;
}

bool TrajectorySeries::has_series(int j, double p) const {
    return blocks_.count({j, p}) > 0;
}

std::vector<int> TrajectorySeries::shells() const {
    std::vector<int> out;
    for (const auto& kv : blocks_)
        if (out.empty() || out.back() != kv.first.first) out.push_back(kv.first.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> TrajectorySeries::exponents() const {
    std::vector<double> out;
    for (const auto& kv : blocks_) out.push_back(kv.first.second);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void TrajectorySeries::scale_values(double c) {
    for (auto& kv : blocks_)
        for (auto& v : kv.second) v *= c;
}

namespace {

// Samples clipped to [I.t0, I.t1], with linearly interpolated endpoint
// values when the interval boundary falls inside a segment.
void clipped_samples(const std::vector<double>& times, const std::vector<double>& values,
                     const Interval& I, std::vector<double>& ts, std::vector<double>& vs) {
    ts.clear();
    vs.clear();
    const double lo = I.t0;
    const double hi = std::min(I.t1, times.back());
    if (!(hi >= lo)) return;
    auto interp = [&](double t) {
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return values.front();
        if (it == times.end()) return values.back();
        std::size_t i = static_cast<std::size_t>(it - times.begin());
        double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return (1.0 - w) * values[i - 1] + w * values[i];
    };
    if (lo > times.front() && std::find(times.begin(), times.end(), lo) == times.end()) {
        ts.push_back(lo);
        vs.push_back(interp(lo));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= lo && times[i] <= hi) {
            ts.push_back(times[i]);
            vs.push_back(values[i]);
        }
    }
    if (!ts.empty() && ts.back() < hi) {
        ts.push_back(hi);
        vs.push_back(interp(hi));
    }
}

} // namespace

double lr_time_norm(const std::vector<double>& times, const std::vector<double>& values,
                    double r, const Interval& I) {
    if (times.size() != values.size())
        throw std::invalid_argument("lr_time_norm: size mismatch");
    if (times.empty()) throw std::invalid_argument("lr_time_norm: empty series");
    std::vector<double> ts, vs;
    clipped_samples(times, values, I, ts, vs);
    if (std::isinf(r)) {
        double m = 0.0;
        for (double v : vs) m = std::max(m, std::abs(v));
        return m;
    }
    if (r < 1.0) throw std::invalid_argument("lr_time_norm: r must be >= 1");
    if (ts.size() < 2) throw std::invalid_argument("insufficient samples");
    double acc = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        double ya = std::pow(std::abs(vs[i - 1]), r);
        double yb = std::pow(std::abs(vs[i]), r);
        acc += 0.5 * (ya + yb) * (ts[i] - ts[i - 1]);
    }
    return std::pow(acc, 1.0 / r);
}

double time_besov_norm(const TrajectorySeries& traj, double r, const BesovIndex& idx,
                       const Band& band, TimeNormFlavor flavor, const Interval& I) {
    if (traj.empty()) throw std::invalid_argument("time_besov_norm: empty trajectory");
    auto shells = traj.shells();
    std::vector<int> active;
    for (int j : shells)
        if (band.contains(j)) active.push_back(j);
    if (active.empty()) return 0.0;
    for (int j : active)
        if (!traj.has_series(j, idx.p))
            throw std::out_of_range("time_besov_norm: per-block series unavailable for p");

    const bool sigma_inf = std::isinf(idx.sigma);
    if (flavor == TimeNormFlavor::chemin_lerner) {
        double acc = 0.0;
        for (int j : active) {
            double tn = lr_time_norm(traj.times(), traj.series(j, idx.p), r, I);
            double term = std::pow(2.0, idx.s * j) * tn;
            acc = sigma_inf ? std::max(acc, term) : acc + std::pow(term, idx.sigma);
        }
        return sigma_inf ? acc : std::pow(acc, 1.0 / idx.sigma);
    }

    // lebesgue: instantaneous Besov norm, then the time norm
    std::vector<double> inst(traj.times().size(), 0.0);
    for (std::size_t i = 0; i < inst.size(); ++i) {
        double acc = 0.0;
        for (int j : active) {
            double term = std::pow(2.0, idx.s * j) * traj.series(j, idx.p)[i];
            acc = sigma_inf ? std::max(acc, term) : acc + std::pow(term, idx.sigma);
        }
        inst[i] = sigma_inf ? acc : std::pow(acc, 1.0 / idx.sigma);
    }
    return lr_time_norm(traj.times(), inst, r, I);
}

} // namespace machlimit
