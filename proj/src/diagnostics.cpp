#include "machlimit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace machlimit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

std::string AdmissibilityVerdict::describe() const {
    std::ostringstream os;
    os << (admissible ? "admissible" : "rejected") << "\n";
    for (const auto& c : checks)
        os << "  [" << (c.ok ? "ok" : "VIOLATED") << "] " << c.condition << "  (lhs="
           << c.lhs << ", rhs=" << c.rhs << ")\n";
    return os.str();
}

AdmissibilityVerdict validate_exponents(const ExponentConfig& cfg) {
    AdmissibilityVerdict v;
    auto push = [&](std::string cond, bool ok, double lhs, double rhs) {
        v.checks.push_back({std::move(cond), ok, lhs, rhs});
    };
    const double d = cfg.d;
    const double q = cfg.q;
    const double inv_r = cfg.r > 0.0 && !std::isinf(cfg.r) ? 1.0 / cfg.r : 0.0;
    const double q_upper = cfg.d <= 2 ? 4.0 : std::min(4.0, 2.0 * d / (d - 2.0));

    push("2 < q", q > 2.0, q, 2.0);
    push("q < min{4, 2d/(d-2)}", q < q_upper, q, q_upper);
    push("0 < 1/r", inv_r > 0.0, inv_r, 0.0);
    const double c1 = 0.5 - (d / 2.0) * (0.5 - 1.0 / q);
    const double c2 = ((d - 1.0) / 2.0) * (0.5 - 1.0 / q);
    push("1/r <= 1/2 - (d/2)(1/2 - 1/q)", inv_r <= c1 + 1e-15, inv_r, c1);
    push("1/r <= ((d-1)/2)(1/2 - 1/q)", inv_r <= c2 + 1e-15, inv_r, c2);
    push("1/r < 2d/q - 1", inv_r < 2.0 * d / q - 1.0, inv_r, 2.0 * d / q - 1.0);
    push("0 < eps <= beta0/alpha",
         cfg.eps > 0.0 && cfg.alpha > 0.0 && cfg.eps <= cfg.beta0 / cfg.alpha + 1e-15, cfg.eps,
         cfg.alpha > 0.0 ? cfg.beta0 / cfg.alpha : 0.0);

    v.admissible = std::all_of(v.checks.begin(), v.checks.end(),
                               [](const AdmissibilityCheck& c) { return c.ok; });
    return v;
}

double data_norm_d(const SpectralField& a0, const VectorField& u0, const LPFilterBank& bank,
                   const ExponentConfig& cfg, double variant_q) {
    const double d = cfg.d;
    const double q = variant_q;
    const double hc = cfg.high_cut();
    VectorField qu = helmholtz_q(u0);
    VectorField pu = u0;
    for (std::size_t axis = 0; axis < pu.size(); ++axis) pu[axis] -= qu[axis];

    Band high = Band::high(hc);
    Band mid = Band::mid(cfg.alpha, hc);
    Band low = Band::low(cfg.alpha);

    double out = 0.0;
    out += cfg.eps * besov_norm(a0, bank, {q, 1.0, d / q}, high);
    out += besov_norm(qu, bank, {q, 1.0, d / q - 1.0}, high);
    out += besov_norm(a0, bank, {2.0, 1.0, d / 2.0 - 1.0}, mid) +
           besov_norm(qu, bank, {2.0, 1.0, d / 2.0 - 1.0}, mid);
    out += besov_norm(a0, bank, {2.0, 1.0, d / 2.0 - 1.0}, low) +
           besov_norm(qu, bank, {2.0, 1.0, d / 2.0 - 1.0}, low);
    out += besov_norm(pu, bank, {2.0, 1.0, d / 2.0 - 1.0});
    return out;
}

namespace {

const TrajectorySeries& channel(const ChannelMap& channels, const std::string& key) {
    auto it = channels.find(key);
    if (it == channels.end())
        throw std::out_of_range("diagnostics: missing trajectory channel '" + key + "'");
    return it->second;
}

} // namespace

double energy_norm_x(const ChannelMap& channels, const ExponentConfig& cfg, const Interval& I,
                     TimeNormFlavor flavor, const std::string& u_key) {
    const double d = cfg.d;
    const double hc = cfg.high_cut();
    const auto& a = channel(channels, "a");
    const auto& u = channel(channels, u_key);
    Band high = Band::high(hc);
    Band low = Band::low(hc);

    double out = 0.0;
    out += cfg.eps * time_besov_norm(a, kInf, {2.0, 1.0, d / 2.0}, high, flavor, I);
    out += (1.0 / cfg.eps) * time_besov_norm(a, 1.0, {2.0, 1.0, d / 2.0}, high, flavor, I);
    out += time_besov_norm(a, kInf, {2.0, 1.0, d / 2.0 - 1.0}, low, flavor, I) +
           time_besov_norm(a, 1.0, {2.0, 1.0, d / 2.0 + 1.0}, low, flavor, I);
    out += time_besov_norm(u, kInf, {2.0, 1.0, d / 2.0 - 1.0}, Band::all(), flavor, I) +
           time_besov_norm(u, 1.0, {2.0, 1.0, d / 2.0 + 1.0}, Band::all(), flavor, I);
    return out;
}

YParts auxiliary_norm_y(const ChannelMap& channels, const ExponentConfig& cfg,
                        const Interval& I, TimeNormFlavor flavor) {
    const double d = cfg.d;
    const double q = cfg.q;
    const double r = cfg.r;
    const double hc = cfg.high_cut();
    const auto& a = channel(channels, "a");
    const auto& qu = channel(channels, "Qu");
    const auto& pu = channel(channels, "Pu");
    Band high = Band::high(hc);
    Band mid = Band::mid(cfg.alpha, hc);
    Band low = Band::low(cfg.alpha);

    YParts y;
    y.high += cfg.eps * time_besov_norm(a, kInf, {q, 1.0, d / q}, high, flavor, I);
    y.high += (1.0 / cfg.eps) * time_besov_norm(a, 1.0, {q, 1.0, d / q}, high, flavor, I);
    y.high += time_besov_norm(qu, kInf, {q, 1.0, d / q - 1.0}, high, flavor, I) +
              time_besov_norm(qu, 1.0, {q, 1.0, d / q + 1.0}, high, flavor, I);
    for (const TrajectorySeries* f : {&a, &qu}) {
        y.high += time_besov_norm(*f, kInf, {2.0, 1.0, d / 2.0 - 1.0}, mid, flavor, I) +
                  time_besov_norm(*f, 1.0, {2.0, 1.0, d / 2.0 + 1.0}, mid, flavor, I);
        y.low += time_besov_norm(*f, r, {q, 1.0, d / q - 1.0 + 2.0 / r}, low, flavor, I);
    }
    y.P = time_besov_norm(pu, r, {q, 1.0, d / q - 1.0 + 2.0 / r}, Band::all(), flavor, I) +
          time_besov_norm(pu, 1.0, {q, 1.0, d / q + 1.0}, Band::all(), flavor, I);
    return y;
}

double smallness_quantity_a(const ChannelMap& channels, const ExponentConfig& cfg,
                            const Interval& I, TimeNormFlavor flavor) {
    const double r = cfg.r;
    double x_aqu = energy_norm_x(channels, cfg, I, flavor, "Qu");
    YParts y = auxiliary_norm_y(channels, cfg, I, flavor);
    double mixed = std::pow(y.low, 1.0 / (r - 1.0)) * std::pow(x_aqu, (r - 2.0) / (r - 1.0));
    return cfg.alpha * cfg.eps * x_aqu + y.total() + mixed;
}

double smallness_quantity_a_tilde(const ChannelMap& channels, const ChannelMap& w_channels,
                                  const ExponentConfig& cfg, const Interval& I,
                                  TimeNormFlavor flavor) {
    const double d = cfg.d;
    const double q = cfg.q;
    const double r = cfg.r;
    const auto& w = channel(w_channels, "w");
    double wn = time_besov_norm(w, r, {q, 1.0, d / q - 1.0 + 2.0 / r}, Band::all(), flavor, I) +
                time_besov_norm(w, 1.0, {q, 1.0, d / q + 1.0}, Band::all(), flavor, I);
    return wn + smallness_quantity_a(channels, cfg, I, flavor);
}

std::vector<double> split_time_intervals(const std::vector<double>& times,
                                         const std::vector<double>& values, double r,
                                         double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("split_time_intervals: delta <= 0");
    if (std::isinf(r) || !(r >= 1.0))
        throw std::invalid_argument("split_time_intervals: requires 1 <= r < inf");
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("split_time_intervals: need at least two samples");

    // cumulative trapezoid of |f|^r; piecewise quadratic in t
    std::vector<double> cum(times.size(), 0.0);
    std::vector<double> yr(times.size());
    for (std::size_t i = 0; i < values.size(); ++i) yr[i] = std::pow(std::abs(values[i]), r);
    for (std::size_t i = 1; i < times.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (yr[i] + yr[i - 1]) * (times[i] - times[i - 1]);

    auto cum_at = [&](double t) {
        if (t <= times.front()) return 0.0;
        if (t >= times.back()) return cum.back();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        std::size_t i = static_cast<std::size_t>(it - times.begin());
        double dt = times[i] - times[i - 1];
        double w = (t - times[i - 1]) / dt;
        double yt = (1.0 - w) * yr[i - 1] + w * yr[i];
        return cum[i - 1] + 0.5 * (yr[i - 1] + yt) * (t - times[i - 1]);
    };

    const double total_r = cum.back();
    const double total = std::pow(total_r, 1.0 / r);
    std::vector<double> cuts{0.0};
    if (total <= delta) {
        cuts.push_back(kInf);
        return cuts;
    }

    const double target = std::pow(delta, r);
    double consumed = 0.0;
    const long max_intervals =
        static_cast<long>(std::ceil(std::pow(total / delta, r))) + 1;
    while (total_r - consumed > target * (1.0 + 1e-9)) {
        // T_n = sup{T : ||f||_{L^r(T_{n-1},T)} <= delta}, by bisection
        double lo = cuts.back(), hi = times.back();
        for (int iter = 0; iter < 200; ++iter) {
            double midpt = 0.5 * (lo + hi);
            double norm = std::pow(cum_at(midpt) - consumed, 1.0 / r);
            if (norm <= delta)
                lo = midpt;
            else
                hi = midpt;
            if (std::abs(norm - delta) <= 1e-10 && iter > 40) break;
        }
        cuts.push_back(lo);
        consumed = cum_at(lo);
        if (static_cast<long>(cuts.size()) > max_intervals)
            throw std::logic_error("split_time_intervals: interval bound exceeded");
    }
    cuts.push_back(kInf);
    return cuts;
}

LimitNorms limit_norms(const ChannelMap& comp_channels, const ExponentConfig& cfg,
                       const Interval& I) {
    const double d = cfg.d;
    const double q = cfg.q;
    const double r = cfg.r;
    const auto& a = channel(comp_channels, "a");
    const auto& qu = channel(comp_channels, "Qu");
    const auto& diff = channel(comp_channels, "Pu_minus_w");
    const auto flavor = TimeNormFlavor::lebesgue;

    LimitNorms out;
    out.rate_norm =
        time_besov_norm(a, r, {q, 1.0, d / q - 1.0 + 1.0 / r}, Band::all(), flavor, I) +
        time_besov_norm(qu, r, {q, 1.0, d / q - 1.0 + 1.0 / r}, Band::all(), flavor, I) +
        time_besov_norm(diff, kInf, {q, 1.0, d / q - 1.0 - 1.0 / r}, Band::all(), flavor, I) +
        time_besov_norm(diff, 1.0, {q, 1.0, d / q + 1.0 - 1.0 / r}, Band::all(), flavor, I);
    out.critical_norm =
        time_besov_norm(a, r, {q, 1.0, d / q - 1.0 + 2.0 / r}, Band::all(), flavor, I) +
        time_besov_norm(qu, r, {q, 1.0, d / q - 1.0 + 2.0 / r}, Band::all(), flavor, I) +
        time_besov_norm(diff, kInf, {q, 1.0, d / q - 1.0}, Band::all(), flavor, I) +
        time_besov_norm(diff, 1.0, {q, 1.0, d / q + 1.0}, Band::all(), flavor, I);
    return out;
}

std::string NormReport::to_json() const {
    nlohmann::ordered_json j;
    j["D_eps"] = D_eps;
    j["X_eps"] = X_eps;
    j["Y_high"] = Y_high;
    j["Y_low"] = Y_low;
    j["Y_P"] = Y_P;
    j["A"] = A;
    j["A_tilde"] = A_tilde;
    j["limit_lhs_rate_norm"] = limit_lhs_rate_norm;
    j["limit_lhs_critical_norm"] = limit_lhs_critical_norm;
    j["interval"] = {interval_t0, interval_t1};
    j["exponents"] = {{"d", cfg.d},         {"q", cfg.q},     {"r", cfg.r},
                      {"alpha", cfg.alpha}, {"beta0", cfg.beta0}, {"eps", cfg.eps}};
    return j.dump(2);
}

std::string RateFit::to_json() const {
    nlohmann::ordered_json j;
    j["eps_values"] = eps_values;
    j["error_values"] = error_values;
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["r_squared"] = r_squared;
    return j.dump(2);
}

std::string RateFit::points_csv() const {
    std::ostringstream os;
    os << "eps,error\n";
    for (std::size_t i = 0; i < eps_values.size(); ++i)
        os << fmt(eps_values[i]) << ',' << fmt(error_values[i]) << '\n';
    return os.str();
}

RateFit convergence_rate_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("convergence_rate_fit: need at least 3 points");
    RateFit fit;
    for (const auto& [eps, err] : points) {
        if (!(eps > 0.0) || !(err > 0.0))
            throw std::invalid_argument("convergence_rate_fit: nonpositive inputs");
        fit.eps_values.push_back(eps);
        fit.error_values.push_back(err);
    }
    for (std::size_t i = 1; i < fit.eps_values.size(); ++i)
        if (!(fit.eps_values[i] < fit.eps_values[i - 1]))
            throw std::invalid_argument("convergence_rate_fit: eps must be strictly decreasing");

    const std::size_t n = fit.eps_values.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::log(fit.eps_values[i]);
        double y = std::log(fit.error_values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::log(fit.eps_values[i]);
        double y = std::log(fit.error_values[i]);
        double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

} // namespace machlimit
