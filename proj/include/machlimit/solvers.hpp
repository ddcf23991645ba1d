#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "machlimit/littlewood_paley.hpp"
#include "machlimit/operators.hpp"
#include "machlimit/pressure_law.hpp"
#include "machlimit/trajectory.hpp"

namespace machlimit {

/// Rescaled compressible state: density rho = 1 + eps * a.
struct CompressibleState {
    SpectralField a;
    VectorField u;
    double t = 0.0;
    double eps = 1.0;
    LameParams lame;
    PressureLaw law = PressureLaw::gamma_law(1.4);
};

struct IncompressibleState {
    VectorField w;
    double t = 0.0;
    double mu = 0.5;
};

struct StepControl {
    bool nonlinear = true;
    double cfl = 0.4;               // dt <= cfl * dx / max|u|
    double positivity_floor = 0.1;  // reject when min(1 + eps a) <= floor
};

/// Raised when a step must be retried with a smaller dt (positivity
/// violated or the nonlinear CFL bound exceeded).
class StepRejected : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Right sides of the rescaled system:
///   f = -div(a u)
///   g = -[(u . grad)u + J(eps a) L u + (1/eps) K(eps a) grad a]
/// dealiased, with the mean modes removed (runs live in the zero-mean
/// gauge; the mean channels of (a, u) are exact invariants of the flow map).
std::pair<SpectralField, VectorField> nonlinearity(const CompressibleState& s);

/// One ETDRK2 step. The stiff linear part is handled by the exact per-mode
/// flow: on each nonzero mode the pair (a, |grad|^{-1} div Q u) evolves by
/// the 2x2 exponential of [[0, -|xi|/eps], [|xi|/eps, -nu |xi|^2]] and the
/// solenoidal velocity by exp(-mu |xi|^2 dt).
CompressibleState step_compressible(const CompressibleState& s, double dt,
                                    const StepControl& ctl = {});

/// Integrating-factor ETDRK2 for the incompressible system; the state is
/// re-projected onto divergence-free fields every step.
IncompressibleState step_incompressible(const IncompressibleState& s, double dt,
                                        const StepControl& ctl = {});

/// Spec'd default step: min(cfl * dx / max|u|, 0.1 * eps * dx) when the
/// nonlinearity couples the acoustic phases, the CFL bound alone otherwise.
double default_dt(const CompressibleState& s, const StepControl& ctl);

/// Piecewise-linear-in-time reference trajectory for the incompressible
/// solution, used to form Pu - w on the compressible run's time grid.
class WReference {
  public:
    void add(double t, VectorField w);
    VectorField eval(double t) const;
    bool empty() const { return times_.empty(); }
    const std::vector<double>& times() const { return times_; }
    const VectorField& snapshot(std::size_t i) const { return fields_[i]; }

  private:
    std::vector<double> times_;
    std::vector<VectorField> fields_;
};

struct SamplePolicy {
    int stride = 1;                      // record norms every stride-th step
    std::vector<double> p_values{2.0};   // block L^p exponents to record
    bool oversample_lp = false;          // collocation-grid quadrature if false
};

/// Per-field trajectories keyed "a", "u", "Qu", "Pu" and, with a reference,
/// "Pu_minus_w"; incompressible runs record "w".
using ChannelMap = std::map<std::string, TrajectorySeries>;

struct CompressibleRunResult {
    ChannelMap channels;
    CompressibleState state; // at t_end
    int steps = 0;
};

struct IncompressibleRunResult {
    ChannelMap channels;
    IncompressibleState state;
    int steps = 0;
};

using SnapshotHook = std::function<void(double, const SpectralField&, const VectorField&)>;
using VectorSnapshotHook = std::function<void(double, const VectorField&)>;

/// Integrate to t_end with uniform steps (dt is shrunk slightly so the
/// horizon is hit exactly); deterministic for fixed inputs.
CompressibleRunResult run_compressible(const CompressibleState& init, double dt, double t_end,
                                       const SamplePolicy& policy, const LPFilterBank& bank,
                                       const StepControl& ctl = {},
                                       const WReference* wref = nullptr,
                                       const SnapshotHook& hook = nullptr);

IncompressibleRunResult run_incompressible(const IncompressibleState& init, double dt,
                                           double t_end, const SamplePolicy& policy,
                                           const LPFilterBank& bank,
                                           const StepControl& ctl = {},
                                           const VectorSnapshotHook& hook = nullptr);

} // namespace machlimit
