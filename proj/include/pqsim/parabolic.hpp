#pragma once

#include "pqsim/elliptic.hpp"

#include <functional>
#include <limits>
#include <string>

namespace pqsim {

using ForcingFn = std::function<double(double x, double y, double t)>;

struct StepRecord {
    double t = 0;
    double l2_sq = 0;    // quadrature of u^2
    double max_norm = 0;
    double J = 0, I = 0;  // energy and Nehari value at this step
    double residual = 0;  // solver residual of the implicit step
    int newton_iters = 0;
    double eps_final = 0;
};

/// Time grid, solution snapshots and a per-step diagnostics ledger of one
/// implicit Euler run. Uniform steps dt = T/N0; fields[n] vanishes on the
/// boundary; ledger has one record per completed step.
struct Trajectory {
    enum class Status { completed, blown_up, solver_failed };

    std::vector<double> times;
    std::vector<Field> fields;   // u^0..u^N (present when fields_kept)
    std::vector<Field> forcing;  // g^1..g^N (present when fields_kept)
    std::vector<StepRecord> ledger;
    Status status = Status::completed;
    int completed_steps = 0;
    int event_step = -1;  // step index of blow-up / failure, -1 otherwise
    double dt = 0;
    bool fields_kept = true;
    std::string shell_warning;  // set when u0 fails the boundary-pinch check

    const Field& initial() const { return fields.front(); }
    const Field& last() const { return fields.back(); }

    /// Piecewise-constant interpolant u(t) = u^n on (t_{n-1}, t_n].
    Field value_const(double t) const;
    /// Piecewise-linear interpolant through the time nodes.
    Field value_linear(double t) const;
};

struct RunOptions {
    double blow_cap = std::numeric_limits<double>::infinity();
    bool keep_fields = true;
    /// Called after each completed step with (step index, u^n).
    std::function<void(int, const Field&)> observer;
};

/// Per-node time average of g over step n: (1/dt) * integral over
/// [t_{n-1}, t_n], by 3-point Gauss quadrature.
Field average_forcing(const ForcingFn& g, MeshPtr mesh, int n, double dt);

/// One implicit Euler step: solves the stationary problem with lambda = dt
/// and data u_prev + dt g_n, warm-started from u_prev.
Field euler_step(const Field& u_prev, const Field& g_n, double dt,
                 const ProblemParams& params, const EllipticConfig& cfg = {},
                 SolveReport* report = nullptr);

/// Implicit Euler run with frozen forcing g(x,t).
Trajectory run_forced(const Field& u0, const ForcingFn& g, double T, int N0,
                      const ProblemParams& params, const EllipticConfig& cfg = {},
                      const RunOptions& opts = {});

/// Implicit Euler run with the reaction lagged explicitly: g^n = f(u^{n-1}).
/// f must pass the (f1),(f2) growth checks (frozen forcing delegates to
/// run_forced).
Trajectory run_subhomogeneous(const Field& u0, const NonlinearitySpec& f, double T,
                              int N0, const ProblemParams& params,
                              const EllipticConfig& cfg = {}, const RunOptions& opts = {});

struct PicardReport {
    int sweeps = 0;
    std::vector<double> sweep_distances;  // sup-in-time gaps between sweeps
    bool contracted = false;
    double contraction_bound = 0.0;  // T * omega estimate
    int blowup_sweep = -1;
    bool inner_failure = false;
};

/// Superhomogeneous local solve: outer Picard iteration on v, each sweep an
/// implicit Euler run with forcing f(v) frozen from the previous sweep.
/// v^0 is constant-in-time u0. A sweep whose sup-norm crosses blow_cap
/// (default 1e8 * |u0|_inf) or whose inner solve fails sets status blown_up.
Trajectory run_superhomogeneous(const Field& u0, const NonlinearitySpec& f, double T,
                                int N0, const ProblemParams& params,
                                const EllipticConfig& cfg, double picard_tol,
                                int picard_max, const RunOptions& opts = {},
                                PicardReport* report = nullptr);

/// Per-step absolute gap of the discrete energy identity
///   sum_k dt |(u^k-u^{k-1})/dt|_2^2 + E(u^n) = E(u^0) + sum_k <g^k, u^k-u^{k-1}>
/// with E(u) = (1/p)I[|Du|^p] + (1/q)I[|Du|^q] - theta/(1-delta) I[u^{1-delta}]
/// (log branch at delta = 1). Uses the recorded forcing; requires kept fields.
std::vector<double> energy_identity_residual(const Trajectory& traj,
                                             const ProblemParams& params);

} // namespace pqsim
