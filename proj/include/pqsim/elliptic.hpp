#pragma once

#include "pqsim/field.hpp"
#include "pqsim/params.hpp"

#include <optional>
#include <vector>

namespace pqsim {

/// Knobs of the regularized stationary solver.
struct EllipticConfig {
    /// Strictly decreasing regularization schedule for (u+eps)^{-delta}.
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double newton_tol = 1e-10;  // relative residual tolerance
    int max_newton = 200;
    double damping = 0.5;   // backtracking factor
    double armijo = 1e-4;   // sufficient-decrease constant
    /// Cauchy tolerance (relative to the solution scale) on successive
    /// eps-iterates; continuation stops early once met.
    double continuation_tol = 1e-6;
    double steady_tol = 1e-9;  // sup-norm stop for the monotone iteration
    int max_outer = 500;       // cap on monotone iteration sweeps

    void validate() const;
};

/// Convergence record of one stationary solve.
struct SolveReport {
    bool converged = false;
    bool continuation_cauchy = false;
    bool regime_warning = false;  // delta >= 2+1/(p-1): best-effort regularized solve
    int newton_iters = 0;
    double final_residual = 0.0;
    double eps_final = 0.0;
    double eta = 0.0;  // gradient regularization used (0 if p,q >= 2)
    std::vector<double> residual_history;
    std::vector<double> eps_diffs;  // sup-norm gaps between successive eps solves
};

/// u - lambda(div(|Du|^{p-2}Du) + div(|Du|^{q-2}Du) + theta (u+eps)^{-delta}) = h,
/// u = 0 on the boundary, u >= 0; solved by damped Newton on the strictly
/// convex discrete energy.
Field solve_resolvent_eps(const Field& h, double lambda, double eps,
                          const ProblemParams& params, const EllipticConfig& cfg = {},
                          SolveReport* report = nullptr, const Field* warm = nullptr);

/// eps -> 0 continuation limit of solve_resolvent_eps along cfg.eps_schedule,
/// warm-started level to level. With a warm start the solve goes directly to
/// the smallest eps and falls back to the full schedule on failure. For
/// delta >= 2+1/(p-1) the smallest-eps solve is returned with
/// report->regime_warning set.
Field solve_resolvent(const Field& h, double lambda, const ProblemParams& params,
                      const EllipticConfig& cfg = {}, SolveReport* report = nullptr,
                      const Field* warm = nullptr);

/// -div(|Du|^{p-2}Du) - div(|Du|^{q-2}Du) = rho, u = 0 on the boundary.
Field solve_torsion(MeshPtr mesh, double rho, const ProblemParams& params,
                    const EllipticConfig& cfg = {}, SolveReport* report = nullptr);

/// -div(|Du|^{p-2}Du) - div(|Du|^{q-2}Du) = M u^{-delta} + l u^{q-1} + L.
/// Requires M >= 1 and l, L >= 0; l must stay below the q-eigenvalue scale
/// for the energy to remain coercive (not checked, solver failure surfaces).
Field solve_barrier(MeshPtr mesh, double M, double l, double L,
                    const ProblemParams& params, const EllipticConfig& cfg = {},
                    SolveReport* report = nullptr);

/// M^{-1/(p-1+delta)} * solve_barrier(M, 0, 0): the normalized profile that
/// collapses onto the p-only singular solution as M grows.
Field scaled_profile(MeshPtr mesh, double M, const ProblemParams& params,
                     const EllipticConfig& cfg = {}, SolveReport* report = nullptr);

/// Result of the monotone iteration for the steady state of the reaction
/// problem -div(...) - div(...) = theta u^{-delta} + f(x,u).
struct SteadyResult {
    Field u;
    Field lower, upper;  // sub/supersolution sandwich used
    int iterations = 0;
    bool converged = false;
    bool monotone = true;  // iterate sequence nondecreasing within tolerance
    double final_diff = 0.0;
    double K = 0.0;         // zero-order shift used in the iteration
    double rho_sub = 0.0;   // data of the subsolution solve
    double M_super = 0.0;   // data of the supersolution solve
    SolveReport last_solve;
};

/// Monotone iteration started from the subsolution barrier; f must satisfy
/// (f1),(f2) and delta < 2+1/(p-1).
SteadyResult solve_steady_state(MeshPtr mesh, const NonlinearitySpec& f,
                                const ProblemParams& params,
                                const EllipticConfig& cfg = {});

/// Nodewise u <= v + tol (default tol = 1e-8 * data scale).
struct ComparisonResult {
    bool ok = true;
    double max_violation = 0.0;
    std::size_t first_violation_node = 0;
};
ComparisonResult comparison_check(const Field& u, const Field& v, double tol = -1.0);

/// Sub/supersolution pair for parabolic runs with forcing bounded by g_sup
/// and reaction f: lower solves with a small torsion/singular datum, upper
/// with a large singular coefficient; both adjusted until they bracket u0
/// when one is given.
struct ParabolicBarriers {
    Field lower, upper;
    double rho = 0.0;  // lower-barrier datum
    double M = 0.0;    // upper-barrier coefficient
};
ParabolicBarriers make_parabolic_barriers(MeshPtr mesh, double g_sup,
                                          const NonlinearitySpec& f,
                                          const ProblemParams& params,
                                          const EllipticConfig& cfg = {},
                                          const Field* u0 = nullptr);

} // namespace pqsim
