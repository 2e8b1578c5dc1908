#include "pqsim/elliptic.hpp"

#include "pqsim/edge_grid.hpp"
#include "pqsim/errors.hpp"
#include "pqsim/operators.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pqsim {

void EllipticConfig::validate() const {
    if (eps_schedule.empty())
        throw ConfigError("solver.eps_schedule: must be nonempty");
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0.0) ||
            (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])))
            throw ConfigError("solver.eps_schedule: must be strictly decreasing and positive");
    }
    if (!(newton_tol > 0.0) || !(continuation_tol > 0.0) || !(steady_tol > 0.0))
        throw ConfigError("solver tolerances must be positive");
    if (!(damping > 0.0 && damping < 1.0))
        throw ConfigError("solver.damping: must lie in (0,1)");
    if (max_newton < 1 || max_outer < 1)
        throw ConfigError("solver iteration caps must be >= 1");
}

namespace {

/// Primitive of (s+eps)^{-delta} with value 0 at s=0, extended linearly
/// below zero so the energy stays convex and finite on trial points.
struct SingularPrimitive {
    double delta, eps;

    double value(double s) const {
        if (s <= 0.0) return s * std::pow(eps, -delta);
        if (delta == 1.0) return std::log1p(s / eps);
        return (std::pow(s + eps, 1.0 - delta) - std::pow(eps, 1.0 - delta)) / (1.0 - delta);
    }
    double d1(double s) const { return std::pow(s <= 0.0 ? eps : s + eps, -delta); }
    double d2(double s) const {
        return s <= 0.0 ? 0.0 : -delta * std::pow(s + eps, -delta - 1.0);
    }
};

/// mass*u - lam*(div(|Du|^{p-2}Du)+div(|Du|^{q-2}Du)) - sing*(u+eps)^{-delta}
///   - ell*u_+^{q-1} + kshift*u = rhs
struct GenericProblem {
    MeshPtr mesh;
    double mass = 0.0;
    double lam = 1.0;
    double sing = 0.0;
    double delta = 1.0;
    double kshift = 0.0;
    double ell = 0.0;
    double p = 2.0, q = 1.5;
    Field rhs;
};

struct NewtonScratch {
    std::vector<double> gx, gy, fx, fy;
};

double edge_energy(const GenericProblem& prob, const EdgeGrid& grid, const Field& u,
                   double eta, NewtonScratch& ws) {
    const PowerDensity pp{prob.p, eta}, pq{prob.q, eta};
    grid.gradients(u, ws.gx, ws.gy);
    double s = 0.0;
    for (std::size_t e = 0; e < grid.edge_count(); ++e) {
        const double g2 = ws.gx[e] * ws.gx[e] + ws.gy[e] * ws.gy[e];
        s += grid.weight(e) * (pp.value(g2) + pq.value(g2));
    }
    return grid.family_factor() * s;
}

double energy_at(const GenericProblem& prob, const EdgeGrid& grid, const Field& u,
                 double eps, double eta, NewtonScratch& ws) {
    const SingularPrimitive G{prob.delta, eps};
    double phi = prob.lam * edge_energy(prob, grid, u, eta, ws);
    const Mesh& m = *prob.mesh;
    const double zero_order = prob.mass + prob.kshift;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!m.interior[k]) continue;
        const double s = u.v[k];
        double val = 0.5 * zero_order * s * s - prob.rhs.v[k] * s;
        if (prob.sing != 0.0) val -= prob.sing * G.value(s);
        if (prob.ell != 0.0 && s > 0.0) val -= prob.ell / prob.q * std::pow(s, prob.q);
        phi += m.quad_w[k] * val;
    }
    return phi;
}

/// Energy, raw gradient (gradient of phi w.r.t. nodal values, boundary rows
/// zero) and sup-norm of the pointwise equation residual in one pass.
double energy_gradient(const GenericProblem& prob, const EdgeGrid& grid, const Field& u,
                       double eps, double eta, NewtonScratch& ws,
                       std::vector<double>& raw, double& res_inf) {
    const PowerDensity pp{prob.p, eta}, pq{prob.q, eta};
    const SingularPrimitive G{prob.delta, eps};
    grid.gradients(u, ws.gx, ws.gy);
    const std::size_t ne = grid.edge_count();
    ws.fx.assign(ne, 0.0);
    ws.fy.assign(ne, 0.0);
    double phi_edges = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
        const double g2 = ws.gx[e] * ws.gx[e] + ws.gy[e] * ws.gy[e];
        phi_edges += grid.weight(e) * (pp.value(g2) + pq.value(g2));
        const double a = prob.lam * (pp.weight(g2) + pq.weight(g2));
        ws.fx[e] = a * ws.gx[e];
        ws.fy[e] = a * ws.gy[e];
    }
    const Mesh& m = *prob.mesh;
    raw.assign(u.size(), 0.0);
    grid.scatter(ws.fx, ws.fy, raw);

    double phi = prob.lam * grid.family_factor() * phi_edges;
    const double zero_order = prob.mass + prob.kshift;
    res_inf = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!m.interior[k]) {
            raw[k] = 0.0;
            continue;
        }
        const double s = u.v[k];
        double val = 0.5 * zero_order * s * s - prob.rhs.v[k] * s;
        double der = zero_order * s - prob.rhs.v[k];
        if (prob.sing != 0.0) {
            val -= prob.sing * G.value(s);
            der -= prob.sing * G.d1(s);
        }
        if (prob.ell != 0.0 && s > 0.0) {
            val -= prob.ell / prob.q * std::pow(s, prob.q);
            der -= prob.ell * std::pow(s, prob.q - 1.0);
        }
        phi += m.quad_w[k] * val;
        raw[k] += m.quad_w[k] * der;
        res_inf = std::max(res_inf, std::abs(raw[k]) / m.quad_w[k]);
    }
    return phi;
}

Field initial_guess(const GenericProblem& prob) {
    const Mesh& m = *prob.mesh;
    const double D = m.diameter();
    double rhs_max = 0.0;
    for (std::size_t k = 0; k < prob.rhs.size(); ++k)
        rhs_max = std::max(rhs_max, prob.rhs.v[k]);
    double c0 = 1e-3;
    if (prob.sing > 0.0)
        c0 = std::max(c0, std::pow(prob.lam * prob.sing * std::pow(0.5 * D, prob.p),
                                   1.0 / (prob.p - 1.0 + prob.delta)));
    if (rhs_max > 0.0) {
        if (prob.mass > 0.0) c0 = std::max(c0, rhs_max / prob.mass);
        c0 = std::max(c0, std::pow(prob.lam > 0 ? rhs_max / prob.lam * std::pow(0.5 * D, prob.p)
                                                : 0.0,
                                   1.0 / (prob.p - 1.0)));
    }
    double dmax = 0.0;
    for (double d : m.dist) dmax = std::max(dmax, d);
    Field u(prob.mesh);
    for (std::size_t k = 0; k < u.size(); ++k) {
        u.v[k] = m.interior[k] ? c0 * m.dist[k] / dmax : 0.0;
        if (prob.mass > 0.0 && m.interior[k])
            u.v[k] = std::max(u.v[k], std::max(prob.rhs.v[k], 0.0) / prob.mass * 0.5);
    }
    return u;
}

/// One damped-Newton solve of the generic problem at fixed eps.
/// Returns true on convergence; u holds the final iterate either way.
bool newton_solve(const GenericProblem& prob, double eps, double eta,
                  const EllipticConfig& cfg, Field& u, SolveReport& rep) {
    const Mesh& m = *prob.mesh;
    const EdgeGrid grid(m);
    NewtonScratch ws;

    const auto dofs = m.interior_nodes();
    const std::size_t nd = dofs.size();
    std::vector<int> node2dof(m.node_count(), -1);
    for (std::size_t i = 0; i < nd; ++i) node2dof[dofs[i]] = static_cast<int>(i);

    double rhs_inf = 0.0;
    for (std::size_t k = 0; k < prob.rhs.size(); ++k)
        rhs_inf = std::max(rhs_inf, std::abs(prob.rhs.v[k]));
    const double stop = cfg.newton_tol * (1.0 + rhs_inf);

    std::vector<double> raw;
    const PowerDensity pp{prob.p, eta}, pq{prob.q, eta};
    const SingularPrimitive G{prob.delta, eps};
    const double u_floor = 1e-12;

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    Eigen::VectorXd rhsv(nd), dvec;

    double res_inf = 0.0;
    double phi = energy_gradient(prob, grid, u, eps, eta, ws, raw, res_inf);

    for (int it = 0; it < cfg.max_newton; ++it) {
        rep.residual_history.push_back(res_inf);
        if (res_inf <= stop) {
            rep.final_residual = res_inf;
            return true;
        }
        ++rep.newton_iters;

        // Hessian of the discrete energy: diagonal zero-order part plus the
        // edgewise tensor a I + 2 a' g g^T of the flux linearization.
        trips.clear();
        const double zero_order = prob.mass + prob.kshift;
        for (std::size_t i = 0; i < nd; ++i) {
            const std::size_t k = dofs[i];
            const double s = u.v[k];
            double dd = zero_order;
            if (prob.sing != 0.0) dd -= prob.sing * G.d2(s);
            if (prob.ell != 0.0)
                dd -= prob.ell * (prob.q - 1.0) *
                      std::pow(std::max(s, u_floor), prob.q - 2.0);
            trips.emplace_back(static_cast<int>(i), static_cast<int>(i),
                               m.quad_w[k] * dd);
        }
        for (std::size_t e = 0; e < grid.edge_count(); ++e) {
            const double g2 = ws.gx[e] * ws.gx[e] + ws.gy[e] * ws.gy[e];
            const double a = pp.weight(g2) + pq.weight(g2);
            const double da = 2.0 * (pp.dweight(g2) + pq.dweight(g2));
            const double wf = prob.lam * grid.family_factor() * grid.weight(e);
            const double t00 = wf * (a + da * ws.gx[e] * ws.gx[e]);
            const double t01 = wf * da * ws.gx[e] * ws.gy[e];
            const double t11 = wf * (a + da * ws.gy[e] * ws.gy[e]);
            int cnt = 0;
            const EdgeGrid::Entry* en = grid.entries(e, cnt);
            for (int aidx = 0; aidx < cnt; ++aidx) {
                const int ia = node2dof[en[aidx].node];
                if (ia < 0) continue;
                for (int bidx = 0; bidx < cnt; ++bidx) {
                    const int ib = node2dof[en[bidx].node];
                    if (ib < 0) continue;
                    const double hij =
                        en[aidx].cx * (t00 * en[bidx].cx + t01 * en[bidx].cy) +
                        en[aidx].cy * (t01 * en[bidx].cx + t11 * en[bidx].cy);
                    if (hij != 0.0) trips.emplace_back(ia, ib, hij);
                }
            }
        }

        Eigen::SparseMatrix<double> H(static_cast<int>(nd), static_cast<int>(nd));
        H.setFromTriplets(trips.begin(), trips.end());
        for (std::size_t i = 0; i < nd; ++i) rhsv[i] = -raw[dofs[i]];

        // Factor, shifting the diagonal if indefiniteness shows up (ell > 0).
        double shift = 0.0;
        double gd = 0.0;
        for (int attempt = 0; attempt < 10; ++attempt) {
            Eigen::SparseMatrix<double> Hs = H;
            if (shift > 0.0) {
                for (std::size_t i = 0; i < nd; ++i)
                    Hs.coeffRef(static_cast<int>(i), static_cast<int>(i)) +=
                        shift * m.quad_w[dofs[i]];
            }
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Hs);
            if (ldlt.info() == Eigen::Success) {
                dvec = ldlt.solve(rhsv);
                if (ldlt.info() == Eigen::Success) {
                    gd = -rhsv.dot(dvec);
                    if (gd < 0.0) break;
                }
            }
            shift = (shift == 0.0) ? 1.0 : shift * 100.0;
            gd = 0.0;
        }
        if (!(gd < 0.0)) {
            rep.final_residual = res_inf;
            return false;
        }

        double t = 1.0;
        bool accepted = false;
        Field trial(u);
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < nd; ++i)
                trial.v[dofs[i]] = std::max(0.0, u.v[dofs[i]] + t * dvec[i]);
            const double phi_t = energy_at(prob, grid, trial, eps, eta, ws);
            if (phi_t <= phi + cfg.armijo * t * gd) {
                accepted = true;
                break;
            }
            t *= cfg.damping;
        }
        if (!accepted) {
            rep.final_residual = res_inf;
            // a stalled line search at an already-small residual is a solve
            return res_inf <= std::sqrt(cfg.newton_tol) * (1.0 + rhs_inf);
        }
        u = trial;
        phi = energy_gradient(prob, grid, u, eps, eta, ws, raw, res_inf);
    }
    rep.final_residual = res_inf;
    return res_inf <= stop;
}

double solution_scale_guess(const GenericProblem& prob, const Field* warm) {
    double s = 1.0;
    if (warm) s = std::max(s, warm->max_norm());
    s = std::max(s, prob.rhs.max_norm());
    return s;
}

Field solve_generic(const GenericProblem& prob, const EllipticConfig& cfg,
                    SolveReport& rep, const Field* warm) {
    cfg.validate();
    const bool regularize = std::min(prob.p, prob.q) < 2.0;
    rep.eta = regularize ? default_grad_eta(solution_scale_guess(prob, warm), *prob.mesh)
                         : 0.0;

    if (prob.sing == 0.0) {
        Field u = warm ? *warm : initial_guess(prob);
        rep.eps_final = 0.0;
        rep.converged = newton_solve(prob, 1.0, rep.eta, cfg, u, rep);
        rep.continuation_cauchy = true;
        if (!rep.converged)
            throw SolverError("stationary solve did not converge (residual " +
                                  std::to_string(rep.final_residual) + ")",
                              rep.residual_history);
        return u;
    }

    const double eps_min = cfg.eps_schedule.back();
    if (warm) {
        Field u = *warm;
        SolveReport direct;
        direct.eta = rep.eta;
        if (newton_solve(prob, eps_min, rep.eta, cfg, u, direct)) {
            direct.converged = true;
            direct.continuation_cauchy = true;
            direct.eps_final = eps_min;
            rep = direct;
            return u;
        }
        // warm start failed: fall through to the full schedule
        rep.residual_history = direct.residual_history;
    }

    Field u = initial_guess(prob);
    Field prev = u;
    bool have_prev = false;
    for (double eps : cfg.eps_schedule) {
        rep.eps_final = eps;
        const bool ok = newton_solve(prob, eps, rep.eta, cfg, u, rep);
        if (!ok)
            throw SolverError("eps-continuation failed at eps=" + std::to_string(eps) +
                                  " (residual " + std::to_string(rep.final_residual) + ")",
                              rep.residual_history);
        if (have_prev) {
            const double diff = max_diff(u, prev);
            rep.eps_diffs.push_back(diff);
            if (diff <= cfg.continuation_tol * (1.0 + u.max_norm())) {
                rep.continuation_cauchy = true;
                rep.converged = true;
                return u;
            }
        }
        prev = u;
        have_prev = true;
    }
    rep.converged = true;
    rep.continuation_cauchy =
        !rep.eps_diffs.empty() &&
        rep.eps_diffs.back() <= cfg.continuation_tol * (1.0 + u.max_norm()) * 10.0;
    return u;
}

Field constant_field(MeshPtr mesh, double value) {
    Field f(mesh);
    for (std::size_t k = 0; k < f.size(); ++k)
        f.v[k] = f.mesh->interior[k] ? value : 0.0;
    return f;
}

GenericProblem power_singular_problem(MeshPtr mesh, double coef, double l, double L,
                                      const ProblemParams& params) {
    GenericProblem prob;
    prob.mesh = std::move(mesh);
    prob.mass = 0.0;
    prob.lam = 1.0;
    prob.sing = coef;
    prob.delta = params.delta;
    prob.ell = l;
    prob.p = params.p;
    prob.q = params.q;
    prob.rhs = constant_field(prob.mesh, L);
    return prob;
}

} // namespace

Field solve_resolvent_eps(const Field& h, double lambda, double eps,
                          const ProblemParams& params, const EllipticConfig& cfg,
                          SolveReport* report, const Field* warm) {
    params.validate();
    if (!(lambda > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("solve_resolvent_eps: requires lambda > 0 and eps > 0");
    if (!h.all_finite())
        throw std::invalid_argument("solve_resolvent_eps: h must be finite");
    GenericProblem prob;
    prob.mesh = h.mesh;
    prob.mass = 1.0;
    prob.lam = lambda;
    prob.sing = lambda * params.theta;
    prob.delta = params.delta;
    prob.p = params.p;
    prob.q = params.q;
    prob.rhs = h;

    SolveReport local;
    SolveReport& rep = report ? *report : local;
    rep = SolveReport{};
    const bool regularize = std::min(prob.p, prob.q) < 2.0;
    rep.eta = regularize ? default_grad_eta(solution_scale_guess(prob, warm), *prob.mesh)
                         : 0.0;
    Field u = warm ? *warm : initial_guess(prob);
    rep.converged = newton_solve(prob, eps, rep.eta, cfg, u, rep);
    rep.eps_final = eps;
    if (!rep.converged)
        throw SolverError("solve_resolvent_eps: Newton did not converge (residual " +
                              std::to_string(rep.final_residual) + ")",
                          rep.residual_history);
    return u;
}

Field solve_resolvent(const Field& h, double lambda, const ProblemParams& params,
                      const EllipticConfig& cfg, SolveReport* report, const Field* warm) {
    params.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("solve_resolvent: requires lambda > 0");
    GenericProblem prob;
    prob.mesh = h.mesh;
    prob.mass = 1.0;
    prob.lam = lambda;
    prob.sing = lambda * params.theta;
    prob.delta = params.delta;
    prob.p = params.p;
    prob.q = params.q;
    prob.rhs = h;
    SolveReport local;
    SolveReport& rep = report ? *report : local;
    rep = SolveReport{};
    Field u = solve_generic(prob, cfg, rep, warm);
    rep.regime_warning = params.delta >= params.delta_crit();
    return u;
}

Field solve_torsion(MeshPtr mesh, double rho, const ProblemParams& params,
                    const EllipticConfig& cfg, SolveReport* report) {
    params.validate();
    if (!(rho > 0.0)) throw std::invalid_argument("solve_torsion: requires rho > 0");
    GenericProblem prob = power_singular_problem(std::move(mesh), 0.0, 0.0, rho, params);
    SolveReport local;
    SolveReport& rep = report ? *report : local;
    rep = SolveReport{};
    return solve_generic(prob, cfg, rep, nullptr);
}

Field solve_barrier(MeshPtr mesh, double M, double l, double L,
                    const ProblemParams& params, const EllipticConfig& cfg,
                    SolveReport* report) {
    params.validate();
    if (!(M >= 1.0) || l < 0.0 || L < 0.0)
        throw std::invalid_argument("solve_barrier: requires M >= 1 and l, L >= 0");
    GenericProblem prob = power_singular_problem(std::move(mesh), M, l, L, params);
    SolveReport local;
    SolveReport& rep = report ? *report : local;
    rep = SolveReport{};
    return solve_generic(prob, cfg, rep, nullptr);
}

Field scaled_profile(MeshPtr mesh, double M, const ProblemParams& params,
                     const EllipticConfig& cfg, SolveReport* report) {
    Field u = solve_barrier(std::move(mesh), M, 0.0, 0.0, params, cfg, report);
    const double scale = std::pow(M, -1.0 / (params.p - 1.0 + params.delta));
    for (double& x : u.v) x *= scale;
    return u;
}

ComparisonResult comparison_check(const Field& u, const Field& v, double tol) {
    if (u.size() != v.size())
        throw std::invalid_argument("comparison_check: fields live on different meshes");
    if (tol < 0.0)
        tol = 1e-8 * std::max(1.0, std::max(u.max_norm(), v.max_norm()));
    ComparisonResult res;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double gap = u.v[k] - v.v[k];
        if (gap > tol && gap > res.max_violation) {
            if (res.ok) res.first_violation_node = k;
            res.ok = false;
            res.max_violation = gap;
        }
    }
    return res;
}

ParabolicBarriers make_parabolic_barriers(MeshPtr mesh, double g_sup,
                                          const NonlinearitySpec& f,
                                          const ProblemParams& params,
                                          const EllipticConfig& cfg, const Field* u0) {
    params.validate();
    NonlinearitySpec::Envelope env{0.0, 0.0};
    double L_f = 0.0;
    if (f.kind == NonlinearitySpec::Kind::subhomog) {
        env = f.upper_envelope();
        L_f = f.lower_bound;
    } else if (f.kind == NonlinearitySpec::Kind::frozen) {
        g_sup = std::max(g_sup, f.g_sup);
    }

    ParabolicBarriers out;

    // Upper: (M - theta) v^{-delta} + env.l v^{q-1} + (g_sup + env.L) dominates
    // theta v^{-delta} + f(v) + g for M >= theta; grow M until it also
    // dominates u0.
    double M = std::max(1.0, 2.0 * params.theta);
    for (;;) {
        GenericProblem prob =
            power_singular_problem(mesh, M, env.l, g_sup + env.L, params);
        SolveReport rep;
        out.upper = solve_generic(prob, cfg, rep, nullptr);
        if (!u0 || comparison_check(*u0, out.upper).ok) break;
        M *= 4.0;
        if (M > 1e12)
            throw InvariantError("make_parabolic_barriers: no supersolution above u0 "
                                 "reached by M <= 1e12");
    }
    out.M = M;

    // Lower: torsion datum (delta < 1) or small singular coefficient
    // (delta >= 1), shrunk until the subsolution inequality and u0-domination
    // hold.
    const double need = g_sup + L_f;
    double rho = params.delta < 1.0 ? 1.0 : 0.5 * params.theta;
    for (;;) {
        Field cand;
        bool sub_ok = false;
        if (params.delta < 1.0) {
            cand = solve_torsion(mesh, rho, params, cfg, nullptr);
            sub_ok = params.theta * std::pow(cand.max_norm(), -params.delta) >= rho + need;
        } else {
            GenericProblem prob = power_singular_problem(mesh, rho, 0.0, 0.0, params);
            SolveReport rep;
            cand = solve_generic(prob, cfg, rep, nullptr);
            sub_ok = need == 0.0 ||
                     (params.theta - rho) * std::pow(cand.max_norm(), -params.delta) >= need;
        }
        if (sub_ok && (!u0 || comparison_check(cand, *u0).ok)) {
            out.lower = std::move(cand);
            out.rho = rho;
            break;
        }
        rho *= 0.1;
        if (rho < 1e-14)
            throw InvariantError("make_parabolic_barriers: no subsolution below u0 "
                                 "reached by rho >= 1e-14");
    }
    return out;
}

SteadyResult solve_steady_state(MeshPtr mesh, const NonlinearitySpec& f,
                                const ProblemParams& params, const EllipticConfig& cfg) {
    params.validate();
    if (params.delta >= params.delta_crit()) {
        std::ostringstream os;
        os << "solve_steady_state: requires 0 < delta < 2+1/(p-1) = "
           << params.delta_crit() << ", got delta=" << params.delta;
        throw ConfigError(os.str());
    }
    if (f.kind == NonlinearitySpec::Kind::frozen ||
        f.kind == NonlinearitySpec::Kind::superhomog)
        throw ConfigError("solve_steady_state: f must be subhomogeneous (or none)");

    SteadyResult res;
    ParabolicBarriers bars = make_parabolic_barriers(mesh, 0.0, f, params, cfg, nullptr);
    res.lower = bars.lower;
    res.upper = bars.upper;
    res.rho_sub = bars.rho;
    res.M_super = bars.M;
    res.K = f.monotonicity_shift(bars.upper.max_norm());

    GenericProblem prob;
    prob.mesh = mesh;
    prob.mass = 0.0;
    prob.kshift = res.K;
    prob.lam = 1.0;
    prob.sing = params.theta;
    prob.delta = params.delta;
    prob.p = params.p;
    prob.q = params.q;

    Field u = bars.lower;
    const double scale = std::max(1.0, bars.upper.max_norm());
    for (int it = 0; it < cfg.max_outer; ++it) {
        prob.rhs = Field(mesh);
        for (std::size_t k = 0; k < prob.rhs.size(); ++k)
            prob.rhs.v[k] = mesh->interior[k] ? f.f(u.v[k]) + res.K * u.v[k] : 0.0;
        SolveReport rep;
        Field next = solve_generic(prob, cfg, rep, it == 0 ? nullptr : &u);
        res.last_solve = rep;
        res.iterations = it + 1;

        double drop = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k)
            drop = std::max(drop, u.v[k] - next.v[k]);
        if (drop > 1e-9 * scale) res.monotone = false;

        res.final_diff = max_diff(next, u);
        u = next;
        if (res.final_diff < cfg.steady_tol * scale) {
            res.converged = true;
            break;
        }
    }
    res.u = u;
    return res;
}

} // namespace pqsim
