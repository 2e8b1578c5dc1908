#include "pqsim/parabolic.hpp"

#include "pqsim/errors.hpp"
#include "pqsim/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pqsim {

namespace {

int locate_step(const Trajectory& tr, double t) {
    if (tr.completed_steps == 0) return 0;
    const double dt = tr.dt;
    int n = static_cast<int>(std::ceil(t / dt - 1e-12));
    return std::clamp(n, 0, tr.completed_steps);
}

StepRecord make_record(double t, const Field& u, const ProblemParams& params,
                       const NonlinearitySpec& f, const SolveReport& rep) {
    StepRecord r;
    r.t = t;
    r.l2_sq = l2_norm_sq(u);
    r.max_norm = u.max_norm();
    r.J = energy_J(u, params, f);
    r.I = nehari_I(u, params, f);
    r.residual = rep.final_residual;
    r.newton_iters = rep.newton_iters;
    r.eps_final = rep.eps_final;
    return r;
}

std::string shell_pinch_warning(const Field& u0, const ProblemParams& params) {
    const Mesh& m = *u0.mesh;
    const double A = phi_scale_A(m);
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t k = 0; k < u0.size(); ++k) {
        if (!m.interior[k]) continue;
        const double phi = phi_delta(m.dist[k], params.delta, params.p, A);
        if (!(u0.v[k] > 0.0)) return "u0 is not strictly positive on interior nodes";
        const double r = u0.v[k] / phi;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (rmax / rmin > 1e8) {
        std::ostringstream os;
        os << "u0 boundary-pinch ratio c2/c1 = " << rmax / rmin
           << " is large; u0 may sit outside the expected boundary growth class";
        return os.str();
    }
    return {};
}

/// Shared stepping loop; forcing_of_step(n, u_prev) supplies g^n.
Trajectory run_loop(const Field& u0, double T, int N0, const ProblemParams& params,
                    const EllipticConfig& cfg, const RunOptions& opts,
                    const NonlinearitySpec& ledger_f,
                    const std::function<Field(int, const Field&)>& forcing_of_step) {
    if (!(T > 0.0) || N0 < 1)
        throw std::invalid_argument("run: requires T > 0 and N0 >= 1");
    params.validate();

    Trajectory tr;
    tr.dt = T / N0;
    tr.fields_kept = opts.keep_fields;
    tr.times.reserve(N0 + 1);
    tr.times.push_back(0.0);
    if (params.theta > 0.0) tr.shell_warning = shell_pinch_warning(u0, params);

    tr.fields.push_back(u0);
    Field u = u0;
    for (int n = 1; n <= N0; ++n) {
        Field g_n = forcing_of_step(n, u);
        SolveReport rep;
        Field next;
        try {
            next = euler_step(u, g_n, tr.dt, params, cfg, &rep);
        } catch (const SolverError&) {
            tr.status = Trajectory::Status::solver_failed;
            tr.event_step = n;
            break;
        }
        u = std::move(next);
        tr.times.push_back(n * tr.dt);
        tr.completed_steps = n;
        tr.ledger.push_back(make_record(n * tr.dt, u, params, ledger_f, rep));
        if (opts.keep_fields) {
            tr.fields.push_back(u);
            tr.forcing.push_back(std::move(g_n));
        }
        if (opts.observer) opts.observer(n, u);
        if (u.max_norm() > opts.blow_cap) {
            tr.status = Trajectory::Status::blown_up;
            tr.event_step = n;
            break;
        }
    }
    if (!opts.keep_fields) {
        tr.fields.clear();
        tr.fields.push_back(u0);
        tr.fields.push_back(u);
    }
    return tr;
}

} // namespace

Field Trajectory::value_const(double t) const {
    const int n = locate_step(*this, t);
    return fields.at(n);
}

Field Trajectory::value_linear(double t) const {
    if (completed_steps == 0) return fields.front();
    const double tc = std::clamp(t, 0.0, times.back());
    int n = std::min(static_cast<int>(tc / dt), completed_steps - 1);
    const double s = (tc - times[n]) / dt;
    Field out = fields.at(n);
    const Field& nxt = fields.at(n + 1);
    for (std::size_t k = 0; k < out.size(); ++k)
        out.v[k] += s * (nxt.v[k] - out.v[k]);
    return out;
}

Field average_forcing(const ForcingFn& g, MeshPtr mesh, int n, double dt) {
    if (n < 1 || !(dt > 0.0))
        throw std::invalid_argument("average_forcing: requires n >= 1 and dt > 0");
    // 3-point Gauss-Legendre on [t_{n-1}, t_n]
    static const double xi[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const double t0 = (n - 1) * dt, mid = t0 + 0.5 * dt, half = 0.5 * dt;
    Field out(mesh);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double x = out.mesh->x(k), y = out.mesh->y(k);
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += wts[i] * g(x, y, mid + half * xi[i]);
        out.v[k] = s;
    }
    return out;
}

Field euler_step(const Field& u_prev, const Field& g_n, double dt,
                 const ProblemParams& params, const EllipticConfig& cfg,
                 SolveReport* report) {
    if (!(dt > 0.0)) throw std::invalid_argument("euler_step: requires dt > 0");
    Field h = u_prev;
    for (std::size_t k = 0; k < h.size(); ++k)
        h.v[k] = h.mesh->interior[k] ? u_prev.v[k] + dt * g_n.v[k] : 0.0;
    return solve_resolvent(h, dt, params, cfg, report, &u_prev);
}

Trajectory run_forced(const Field& u0, const ForcingFn& g, double T, int N0,
                      const ProblemParams& params, const EllipticConfig& cfg,
                      const RunOptions& opts) {
    auto forcing = [&](int n, const Field&) {
        return average_forcing(g, u0.mesh, n, T / N0);
    };
    return run_loop(u0, T, N0, params, cfg, opts, NonlinearitySpec::none_spec(), forcing);
}

Trajectory run_subhomogeneous(const Field& u0, const NonlinearitySpec& f, double T,
                              int N0, const ProblemParams& params,
                              const EllipticConfig& cfg, const RunOptions& opts) {
    if (f.kind == NonlinearitySpec::Kind::none)
        return run_forced(u0, [](double, double, double) { return 0.0; }, T, N0, params,
                          cfg, opts);
    if (f.kind == NonlinearitySpec::Kind::frozen)
        return run_forced(u0, f.g, T, N0, params, cfg, opts);
    if (f.kind != NonlinearitySpec::Kind::subhomog)
        throw ConfigError("run_subhomogeneous: f must be subhomogeneous");
    {
        std::vector<double> grid;
        const double smax = std::max(1.0, 100.0 * u0.max_norm());
        for (int k = 0; k < 64; ++k)
            grid.push_back(1e-3 * std::pow(smax / 1e-3, k / 63.0));
        const GrowthReport rep = check_growth_conditions(f, grid);
        if (!rep.f1 || !rep.f2)
            throw ConfigError("run_subhomogeneous: f violates growth condition (" +
                              rep.violated + ")");
    }
    auto forcing = [&](int, const Field& u_prev) {
        Field g(u0.mesh);
        for (std::size_t k = 0; k < g.size(); ++k)
            g.v[k] = f.f(u_prev.v[k]);
        return g;
    };
    return run_loop(u0, T, N0, params, cfg, opts, f, forcing);
}

Trajectory run_superhomogeneous(const Field& u0, const NonlinearitySpec& f, double T,
                                int N0, const ProblemParams& params,
                                const EllipticConfig& cfg, double picard_tol,
                                int picard_max, const RunOptions& opts,
                                PicardReport* report) {
    params.validate();
    if (f.kind != NonlinearitySpec::Kind::superhomog)
        throw ConfigError("run_superhomogeneous: f must be superhomogeneous");
    if (params.delta >= params.delta_crit()) {
        std::ostringstream os;
        os << "run_superhomogeneous: requires 0 < delta < 2+1/(p-1) = "
           << params.delta_crit();
        throw ConfigError(os.str());
    }
    {
        std::vector<double> grid;
        const double smax = std::max(1.0, 10.0 * u0.max_norm());
        for (int k = 0; k < 64; ++k)
            grid.push_back(1e-3 * std::pow(smax / 1e-3, k / 63.0));
        const GrowthReport rep = check_growth_conditions(f, grid);
        if (!rep.f3)
            throw ConfigError("run_superhomogeneous: f violates growth condition (f3)");
    }

    RunOptions inner = opts;
    inner.keep_fields = true;
    if (!std::isfinite(inner.blow_cap)) inner.blow_cap = 1e8 * u0.max_norm();

    PicardReport local;
    PicardReport& rep = report ? *report : local;
    rep = PicardReport{};
    rep.contraction_bound = T * f.lipschitz_on(0.0, 2.0 * u0.max_norm());

    // v^0: constant-in-time u0
    std::vector<Field> v_prev(static_cast<std::size_t>(N0) + 1, u0);
    Trajectory tr;
    const double dt = T / N0;
    static const double xi[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    for (int sweep = 1; sweep <= picard_max; ++sweep) {
        rep.sweeps = sweep;
        // g^n = 3-point Gauss average over the step of f(linear interp of v)
        auto forcing = [&](int n, const Field&) {
            Field g(u0.mesh, 0.0);
            for (int i = 0; i < 3; ++i) {
                const double t = (n - 0.5 + 0.5 * xi[i]) * dt;
                const double s = std::clamp(t / dt - (n - 1), 0.0, 1.0);
                const Field& a = v_prev[n - 1];
                const Field& b = v_prev[n];
                for (std::size_t k = 0; k < g.size(); ++k)
                    g.v[k] += wts[i] * f.f(a.v[k] + s * (b.v[k] - a.v[k]));
            }
            return g;
        };
        tr = run_loop(u0, T, N0, params, cfg, inner, f, forcing);
        if (tr.status == Trajectory::Status::blown_up) {
            rep.blowup_sweep = sweep;
            return tr;
        }
        if (tr.status == Trajectory::Status::solver_failed) {
            // inside the superhomogeneous loop a failed inner solve is treated
            // as an escape to infinity
            rep.blowup_sweep = sweep;
            rep.inner_failure = true;
            tr.status = Trajectory::Status::blown_up;
            return tr;
        }
        double dist = 0.0;
        for (int n = 0; n <= N0; ++n) dist = std::max(dist, max_diff(tr.fields[n], v_prev[n]));
        rep.sweep_distances.push_back(dist);
        if (dist < picard_tol) {
            rep.contracted = true;
            break;
        }
        v_prev = tr.fields;
    }
    if (!opts.keep_fields) {
        Field u_last = tr.fields.back();
        tr.fields.clear();
        tr.fields.push_back(u0);
        tr.fields.push_back(std::move(u_last));
        tr.forcing.clear();
        tr.fields_kept = false;
    }
    return tr;
}

std::vector<double> energy_identity_residual(const Trajectory& traj,
                                             const ProblemParams& params) {
    if (!traj.fields_kept || traj.fields.size() < 2)
        throw std::invalid_argument(
            "energy_identity_residual: trajectory must keep its fields");
    const NonlinearitySpec none = NonlinearitySpec::none_spec();
    const double E0 = energy_J(traj.fields[0], params, none);
    std::vector<double> gaps;
    gaps.reserve(traj.completed_steps);
    double dissip = 0.0, work = 0.0;
    for (int n = 1; n <= traj.completed_steps; ++n) {
        const Field& un = traj.fields[n];
        const Field& up = traj.fields[n - 1];
        Field inc = un;
        for (std::size_t k = 0; k < inc.size(); ++k) inc.v[k] -= up.v[k];
        dissip += l2_norm_sq(inc) / traj.dt;
        work += dot_quad(traj.forcing[n - 1], inc);
        const double En = energy_J(un, params, none);
        gaps.push_back(std::abs(dissip + En - E0 - work));
    }
    return gaps;
}

} // namespace pqsim
