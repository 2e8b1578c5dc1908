#include "pqsim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace pqsim {

namespace {

Field raw_power_gradient(const Field& u, const PowerDensity& psi) {
    const EdgeGrid grid(*u.mesh);
    std::vector<double> gx, gy;
    grid.gradients(u, gx, gy);
    std::vector<double> fx(grid.edge_count()), fy(grid.edge_count());
    for (std::size_t e = 0; e < grid.edge_count(); ++e) {
        const double a = psi.weight(gx[e] * gx[e] + gy[e] * gy[e]);
        fx[e] = a * gx[e];
        fy[e] = a * gy[e];
    }
    Field raw(u.mesh);
    grid.scatter(fx, fy, raw.v);
    return raw;
}

Field raw_to_operator(Field raw) {
    const Mesh& m = *raw.mesh;
    for (std::size_t k = 0; k < raw.size(); ++k)
        raw.v[k] = m.interior[k] ? raw.v[k] / m.quad_w[k] : 0.0;
    return raw;
}

} // namespace

Field apply_p_laplacian(const Field& u, double p, double eta) {
    if (!(p > 1.0)) throw std::invalid_argument("apply_p_laplacian: requires p > 1");
    return raw_to_operator(raw_power_gradient(u, PowerDensity{p, eta}));
}

Field apply_pq_laplacian(const Field& u, const ProblemParams& params, double eta) {
    Field rp = raw_power_gradient(u, PowerDensity{params.p, eta});
    const Field rq = raw_power_gradient(u, PowerDensity{params.q, eta});
    for (std::size_t k = 0; k < rp.size(); ++k) rp.v[k] += rq.v[k];
    return raw_to_operator(std::move(rp));
}

double grad_integral(const Field& u, double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("grad_integral: requires m >= 1");
    const EdgeGrid grid(*u.mesh);
    std::vector<double> gx, gy;
    grid.gradients(u, gx, gy);
    double s = 0.0;
    for (std::size_t e = 0; e < grid.edge_count(); ++e) {
        const double g2 = gx[e] * gx[e] + gy[e] * gy[e];
        s += grid.weight(e) * std::pow(g2, 0.5 * m);
    }
    return grid.family_factor() * s;
}

double dirichlet_energy(const Field& u, double p, double eta) {
    const PowerDensity psi{p, eta};
    const EdgeGrid grid(*u.mesh);
    std::vector<double> gx, gy;
    grid.gradients(u, gx, gy);
    double s = 0.0;
    for (std::size_t e = 0; e < grid.edge_count(); ++e)
        s += grid.weight(e) * psi.value(gx[e] * gx[e] + gy[e] * gy[e]);
    return grid.family_factor() * s;
}

double singular_integral(const Field& u, double delta) {
    const Mesh& m = *u.mesh;
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!m.interior[k]) continue;
        const double a = std::abs(u.v[k]);
        s += m.quad_w[k] * (delta == 1.0 ? std::log(a) : std::pow(a, 1.0 - delta));
    }
    return s;
}

double integrate_pointwise(const Field& u, const std::function<double(double)>& phi) {
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        s += u.mesh->quad_w[k] * phi(u.v[k]);
    return s;
}

double energy_J(const Field& u, const ProblemParams& params, const NonlinearitySpec& f,
                double eta) {
    double J = dirichlet_energy(u, params.p, eta) + dirichlet_energy(u, params.q, eta);
    const double sing = singular_integral(u, params.delta);
    J -= (params.delta == 1.0) ? params.theta * sing
                               : params.theta / (1.0 - params.delta) * sing;
    if (f.is_reaction())
        J -= integrate_pointwise(u, [&](double s) { return f.F(s); });
    return J;
}

double nehari_I(const Field& u, const ProblemParams& params, const NonlinearitySpec& f,
                double eta) {
    double I = grad_integral(u, params.p) + grad_integral(u, params.q);
    (void)eta;
    const Mesh& m = *u.mesh;
    double sing = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!m.interior[k]) continue;
        sing += m.quad_w[k] * std::pow(std::abs(u.v[k]), 1.0 - params.delta);
    }
    I -= params.theta * sing;
    if (f.is_reaction())
        I -= integrate_pointwise(u, [&](double s) { return f.f(s) * s; });
    return I;
}

} // namespace pqsim
