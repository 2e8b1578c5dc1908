#include "pqsim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pqsim {

double Mesh::diameter() const {
    if (dim == 1) return bx - ax;
    return std::hypot(bx - ax, by - ay);
}

std::vector<std::size_t> Mesh::interior_nodes() const {
    std::vector<std::size_t> idx;
    idx.reserve(node_count());
    for (std::size_t k = 0; k < node_count(); ++k)
        if (interior[k]) idx.push_back(k);
    return idx;
}

namespace {

std::vector<double> axis_coords(double a, double b, int n) {
    std::vector<double> xs(n + 1);
    for (int i = 0; i <= n; ++i) xs[i] = a + (b - a) * i / n;
    xs[n] = b;
    return xs;
}

std::vector<double> axis_trapezoid(double h, int n) {
    std::vector<double> w(n + 1, h);
    w[0] = w[n] = 0.5 * h;
    return w;
}

} // namespace

MeshPtr build_interval_mesh(double a, double b, int n) {
    if (!(a < b))
        throw std::invalid_argument("build_interval_mesh: requires a < b");
    if (n < 2)
        throw std::invalid_argument(
            "build_interval_mesh: n=" + std::to_string(n) +
            " leaves no interior node (need n >= 2)");
    auto m = std::make_shared<Mesh>();
    m->dim = 1;
    m->nx = n;
    m->ax = a;
    m->bx = b;
    m->hx = (b - a) / n;
    m->xs = axis_coords(a, b, n);
    m->interior.assign(n + 1, true);
    m->interior[0] = m->interior[n] = false;
    m->dist.resize(n + 1);
    for (int i = 0; i <= n; ++i)
        m->dist[i] = std::min(m->xs[i] - a, b - m->xs[i]);
    m->dist[0] = m->dist[n] = 0.0;
    m->quad_w = axis_trapezoid(m->hx, n);
    return m;
}

MeshPtr build_rect_mesh(double ax, double bx, double ay, double by, int nx, int ny) {
    if (!(ax < bx) || !(ay < by))
        throw std::invalid_argument("build_rect_mesh: requires ax < bx and ay < by");
    if (nx < 2 || ny < 2)
        throw std::invalid_argument(
            "build_rect_mesh: nx=" + std::to_string(nx) + ", ny=" + std::to_string(ny) +
            " leaves no interior node (need nx, ny >= 2)");
    auto m = std::make_shared<Mesh>();
    m->dim = 2;
    m->nx = nx;
    m->ny = ny;
    m->ax = ax;
    m->bx = bx;
    m->ay = ay;
    m->by = by;
    m->hx = (bx - ax) / nx;
    m->hy = (by - ay) / ny;
    m->xs = axis_coords(ax, bx, nx);
    m->ys = axis_coords(ay, by, ny);
    const auto wx = axis_trapezoid(m->hx, nx);
    const auto wy = axis_trapezoid(m->hy, ny);
    const std::size_t nn = static_cast<std::size_t>(nx + 1) * (ny + 1);
    m->interior.assign(nn, false);
    m->dist.assign(nn, 0.0);
    m->quad_w.assign(nn, 0.0);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const std::size_t k = m->index(i, j);
            const bool inner = i > 0 && i < nx && j > 0 && j < ny;
            m->interior[k] = inner;
            m->quad_w[k] = wx[i] * wy[j];
            if (inner)
                m->dist[k] = std::min(std::min(m->xs[i] - ax, bx - m->xs[i]),
                                      std::min(m->ys[j] - ay, by - m->ys[j]));
        }
    }
    return m;
}

double phi_delta(double s, double delta, double p, double A) {
    if (s < 0.0) throw std::invalid_argument("phi_delta: requires s >= 0");
    if (!(p > 1.0)) throw std::invalid_argument("phi_delta: requires p > 1");
    if (!(delta > 0.0)) throw std::invalid_argument("phi_delta: requires delta > 0");
    if (delta < 1.0) return s;
    if (delta > 1.0) return std::pow(s, p / (p - 1.0 + delta));
    // delta == 1
    if (s == 0.0) return 0.0;
    if (A <= s)
        throw std::invalid_argument("phi_delta: requires A > s when delta = 1 (log must stay positive)");
    return s * std::pow(std::log(A / s), 1.0 / p);
}

} // namespace pqsim
