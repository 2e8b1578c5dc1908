#include "pqsim/edge_grid.hpp"

#include <cmath>

namespace pqsim {

void EdgeGrid::push_edge(double w, std::initializer_list<Entry> ents) {
    weights_.push_back(w);
    for (const auto& e : ents) entries_.push_back(e);
    offsets_.push_back(static_cast<std::uint32_t>(entries_.size()));
}

EdgeGrid::EdgeGrid(const Mesh& mesh) {
    offsets_.push_back(0);
    if (mesh.dim == 1) {
        family_factor_ = 1.0;
        const double ih = 1.0 / mesh.hx;
        const std::size_t n_edges = static_cast<std::size_t>(mesh.nx);
        weights_.reserve(n_edges);
        entries_.reserve(2 * n_edges);
        offsets_.reserve(n_edges + 1);
        for (int i = 0; i < mesh.nx; ++i) {
            push_edge(mesh.hx, {{static_cast<std::uint32_t>(i), -ih, 0.0},
                                {static_cast<std::uint32_t>(i + 1), ih, 0.0}});
        }
        return;
    }

    family_factor_ = 0.5;
    const int nx = mesh.nx, ny = mesh.ny;
    const double ihx = 1.0 / mesh.hx, ihy = 1.0 / mesh.hy;
    auto id = [&](int i, int j) { return static_cast<std::uint32_t>(mesh.index(i, j)); };
    auto wx1d = [&](int i) { return (i == 0 || i == nx) ? 0.5 * mesh.hx : mesh.hx; };
    auto wy1d = [&](int j) { return (j == 0 || j == ny) ? 0.5 * mesh.hy : mesh.hy; };

    // x-edges: (i,j)-(i+1,j), weight hx * wy(j); transverse derivative from
    // averaged central differences, one-sided on the boundary rows.
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double w = mesh.hx * wy1d(j);
            if (j > 0 && j < ny) {
                const double c = 0.25 * ihy;
                push_edge(w, {{id(i, j), -ihx, 0.0},
                              {id(i + 1, j), ihx, 0.0},
                              {id(i, j + 1), 0.0, c},
                              {id(i, j - 1), 0.0, -c},
                              {id(i + 1, j + 1), 0.0, c},
                              {id(i + 1, j - 1), 0.0, -c}});
            } else {
                const int jo = (j == 0) ? 1 : ny - 1;
                const double c = 0.5 * ihy * ((j == 0) ? 1.0 : -1.0);
                push_edge(w, {{id(i, j), -ihx, -c},
                              {id(i + 1, j), ihx, -c},
                              {id(i, jo), 0.0, c},
                              {id(i + 1, jo), 0.0, c}});
            }
        }
    }
    // y-edges: (i,j)-(i,j+1), symmetric roles.
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double w = mesh.hy * wx1d(i);
            if (i > 0 && i < nx) {
                const double c = 0.25 * ihx;
                push_edge(w, {{id(i, j), 0.0, -ihy},
                              {id(i, j + 1), 0.0, ihy},
                              {id(i + 1, j), c, 0.0},
                              {id(i - 1, j), -c, 0.0},
                              {id(i + 1, j + 1), c, 0.0},
                              {id(i - 1, j + 1), -c, 0.0}});
            } else {
                const int io = (i == 0) ? 1 : nx - 1;
                const double c = 0.5 * ihx * ((i == 0) ? 1.0 : -1.0);
                push_edge(w, {{id(i, j), -c, -ihy},
                              {id(i, j + 1), -c, ihy},
                              {id(io, j), c, 0.0},
                              {id(io, j + 1), c, 0.0}});
            }
        }
    }
}

void EdgeGrid::gradients(const Field& u, std::vector<double>& gx,
                         std::vector<double>& gy) const {
    const std::size_t ne = edge_count();
    gx.assign(ne, 0.0);
    gy.assign(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        double sx = 0.0, sy = 0.0;
        for (std::uint32_t k = offsets_[e]; k < offsets_[e + 1]; ++k) {
            const Entry& en = entries_[k];
            const double uv = u.v[en.node];
            sx += en.cx * uv;
            sy += en.cy * uv;
        }
        gx[e] = sx;
        gy[e] = sy;
    }
}

void EdgeGrid::scatter(const std::vector<double>& fx, const std::vector<double>& fy,
                       std::vector<double>& raw) const {
    for (std::size_t e = 0; e < edge_count(); ++e) {
        const double wf = family_factor_ * weights_[e];
        const double ax = wf * fx[e], ay = wf * fy[e];
        for (std::uint32_t k = offsets_[e]; k < offsets_[e + 1]; ++k) {
            const Entry& en = entries_[k];
            raw[en.node] += ax * en.cx + ay * en.cy;
        }
    }
}

double PowerDensity::value(double g2) const {
    const double m2 = g2 + eta * eta;
    return (std::pow(m2, 0.5 * p) - std::pow(eta, p)) / p;
}

double PowerDensity::weight(double g2) const {
    const double m2 = g2 + eta * eta;
    if (m2 == 0.0) return 0.0;  // p > 1: the flux a*g vanishes at g = 0
    return std::pow(m2, 0.5 * p - 1.0);
}

double PowerDensity::dweight(double g2) const {
    const double m2 = g2 + eta * eta;
    if (m2 == 0.0) return 0.0;
    return (0.5 * p - 1.0) * std::pow(m2, 0.5 * p - 2.0);
}

double default_grad_eta(double u_scale, const Mesh& mesh) {
    return 1e-8 * std::max(1.0, u_scale) / mesh.min_spacing();
}

} // namespace pqsim
