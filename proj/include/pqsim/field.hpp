#pragma once

#include "pqsim/mesh.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace pqsim {

/// Nodal scalar values on a Mesh. Value semantics; the mesh is shared.
struct Field {
    MeshPtr mesh;
    std::vector<double> v;

    Field() = default;
    explicit Field(MeshPtr m, double fill = 0.0)
        : mesh(std::move(m)), v(mesh->node_count(), fill) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t k) { return v[k]; }
    double operator[](std::size_t k) const { return v[k]; }

    double max_norm() const {
        double r = 0;
        for (double x : v) r = std::max(r, std::abs(x));
        return r;
    }
    double min_value() const {
        double r = v.empty() ? 0.0 : v[0];
        for (double x : v) r = std::min(r, x);
        return r;
    }
    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
    /// > 0 on all interior nodes and = 0 on boundary nodes.
    bool positive_interior(double boundary_tol = 0.0) const {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (mesh->interior[k]) {
                if (!(v[k] > 0.0)) return false;
            } else if (std::abs(v[k]) > boundary_tol) {
                return false;
            }
        }
        return true;
    }
};

inline Field field_from(MeshPtr m, const std::function<double(double, double)>& f) {
    Field u(std::move(m));
    for (std::size_t k = 0; k < u.size(); ++k)
        u.v[k] = f(u.mesh->x(k), u.mesh->y(k));
    return u;
}

inline double max_diff(const Field& a, const Field& b) {
    double r = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        r = std::max(r, std::abs(a.v[k] - b.v[k]));
    return r;
}

/// Quadrature inner product sum_k w_k a_k b_k.
inline double dot_quad(const Field& a, const Field& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a.mesh->quad_w[k] * a.v[k] * b.v[k];
    return s;
}

/// Quadrature value of the squared L2 norm.
inline double l2_norm_sq(const Field& u) { return dot_quad(u, u); }

} // namespace pqsim
