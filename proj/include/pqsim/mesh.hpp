#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace pqsim {

/// Tensor-product grid on an interval or an axis-aligned rectangle, with
/// boundary flags, exact distance-to-boundary and composite trapezoid weights.
/// Immutable after construction; share via MeshPtr across concurrent runs.
struct Mesh {
    int dim = 1;         // 1 or 2
    int nx = 0, ny = 0;  // cells per axis (ny unused in 1D)
    double ax = 0, bx = 0, ay = 0, by = 0;
    double hx = 0, hy = 0;

    std::vector<double> xs, ys;      // axis node coordinates
    std::vector<bool> interior;      // per node
    std::vector<double> dist;        // distance to the boundary, 0 exactly on it
    std::vector<double> quad_w;      // per-node trapezoid weights, sum = |Omega|

    std::size_t node_count() const { return interior.size(); }
    std::size_t index(int i, int j = 0) const {
        return dim == 1 ? static_cast<std::size_t>(i)
                        : static_cast<std::size_t>(j) * (nx + 1) + i;
    }
    double x(std::size_t k) const { return dim == 1 ? xs[k] : xs[k % (nx + 1)]; }
    double y(std::size_t k) const { return dim == 1 ? 0.0 : ys[k / (nx + 1)]; }

    double measure() const { return dim == 1 ? bx - ax : (bx - ax) * (by - ay); }
    double diameter() const;
    double min_spacing() const { return dim == 1 ? hx : (hx < hy ? hx : hy); }

    std::vector<std::size_t> interior_nodes() const;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// n+1 equispaced nodes on [a,b]; endpoints are boundary. Requires a<b and
/// n large enough that an interior node exists.
MeshPtr build_interval_mesh(double a, double b, int n);

/// Tensor grid on [ax,bx] x [ay,by]; dist is the exact min over the four
/// edge distances.
MeshPtr build_rect_mesh(double ax, double bx, double ay, double by, int nx, int ny);

/// Boundary growth profile of the conical shell:
///   s                   for delta < 1,
///   s log^{1/p}(A/s)    for delta = 1  (0 at s=0 by continuity),
///   s^{p/(p-1+delta)}   for delta > 1.
/// A must exceed s when delta = 1 so the log stays positive.
double phi_delta(double s, double delta, double p, double A);

/// The A used throughout for phi_delta on a given mesh: 4 * diam(Omega),
/// which keeps log(A/s) >= log 4 over the whole domain.
inline double phi_scale_A(const Mesh& m) { return 4.0 * m.diameter(); }

} // namespace pqsim
