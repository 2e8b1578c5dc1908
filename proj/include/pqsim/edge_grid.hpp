#pragma once

#include "pqsim/field.hpp"
#include "pqsim/mesh.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace pqsim {

/// Staggered (cell-edge) gradient sampling of a nodal field.
///
/// Every edge carries a quadrature weight and a *linear* map
///   G_e u = (sum_i cx_i u_i, sum_i cy_i u_i)
/// approximating the full gradient at the edge midpoint. In 1D this is the
/// plain difference quotient. In 2D the along-edge component is the
/// difference quotient and the transverse component averages the neighbouring
/// central differences (one-sided on boundary rows), so the map stays linear
/// and defined for every nodal field.
///
/// Integrals of gradient densities use
///   I[psi] = family_factor * sum_e w_e psi(G_e u),
/// with family_factor = 1 in 1D and 1/2 in 2D (x- and y-edge families each
/// sample the whole domain). Each family's weights sum to |Omega| exactly.
///
/// The discrete operators are the exact gradients of these integrals in the
/// nodal quadrature inner product, which makes summation by parts an identity
/// rather than an approximation.
class EdgeGrid {
  public:
    struct Entry {
        std::uint32_t node;
        double cx, cy;
    };

    explicit EdgeGrid(const Mesh& mesh);

    std::size_t edge_count() const { return weights_.size(); }
    double weight(std::size_t e) const { return weights_[e]; }
    double family_factor() const { return family_factor_; }

    /// Gradient components of u at every edge.
    void gradients(const Field& u, std::vector<double>& gx, std::vector<double>& gy) const;

    /// raw[node] += family_factor * w_e * (fx_e, fy_e) . (cx, cy) for each
    /// entry; the adjoint of `gradients` against edge flux vectors.
    void scatter(const std::vector<double>& fx, const std::vector<double>& fy,
                 std::vector<double>& raw) const;

    /// Entries of edge e (at most 6).
    const Entry* entries(std::size_t e, int& count) const {
        count = static_cast<int>(offsets_[e + 1] - offsets_[e]);
        return entries_.data() + offsets_[e];
    }

  private:
    void push_edge(double w, std::initializer_list<Entry> ents);

    std::vector<double> weights_;
    std::vector<std::uint32_t> offsets_;
    std::vector<Entry> entries_;
    double family_factor_ = 1.0;
};

/// Regularized power density psi(g) = (1/p)((|g|^2+eta^2)^{p/2} - eta^p).
/// weight() is the flux coefficient a with flux = a * g; dweight() is da/d|g|^2.
struct PowerDensity {
    double p;
    double eta = 0.0;

    double value(double g2) const;
    double weight(double g2) const;
    double dweight(double g2) const;
};

/// Default gradient regularization: 1e-8 * (scale of u) / h, used only when
/// an exponent is below 2. Reported in solver metadata.
double default_grad_eta(double u_scale, const Mesh& mesh);

} // namespace pqsim
