#pragma once

#include "pqsim/edge_grid.hpp"
#include "pqsim/field.hpp"
#include "pqsim/params.hpp"

namespace pqsim {

/// Discrete -div(|Du|^{p-2}Du) at interior nodes (0 on the boundary), the
/// exact gradient of (1/p) I[|Du|^p] in the quadrature inner product.
/// eta regularizes |Du|^{p-2} as (|Du|^2+eta^2)^{(p-2)/2}; only needed for p < 2.
Field apply_p_laplacian(const Field& u, double p, double eta = 0.0);

/// Sum of the two power-law diffusion operators.
Field apply_pq_laplacian(const Field& u, const ProblemParams& params, double eta = 0.0);

/// Edge quadrature of integral |Du|^m (m >= 1, unregularized).
double grad_integral(const Field& u, double m);

/// (1/p) * edge quadrature of the (regularized) p-power gradient density.
double dirichlet_energy(const Field& u, double p, double eta = 0.0);

/// integral |u|^{1-delta} for delta != 1, integral log|u| for delta = 1;
/// boundary nodes excluded (trace u = 0). May return +-inf when the
/// integrand blows up at an interior node.
double singular_integral(const Field& u, double delta);

/// J(u) = (1/p) I[|Du|^p] + (1/q) I[|Du|^q] - theta/(1-delta) I[|u|^{1-delta}]
///        - I[F(u)]      (delta = 1: the singular term is -theta I[log|u|]).
/// Returns a non-finite value when the singular integral overflows.
double energy_J(const Field& u, const ProblemParams& params, const NonlinearitySpec& f,
                double eta = 0.0);

/// I(u) = I[|Du|^p] + I[|Du|^q] - theta I[|u|^{1-delta}] - I[f(u) u].
double nehari_I(const Field& u, const ProblemParams& params, const NonlinearitySpec& f,
                double eta = 0.0);

/// Quadrature of a pointwise composition integral phi(u).
double integrate_pointwise(const Field& u, const std::function<double(double)>& phi);

} // namespace pqsim
