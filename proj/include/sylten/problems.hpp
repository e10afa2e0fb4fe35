#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "sylten/sylvester.hpp"

namespace sylten {

/// A consistent benchmark instance: rhs is constructed as op applied to
/// the known exact solution, so every solver's relative error is
/// measurable against exact.
struct ProblemInstance {
  SylvesterOperator op;
  DenseTensor rhs;
  DenseTensor exact;
  std::string label;
};

/// (1/h^2) tridiag(-1, 2, -1), the 1-D Dirichlet Laplacian stencil.
DenseMatrix poisson_matrix(int p, double h);

/// Poisson stencil plus the second-order convection stencil
/// (c/(4h)) pentadiag(sub 1, diag 3, super -5, second-super 1); h = 1/(p+1).
DenseMatrix convection_diffusion_matrix(int p, double v, double c);

/// Five-point discretization on the n0 x n0 interior grid of
///   -Laplace(u) + px*u_x + qy*u_y + g*u,   h = 1/(n0+1),
/// with coefficients evaluated at the grid nodes, x varying fastest.
DenseMatrix fdm2d_matrix_general(
    int n0, const std::function<double(double, double)>& px,
    const std::function<double(double, double)>& qy,
    const std::function<double(double, double)>& g);

/// The variable-coefficient instance used by the third benchmark family:
/// px = -exp(x*y), qy = sin(x*y), g = y^2 - x^2.
DenseMatrix fdm2d_matrix(int n0);

/// Three-factor Poisson problem on a p x p x p grid, exact = all ones.
ProblemInstance make_poisson3d(int p = 10);

/// Three-factor convection-diffusion problem, exact = all ones.
ProblemInstance make_convection_diffusion(double v, std::array<double, 3> c,
                                          int p = 10);

/// Variable-coefficient 2-D stencil factors of sizes 4, 9, 16,
/// exact = all ones.
ProblemInstance make_fdm2d();

enum class Conditioning {
  WellPosed,  // rows shifted to strict diagonal dominance
  Raw,        // unshifted uniform [-1, 1) entries
};

/// Deterministic random instance: identical (shape, seed, conditioning)
/// give bit-identical factors and tensors on every platform.
ProblemInstance make_random(const Shape& shape, std::uint64_t seed,
                            Conditioning conditioning = Conditioning::WellPosed);

}  // namespace sylten
