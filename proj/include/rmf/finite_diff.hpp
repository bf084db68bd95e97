#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace rmf::fd {

/// Fornberg weights for the m-th derivative at x0 from values at `nodes`.
std::vector<double> weights(double x0, std::span<const double> nodes, int m);

/// m-th derivative of uniformly spaced samples. Interior nodes use the central
/// stencil of the requested accuracy order; nodes near the ends use a shifted
/// one-sided stencil of the same order.
std::vector<double> derivative(std::span<const double> f, double h, int m = 1, int accuracy = 4);

/// Same for 3-vectors.
std::vector<Eigen::Vector3d> derivative(std::span<const Eigen::Vector3d> f, double h, int m = 1,
                                        int accuracy = 4);

/// Number of nodes at each end that fall back to one-sided stencils.
int boundary_width(int m, int accuracy);

}  // namespace rmf::fd
