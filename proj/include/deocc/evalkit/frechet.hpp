#pragma once

#include <Eigen/Dense>

namespace deocc::evalkit {

inline constexpr double kFrechetRidge = 1e-6;

/// Fréchet distance between Gaussians fitted to the rows of `a` and `b`:
///   ‖μ_a − μ_b‖² + Tr(Σ_a + Σ_b − 2 (Σ_a Σ_b)^{1/2})
/// Covariances use 1/(n−1) and get `ridge`·I added (to both, everywhere).
/// The root is taken through the symmetric form Σ_a^{1/2} Σ_b Σ_a^{1/2}.
/// Throws ValidationError when either set has fewer than 2 rows or the
/// widths differ; logs a warning when n <= dim.
double frechet_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double ridge = kFrechetRidge);

}  // namespace deocc::evalkit
