#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace polywalk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Affine change of frame x = sigma_factor * y + mu. The rounding pipeline
/// composes these so that sigma_factor plays the role of a covariance square
/// root of the body being rounded.
struct AffineMap {
  Matrix sigma_factor;
  Matrix sigma_inv_factor;
  Vector mu;
  double log_det_factor = 0.0;

  static AffineMap identity(int n);
  static AffineMap scaling(double c, int n);

  int dim() const { return static_cast<int>(mu.size()); }
  Vector to_original(const Vector& y) const { return sigma_factor * y + mu; }
  Vector to_working(const Vector& x) const { return sigma_inv_factor * (x - mu); }
  double sigma_max() const;  // largest singular value of sigma_factor
  double sigma_min() const;

  /// Checks sigma_factor * sigma_inv_factor == I and the stored
  /// log-determinant, both to 1e-8 relative. Throws on failure.
  void validate(double tol = 1e-8) const;
};

struct MembershipResult {
  bool inside = false;
  // Smallest violating constraint index, or kBallCapIndex when only the
  // rho cap fails. Empty when inside.
  std::optional<int> first_violated;
};

/// The body {x : Ax <= b}, optionally intersected with a centered ball of
/// radius rho. Immutable after construction; row norms are cached.
class Polytope {
 public:
  static constexpr int kBallCapIndex = -1;

  Polytope(RowMajorMatrix A, Vector b, std::optional<double> rho = std::nullopt);

  int num_constraints() const { return static_cast<int>(A_.rows()); }
  int dim() const { return static_cast<int>(A_.cols()); }
  const RowMajorMatrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const std::optional<double>& rho() const { return rho_; }
  const Vector& row_norms() const { return row_norms_; }

  Polytope with_rho(std::optional<double> rho) const;

  /// Full membership scan: m dot products plus the cap test. A boundary
  /// point counts as inside (violation is strict slack < 0).
  MembershipResult membership(const Vector& x) const;

  /// Raw slack b_j - A_j . x (negative means violated). Euclidean distance
  /// to the hyperplane is slack / row_norms()[j].
  double slack(int j, const Vector& x) const;
  Vector slacks(const Vector& x) const;

  /// min_j slack_j / ||A_j||, further min'd with rho - ||x|| when capped.
  /// Negative when x is outside; the caller decides what that means.
  double distance_to_boundary(const Vector& x) const;

 private:
  RowMajorMatrix A_;
  Vector b_;
  std::optional<double> rho_;
  Vector row_norms_;
};

/// Preimage body sigma_inv_factor * (K - mu): returns {y : (A F) y <= b - A mu}.
/// The rho cap is not carried over; callers re-cap explicitly.
Polytope apply_affine(const Polytope& poly, const AffineMap& map);

Polytope make_cube(int n);
Polytope make_scaled_cube(const Vector& scales);
Polytope make_simplex(int n);
Polytope make_cross_polytope(int n);  // 2^n constraints, n <= 20
Polytope make_random_rows(int n, int m, std::uint64_t seed);

}  // namespace polywalk
