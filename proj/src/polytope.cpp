#include "polywalk/polytope.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "polywalk/rng.hpp"

namespace polywalk {

AffineMap AffineMap::identity(int n) { return scaling(1.0, n); }

AffineMap AffineMap::scaling(double c, int n) {
  if (n < 1 || !(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("AffineMap::scaling: need n >= 1 and c > 0");
  }
  AffineMap map;
  map.sigma_factor = Matrix::Identity(n, n) * c;
  map.sigma_inv_factor = Matrix::Identity(n, n) / c;
  map.mu = Vector::Zero(n);
  map.log_det_factor = n * std::log(c);
  return map;
}

double AffineMap::sigma_max() const {
  return sigma_factor.jacobiSvd().singularValues()(0);
}

double AffineMap::sigma_min() const {
  const auto sv = sigma_factor.jacobiSvd().singularValues();
  return sv(sv.size() - 1);
}

void AffineMap::validate(double tol) const {
  const int n = dim();
  if (sigma_factor.rows() != n || sigma_factor.cols() != n ||
      sigma_inv_factor.rows() != n || sigma_inv_factor.cols() != n) {
    throw std::invalid_argument("AffineMap: dimension mismatch");
  }
  const Matrix prod = sigma_factor * sigma_inv_factor;
  const double scale = std::max(1.0, sigma_factor.cwiseAbs().maxCoeff());
  if ((prod - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("AffineMap: sigma_inv_factor is not the inverse");
  }
  const double logdet = std::log(std::abs(sigma_factor.partialPivLu().determinant()));
  if (std::abs(logdet - log_det_factor) > tol * std::max(1.0, std::abs(logdet))) {
    throw std::invalid_argument("AffineMap: log_det_factor inconsistent");
  }
}

Polytope::Polytope(RowMajorMatrix A, Vector b, std::optional<double> rho)
    : A_(std::move(A)), b_(std::move(b)), rho_(rho) {
  const auto m = A_.rows();
  const auto n = A_.cols();
  if (m < 1 || n < 1) throw std::invalid_argument("Polytope: need m >= 1 and n >= 1");
  if (b_.size() != m) throw std::invalid_argument("Polytope: b size mismatch");
  if (!A_.allFinite() || !b_.allFinite()) throw std::invalid_argument("Polytope: non-finite input");
  if (rho_ && !(*rho_ > 0.0)) throw std::invalid_argument("Polytope: rho must be positive");
  row_norms_ = A_.rowwise().norm();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (row_norms_(j) == 0.0) {
      throw std::invalid_argument("Polytope: all-zero row " + std::to_string(j));
    }
  }
}

Polytope Polytope::with_rho(std::optional<double> rho) const {
  return Polytope(A_, b_, rho);
}

MembershipResult Polytope::membership(const Vector& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("membership: dimension mismatch");
  const Vector residual = b_ - A_ * x;
  MembershipResult result;
  for (Eigen::Index j = 0; j < residual.size(); ++j) {
    if (residual(j) < 0.0) {
      result.first_violated = static_cast<int>(j);
      return result;
    }
  }
  if (rho_ && x.norm() > *rho_) {
    result.first_violated = kBallCapIndex;
    return result;
  }
  result.inside = true;
  return result;
}

double Polytope::slack(int j, const Vector& x) const {
  if (j < 0 || j >= num_constraints()) throw std::invalid_argument("slack: bad index");
  if (x.size() != A_.cols()) throw std::invalid_argument("slack: dimension mismatch");
  return b_(j) - A_.row(j).dot(x);
}

Vector Polytope::slacks(const Vector& x) const {
  if (x.size() != A_.cols()) throw std::invalid_argument("slacks: dimension mismatch");
  return b_ - A_ * x;
}

double Polytope::distance_to_boundary(const Vector& x) const {
  const Vector residual = slacks(x);
  double dist = (residual.array() / row_norms_.array()).minCoeff();
  if (rho_) dist = std::min(dist, *rho_ - x.norm());
  return dist;
}

Polytope apply_affine(const Polytope& poly, const AffineMap& map) {
  if (map.dim() != poly.dim()) throw std::invalid_argument("apply_affine: dimension mismatch");
  map.validate();
  RowMajorMatrix A = poly.A() * map.sigma_factor;
  Vector b = poly.b() - poly.A() * map.mu;
  return Polytope(std::move(A), std::move(b), std::nullopt);
}

Polytope make_cube(int n) {
  return make_scaled_cube(Vector::Ones(n));
}

Polytope make_scaled_cube(const Vector& scales) {
  const int n = static_cast<int>(scales.size());
  if (n < 1 || (scales.array() <= 0.0).any()) {
    throw std::invalid_argument("make_scaled_cube: scales must be positive");
  }
  RowMajorMatrix A = RowMajorMatrix::Zero(2 * n, n);
  Vector b(2 * n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 1.0;
    b(i) = scales(i);
    A(n + i, i) = -1.0;
    b(n + i) = scales(i);
  }
  return Polytope(std::move(A), std::move(b));
}

Polytope make_simplex(int n) {
  if (n < 1) throw std::invalid_argument("make_simplex: n >= 1");
  RowMajorMatrix A = RowMajorMatrix::Zero(n + 1, n);
  Vector b = Vector::Zero(n + 1);
  for (int i = 0; i < n; ++i) A(i, i) = -1.0;  // -x_i <= 0
  A.row(n).setOnes();                          // sum x <= 1
  b(n) = 1.0;
  return Polytope(std::move(A), std::move(b));
}

Polytope make_cross_polytope(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("make_cross_polytope: need 1 <= n <= 20");
  const int m = 1 << n;
  RowMajorMatrix A(m, n);
  for (int s = 0; s < m; ++s) {
    for (int i = 0; i < n; ++i) A(s, i) = (s >> i) & 1 ? 1.0 : -1.0;
  }
  return Polytope(std::move(A), Vector::Ones(m));
}

Polytope make_random_rows(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("make_random_rows: need n, m >= 1");
  Pcg64 rng(seed);
  RowMajorMatrix A(m, n);
  for (int j = 0; j < m; ++j) {
    Vector row(n);
    double norm = 0.0;
    do {
      for (int i = 0; i < n; ++i) row(i) = rng.normal();
      norm = row.norm();
    } while (norm == 0.0);
    A.row(j) = row / norm;
  }
  return Polytope(std::move(A), Vector::Ones(m));
}

}  // namespace polywalk
