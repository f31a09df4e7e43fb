#include "polywalk/exact_samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "polywalk/walks.hpp"

namespace polywalk {

Vector sample_cube(int n, double half_width, Pcg64& rng) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform(-half_width, half_width);
  return x;
}

Vector sample_centered_ball(int n, double radius, Pcg64& rng) {
  return radius * sample_unit_ball(rng, n);
}

Vector IsotropicSimplex::sample(Pcg64& rng) const {
  // Dirichlet(1,...,1) via normalized exponentials; the first n coordinates
  // are uniform on the standard simplex.
  Vector e(n + 1);
  for (int i = 0; i <= n; ++i) e(i) = -std::log(1.0 - rng.uniform());
  const Vector x = e.head(n) / e.sum();
  return to_isotropic(x);
}

Vector IsotropicSimplex::to_isotropic(const Vector& x) const { return transform * (x - mean); }

Vector IsotropicSimplex::to_simplex(const Vector& y) const { return transform_inv * y + mean; }

Polytope IsotropicSimplex::isotropic_polytope() const {
  // {A x <= b} under x = transform_inv y + mean.
  const Polytope simplex = make_simplex(n);
  RowMajorMatrix A = simplex.A() * transform_inv;
  Vector b = simplex.b() - simplex.A() * mean;
  return Polytope(std::move(A), std::move(b));
}

IsotropicSimplex make_isotropic_simplex(int n) {
  if (n < 1) throw std::invalid_argument("make_isotropic_simplex: n >= 1");
  const double dn = static_cast<double>(n);
  // Covariance of the standard simplex: lambda_perp on 1^perp, lambda_one
  // along the all-ones direction.
  const double lambda_perp = 1.0 / ((dn + 1.0) * (dn + 2.0));
  const double lambda_one = 1.0 / ((dn + 1.0) * (dn + 1.0) * (dn + 2.0));
  IsotropicSimplex s;
  s.n = n;
  s.mean = Vector::Constant(n, 1.0 / (dn + 1.0));
  const Matrix ones_proj = Matrix::Constant(n, n, 1.0 / dn);
  const Matrix perp_proj = Matrix::Identity(n, n) - ones_proj;
  s.transform = perp_proj / std::sqrt(lambda_perp) + ones_proj / std::sqrt(lambda_one);
  s.transform_inv = perp_proj * std::sqrt(lambda_perp) + ones_proj * std::sqrt(lambda_one);
  return s;
}

}  // namespace polywalk
