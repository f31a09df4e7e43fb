#pragma once

#include <functional>

#include "polywalk/polytope.hpp"
#include "polywalk/rng.hpp"

namespace polywalk {

using ExactSampler = std::function<Vector(Pcg64&)>;

/// Uniform on the axis cube [-half_width, half_width]^n.
Vector sample_cube(int n, double half_width, Pcg64& rng);

/// Uniform on the centered ball of the given radius.
Vector sample_centered_ball(int n, double radius, Pcg64& rng);

/// The standard simplex {x >= 0, sum x <= 1} mapped to zero mean and
/// identity covariance; both the exact sampler and the closed-form
/// transform are available, so anti-concentration and membership tests can
/// agree on the same body.
struct IsotropicSimplex {
  int n = 0;
  Matrix transform;      // Sigma^(-1/2) of the standard simplex
  Matrix transform_inv;  // Sigma^(1/2)
  Vector mean;           // simplex centroid 1/(n+1)

  Vector sample(Pcg64& rng) const;                 // exact uniform, isotropic frame
  Vector to_isotropic(const Vector& x) const;      // transform * (x - mean)
  Vector to_simplex(const Vector& y) const;        // inverse map
  Polytope isotropic_polytope() const;             // the body in the isotropic frame
};

IsotropicSimplex make_isotropic_simplex(int n);

}  // namespace polywalk
