#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "polywalk/polytope.hpp"
#include "polywalk/rng.hpp"
#include "polywalk/walks.hpp"

namespace polywalk {

struct RoundingIterationInfo {
  int iteration = 0;
  const Polytope* working = nullptr;  // capped working-frame polytope
  const AffineMap* map = nullptr;     // frame entering this iteration
  double rho_prime = 0.0;             // nested-body ball radius, original frame
  double rho_cap = 0.0;               // centered sampling cap, working frame
  const Vector* x0 = nullptr;         // warm start, working frame
};

struct RoundingConfig {
  double r = 1.0;  // inradius bound: rB is contained in the body
  double R = 1.0;  // circumradius bound
  std::int64_t p = 0;  // samples per iteration; needs p >= n+1
  double eps = 0.05;
  WalkConfig walk;  // eta/alpha/proper-step template for every inner walk
  double checks_cap = std::numeric_limits<double>::infinity();  // per attempt
  int attempts_max = 1;
  int cap_log_exponent = 0;  // 0: displayed cap log(40 n^2 / eps); 2: p^2 variant
  std::function<void(const RoundingIterationInfo&)> observer;
};

struct RoundingResult {
  AffineMap map;
  Vector warm_point;  // working-frame interior point, margin >= n^-3
  std::int64_t iterations_completed = 0;
  std::int64_t checks_used = 0;
  bool succeeded = false;
  std::string failure_reason;
  WalkStats stats;
};

struct Moments {
  Vector mu;
  Matrix sigma;  // population-normalized: (1/p) sum (z - mu)(z - mu)^T
};

Moments estimate_moments(const std::vector<Vector>& samples);

/// Uniform point on the unit ball, resampled until its distance to the
/// sphere is at least n^-3.
Vector initial_interior_point(int n, Pcg64& rng);

/// Working-frame coordinates of the same original-frame point under the
/// next map: next^-1(current(y)).
Vector reexpress_point(const AffineMap& current, const AffineMap& next, const Vector& y);

/// Practical step size for the rounding loop's inner walks, sized for the
/// nearly isotropic working bodies the loop maintains.
double rounding_walk_eta(int n);

/// Centered working-frame sampling cap 20 sqrt(n) log(40 n^2 p^e / eps).
double rounding_cap_radius(int n, std::int64_t p, double eps, int cap_log_exponent);

/// Iterative rounding over the nested bodies K_i = (1 + 1/n)^i rB
/// intersected with the polytope: sample the current working body, estimate
/// moments, fold their square root into the frame, regenerate a warm start
/// in the next frame, repeat. The returned map sends the body to
/// approximately 2-isotropic position.
RoundingResult round_polytope(const Polytope& poly, const RoundingConfig& cfg, Pcg64& rng);

/// round_polytope with a per-attempt inequality-check budget and retries on
/// fresh RNG substreams.
RoundingResult round_bounded(const Polytope& poly, const RoundingConfig& cfg, Pcg64& rng);

struct WarmStartResult {
  Vector point;
  bool ok = false;
  std::string error;
};

/// Draws approximately-uniform singles in the current frame, re-expresses
/// them in the next frame, and returns the first with boundary margin at
/// least n^-3 in the next frame's capped body. Gives up after 64 tries,
/// which signals a mis-rounded frame.
WarmStartResult warm_start(const Polytope& poly, const AffineMap& current,
                           const AffineMap& next, const Vector& x0, double rho_prime,
                           double rho_cap, const WalkConfig& walk, Pcg64& rng,
                           WalkStats* aggregate);

}  // namespace polywalk
