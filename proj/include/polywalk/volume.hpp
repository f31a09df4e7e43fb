#pragma once

#include <cstdint>
#include <vector>

#include "polywalk/polytope.hpp"
#include "polywalk/rng.hpp"
#include "polywalk/rounding.hpp"

namespace polywalk {

double ball_log_volume(int n, double radius);
double ball_volume(int n, double radius);

/// Undo the rounding frame: scale^-n * det(sigma_factor) * vol_rounded,
/// accumulated in log space.
double volume_rescale(double vol_rounded, const AffineMap& map, double scale = 1.0);

struct VolumeEstimate {
  double volume = 0.0;
  double log_volume = 0.0;
  double rel_error = 0.0;          // delta-method propagation of the ratio errors
  std::vector<double> ratios;      // one per telescoping rung, each in [1, e]
  bool reliable = false;           // all ratios within their nesting bounds
  bool succeeded = false;
  RoundingResult rounding;
};

/// Rounds the body, then telescopes in the rounded frame: a ladder of
/// centered balls r' = rho_0 < rho_1 < ... < rho_k = R' around the working
/// body, each volume ratio estimated as the inverse hit fraction of uniform
/// samples of the larger body landing in the smaller ball (one radius
/// comparison per sample).
VolumeEstimate volume_telescoping(const Polytope& poly, const RoundingConfig& cfg,
                                  std::int64_t samples_per_ratio, Pcg64& rng);

}  // namespace polywalk
