#include "polywalk/volume.hpp"

#include <cmath>
#include <stdexcept>

#include "polywalk/walks.hpp"

namespace polywalk {

double ball_log_volume(int n, double radius) {
  if (n < 1 || !(radius > 0.0)) throw std::invalid_argument("ball_log_volume: bad input");
  const double dn = static_cast<double>(n);
  return dn / 2.0 * std::log(M_PI) - std::lgamma(dn / 2.0 + 1.0) + dn * std::log(radius);
}

double ball_volume(int n, double radius) { return std::exp(ball_log_volume(n, radius)); }

double volume_rescale(double vol_rounded, const AffineMap& map, double scale) {
  if (!(vol_rounded > 0.0)) throw std::invalid_argument("volume_rescale: volume must be > 0");
  if (!(scale > 0.0)) throw std::invalid_argument("volume_rescale: scale must be > 0");
  return std::exp(std::log(vol_rounded) + map.log_det_factor - map.dim() * std::log(scale));
}

VolumeEstimate volume_telescoping(const Polytope& poly, const RoundingConfig& cfg,
                                  std::int64_t samples_per_ratio, Pcg64& rng) {
  if (samples_per_ratio < 1) throw std::invalid_argument("volume_telescoping: need samples");
  const int n = poly.dim();
  const double dn = static_cast<double>(n);

  VolumeEstimate est;
  est.rounding = round_bounded(poly, cfg, rng.substream(0));
  if (!est.rounding.succeeded) return est;
  const AffineMap& map = est.rounding.map;

  const Polytope working = apply_affine(poly, map);
  // Inner radius of the working body at the origin, through the polytope
  // faces and (when the input body is capped) the image of its cap.
  double r_inner = (working.slacks(Vector::Zero(n)).array() / working.row_norms().array())
                       .minCoeff();
  EllipsoidCap input_cap;
  const bool has_input_cap = poly.rho().has_value();
  if (has_input_cap) {
    input_cap = EllipsoidCap{map.sigma_factor, map.mu, *poly.rho()};
    r_inner = std::min(r_inner, (*poly.rho() - map.mu.norm()) / map.sigma_max());
  }
  if (!(r_inner > 0.0)) {
    est.rounding.failure_reason = "volume_telescoping: origin not interior after rounding";
    est.succeeded = false;
    return est;
  }
  const double r_outer = std::max(r_inner, cfg.R / map.sigma_min());

  const auto rungs = static_cast<std::int64_t>(std::ceil(dn * std::log2(r_outer / r_inner)));
  double log_vol = ball_log_volume(n, r_inner);
  double var_log = 0.0;
  est.reliable = true;

  Vector x = sample_centered_ball(n, r_inner * (1.0 - std::pow(dn, -3.0)), rng.substream(1));
  const double factor = rungs > 0 ? std::pow(r_outer / r_inner, 1.0 / rungs) : 1.0;
  double rho_prev = r_inner;
  WalkHooks hooks;
  if (has_input_cap) hooks.cap = &input_cap;

  for (std::int64_t k = 1; k <= rungs; ++k) {
    const double rho_k = k == rungs ? r_outer : r_inner * std::pow(factor, k);
    const Polytope body = working.with_rho(rho_k);
    BatchResult batch = sample_uniform_batch(body, x, cfg.walk, samples_per_ratio,
                                             rng.substream(1 + k), hooks);
    est.rounding.stats.merge(batch.stats);
    if (batch.status == WalkStatus::kHitIMax ||
        batch.samples.size() != static_cast<std::size_t>(samples_per_ratio)) {
      est.rounding.failure_reason = "volume_telescoping: rung sampling hit i_max";
      est.succeeded = false;
      return est;
    }
    std::int64_t hits = 0;
    for (const Vector& z : batch.samples) {
      if (z.norm() <= rho_prev) ++hits;
    }
    if (hits == 0) {
      est.rounding.failure_reason = "volume_telescoping: empty hit count on a rung";
      est.reliable = false;
      est.succeeded = false;
      return est;
    }
    const double fraction = static_cast<double>(hits) / static_cast<double>(samples_per_ratio);
    const double ratio = 1.0 / fraction;
    est.ratios.push_back(ratio);
    const double ratio_var = (1.0 - fraction) / (fraction * static_cast<double>(samples_per_ratio));
    const double ratio_se = ratio * std::sqrt(ratio_var);
    if (ratio < 1.0 - 3.0 * ratio_se || ratio > M_E * 1.2) est.reliable = false;
    log_vol += std::log(ratio);
    var_log += ratio_var;

    // The last accepted sample of this rung is uniform on the rung body and
    // interior almost surely; it warm-starts the next rung.
    const Vector& candidate = batch.samples.back();
    if (body.distance_to_boundary(candidate) > 0.0 &&
        (!has_input_cap || input_cap.boundary_distance_lb(candidate, map.sigma_max()) > 0.0)) {
      x = candidate;
    }
    rho_prev = rho_k;
  }

  est.log_volume = log_vol + map.log_det_factor;
  est.volume = std::exp(est.log_volume);
  est.rel_error = std::sqrt(var_log);
  est.succeeded = true;
  return est;
}

}  // namespace polywalk
