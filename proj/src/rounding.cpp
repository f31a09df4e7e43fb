#include "polywalk/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace polywalk {

namespace {

// Symmetric PSD square root and inverse square root via eigendecomposition.
// Fails (returns false) when the spectrum spans more than twelve orders of
// magnitude: with p >= n+1 samples a singular covariance is an error signal.
bool symmetric_sqrt(const Matrix& sigma, Matrix& sqrt_out, Matrix& inv_sqrt_out,
                    double& half_log_det) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  if (es.info() != Eigen::Success) return false;
  const Vector& eig = es.eigenvalues();
  const double floor = 1e-12 * eig(eig.size() - 1);
  if (!(eig(0) > floor) || !(floor > 0.0)) return false;
  Vector root = eig.cwiseSqrt();
  sqrt_out = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  inv_sqrt_out =
      es.eigenvectors() * root.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  half_log_det = 0.5 * eig.array().log().sum();
  return true;
}

RoundingResult fail_result(RoundingResult base, std::string reason) {
  base.succeeded = false;
  base.failure_reason = std::move(reason);
  return base;
}

}  // namespace

Moments estimate_moments(const std::vector<Vector>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("estimate_moments: need p >= 2");
  const int n = static_cast<int>(samples.front().size());
  Moments mom;
  mom.mu = Vector::Zero(n);
  for (const Vector& z : samples) mom.mu += z;
  mom.mu /= static_cast<double>(samples.size());
  mom.sigma = Matrix::Zero(n, n);
  for (const Vector& z : samples) {
    const Vector d = z - mom.mu;
    mom.sigma.selfadjointView<Eigen::Lower>().rankUpdate(d, 1.0);
  }
  mom.sigma /= static_cast<double>(samples.size());
  mom.sigma = Matrix(mom.sigma.selfadjointView<Eigen::Lower>());
  return mom;
}

Vector initial_interior_point(int n, Pcg64& rng) {
  if (n < 1) throw std::invalid_argument("initial_interior_point: n >= 1");
  const double margin = 1.0 - std::pow(static_cast<double>(n), -3.0);
  Vector v(n);
  do {
    sample_unit_ball_into(rng, v);
  } while (v.norm() > margin);
  return v;
}

Vector reexpress_point(const AffineMap& current, const AffineMap& next, const Vector& y) {
  return next.to_working(current.to_original(y));
}

double rounding_walk_eta(int n) { return 0.5 / std::sqrt(static_cast<double>(n)); }

double rounding_cap_radius(int n, std::int64_t p, double eps, int cap_log_exponent) {
  const double dn = static_cast<double>(n);
  return 20.0 * std::sqrt(dn) *
         std::log(40.0 * dn * dn * std::pow(static_cast<double>(p), cap_log_exponent) / eps);
}

WarmStartResult warm_start(const Polytope& poly, const AffineMap& current,
                           const AffineMap& next, const Vector& x0, double rho_prime,
                           double rho_cap, const WalkConfig& walk, Pcg64& rng,
                           WalkStats* aggregate) {
  const int n = poly.dim();
  const double margin = std::pow(static_cast<double>(n), -3.0);

  const Polytope working = apply_affine(poly, current).with_rho(rho_cap);
  const EllipsoidCap cap_current{current.sigma_factor, current.mu, rho_prime};
  const Polytope next_body = apply_affine(poly, next).with_rho(rho_cap);
  const EllipsoidCap cap_next{next.sigma_factor, next.mu, rho_prime};
  const double next_sigma_max = next.sigma_max();

  WalkHooks hooks;
  hooks.cap = &cap_current;

  WarmStartResult out;
  for (int attempt = 0; attempt < 64; ++attempt) {
    BatchResult one = sample_uniform_batch(working, x0, walk, 1, rng, hooks);
    if (aggregate) aggregate->merge(one.stats);
    if (one.status == WalkStatus::kHitIMax || one.samples.empty()) {
      out.error = "warm_start: inner walk exhausted its step budget";
      return out;
    }
    const Vector y_next = reexpress_point(current, next, one.samples.front());
    double dist = next_body.distance_to_boundary(y_next);
    dist = std::min(dist, cap_next.boundary_distance_lb(y_next, next_sigma_max));
    if (dist >= margin) {
      out.point = y_next;
      out.ok = true;
      return out;
    }
  }
  out.error = "warm_start: no interior point in 64 tries (mis-rounded frame?)";
  return out;
}

RoundingResult round_polytope(const Polytope& poly, const RoundingConfig& cfg, Pcg64& rng) {
  const int n = poly.dim();
  if (!(cfg.r > 0.0) || !(cfg.R >= cfg.r)) {
    throw std::invalid_argument("round_polytope: need 0 < r <= R");
  }
  if (cfg.p < n + 1) throw std::invalid_argument("round_polytope: need p >= n+1");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) {
    throw std::invalid_argument("round_polytope: eps in (0,1)");
  }

  const double dn = static_cast<double>(n);
  const std::int64_t i_star =
      static_cast<std::int64_t>(std::ceil(dn * std::log2(cfg.R / cfg.r)));
  const double rho_cap = rounding_cap_radius(n, cfg.p, cfg.eps, cfg.cap_log_exponent);

  RoundingResult result;
  result.stats.per_constraint_checks.assign(poly.num_constraints(), 0);
  // rB normalized to identity covariance: a ball of radius sqrt(n+2) has
  // covariance I, which is what the isotropy induction starts from.
  result.map = AffineMap::scaling(cfg.r / std::sqrt(dn + 2.0), n);
  result.warm_point = std::sqrt(dn + 2.0) * initial_interior_point(n, rng.substream(0));

  if (i_star > 1 && !(cfg.checks_cap > 0.0)) {
    return fail_result(std::move(result), "checks budget exhausted before start");
  }

  const int m = poly.num_constraints();
  for (std::int64_t i = 1; i < i_star; ++i) {
    const double rho_prime = cfg.r * std::pow(1.0 + 1.0 / dn, static_cast<double>(i));
    const Polytope working = apply_affine(poly, result.map).with_rho(rho_cap);
    const bool ball_active = rho_prime < cfg.R;
    const EllipsoidCap cap{result.map.sigma_factor, result.map.mu, rho_prime};
    WalkHooks hooks;
    if (ball_active) hooks.cap = &cap;

    if (cfg.observer) {
      RoundingIterationInfo info;
      info.iteration = static_cast<int>(i);
      info.working = &working;
      info.map = &result.map;
      info.rho_prime = rho_prime;
      info.rho_cap = rho_cap;
      info.x0 = &result.warm_point;
      cfg.observer(info);
    }

    Pcg64 iter_rng = rng.substream(static_cast<std::uint64_t>(i));
    Pcg64 batch_rng = iter_rng.substream(0);
    BatchResult batch =
        sample_uniform_batch(working, result.warm_point, cfg.walk, cfg.p, batch_rng, hooks);
    result.stats.merge(batch.stats);
    result.checks_used = result.stats.inequality_checks_total(m);
    if (batch.status == WalkStatus::kHitIMax) {
      return fail_result(std::move(result), "inner walk hit i_max");
    }
    if (static_cast<double>(result.checks_used) > cfg.checks_cap) {
      return fail_result(std::move(result), "checks budget exhausted");
    }

    const Moments mom = estimate_moments(batch.samples);
    Matrix c_sqrt, c_inv_sqrt;
    double half_log_det = 0.0;
    if (!symmetric_sqrt(mom.sigma, c_sqrt, c_inv_sqrt, half_log_det)) {
      return fail_result(std::move(result), "singular sample covariance");
    }

    AffineMap next;
    next.sigma_factor = result.map.sigma_factor * c_sqrt;
    next.sigma_inv_factor = c_inv_sqrt * result.map.sigma_inv_factor;
    next.mu = result.map.mu + result.map.sigma_factor * mom.mu;
    next.log_det_factor = result.map.log_det_factor + half_log_det;

    Pcg64 warm_rng = iter_rng.substream(1);
    WarmStartResult warm = warm_start(poly, result.map, next, result.warm_point, rho_prime,
                                      rho_cap, cfg.walk, warm_rng, &result.stats);
    result.checks_used = result.stats.inequality_checks_total(m);
    if (!warm.ok) return fail_result(std::move(result), warm.error);
    if (static_cast<double>(result.checks_used) > cfg.checks_cap) {
      return fail_result(std::move(result), "checks budget exhausted");
    }

    result.warm_point = warm.point;
    result.map = next;
    result.iterations_completed = i;
  }

  result.succeeded = true;
  return result;
}

RoundingResult round_bounded(const Polytope& poly, const RoundingConfig& cfg, Pcg64& rng) {
  RoundingResult last;
  WalkStats across_attempts;
  across_attempts.per_constraint_checks.assign(poly.num_constraints(), 0);
  const int attempts = std::max(cfg.attempts_max, 1);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Pcg64 attempt_rng = rng.substream(static_cast<std::uint64_t>(attempt));
    last = round_polytope(poly, cfg, attempt_rng);
    across_attempts.merge(last.stats);
    if (last.succeeded) {
      last.stats = across_attempts;
      last.checks_used = across_attempts.inequality_checks_total(poly.num_constraints());
      return last;
    }
  }
  last.stats = across_attempts;
  last.checks_used = across_attempts.inequality_checks_total(poly.num_constraints());
  return last;
}

}  // namespace polywalk
