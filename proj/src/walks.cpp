#include "polywalk/walks.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

namespace polywalk {

namespace {

double clamped_log(double v) { return std::log(std::max(v, M_E)); }
double clamped_loglog(double v) { return std::max(std::log(clamped_log(v)), 1.0); }

std::optional<double> effective_rho(const Polytope& poly, const WalkConfig& cfg) {
  if (poly.rho() && cfg.rho) return std::min(*poly.rho(), *cfg.rho);
  if (poly.rho()) return poly.rho();
  return cfg.rho;
}

void require_strict_interior(const Polytope& poly, const Vector& x0,
                             std::optional<double> rho_eff, const EllipsoidCap* cap) {
  if (rho_eff && !(x0.norm() < *rho_eff)) {
    throw std::invalid_argument("ball_walk_run: x0 not strictly inside the rho cap");
  }
  if (cap && !((cap->F * x0 + cap->mu).norm() < cap->radius)) {
    throw std::invalid_argument("ball_walk_run: x0 not strictly inside the ellipsoid cap");
  }
}

}  // namespace

double WalkConfig::gamma(int n) const { return alpha * eta * std::sqrt(static_cast<double>(n)); }

void WalkStats::merge(const WalkStats& other) {
  proper_steps += other.proper_steps;
  improper_steps += other.improper_steps;
  wall_steps += other.wall_steps;
  total_checks += other.total_checks;
  init_scans += other.init_scans;
  rejection_attempts += other.rejection_attempts;
  accepted_samples += other.accepted_samples;
  audit_violations += other.audit_violations;
  if (per_constraint_checks.size() < other.per_constraint_checks.size()) {
    per_constraint_checks.resize(other.per_constraint_checks.size(), 0);
  }
  for (std::size_t j = 0; j < other.per_constraint_checks.size(); ++j) {
    per_constraint_checks[j] += other.per_constraint_checks[j];
  }
}

Vector sample_unit_ball(Pcg64& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_unit_ball: n >= 1");
  Vector v(n);
  sample_unit_ball_into(rng, v);
  return v;
}

void sample_unit_ball_into(Pcg64& rng, Vector& out) {
  const int n = static_cast<int>(out.size());
  double norm2 = 0.0;
  do {
    for (int i = 0; i < n; ++i) out(i) = rng.normal();
    norm2 = out.squaredNorm();
  } while (norm2 == 0.0);
  const double radius = std::pow(rng.uniform(), 1.0 / n);
  out *= radius / std::sqrt(norm2);
}

bool body_contains(const Polytope& poly, std::optional<double> rho_extra,
                   const EllipsoidCap* cap, const Vector& x) {
  if (rho_extra && x.norm() > *rho_extra) return false;
  if (cap && !cap->contains(x)) return false;
  return poly.membership(x).inside;
}

WalkResult ball_walk_run(const Polytope& poly, const Vector& x0, const WalkConfig& cfg,
                         Pcg64& rng, const WalkHooks& hooks) {
  const int n = poly.dim();
  const int m = poly.num_constraints();
  if (x0.size() != n) throw std::invalid_argument("ball_walk_run: x0 dimension mismatch");
  if (!(cfg.eta >= 0.0)) throw std::invalid_argument("ball_walk_run: eta must be >= 0");
  if (cfg.proper_steps_target < 0) throw std::invalid_argument("ball_walk_run: bad target");

  const std::optional<double> rho_eff = effective_rho(poly, cfg);
  require_strict_interior(poly, x0, rho_eff, hooks.cap);

  WalkResult result;
  result.stats.per_constraint_checks.assign(m, 0);

  // A zero step size cannot schedule waits; the proposal never moves, so a
  // full scan per step is exact and cheap in that degenerate case.
  std::optional<DeadlineLedger> ledger;
  if (cfg.mode == OracleMode::kLazy && cfg.eta > 0.0) {
    std::optional<double> diameter;
    if (rho_eff) diameter = 2.0 * *rho_eff;
    ledger.emplace(poly, x0, cfg.alpha, cfg.eta, diameter);
    ledger->set_event_sink(hooks.events);
  } else {
    const Vector h = poly.slacks(x0);
    if (!(h.minCoeff() > 0.0)) {
      throw std::invalid_argument("ball_walk_run: x0 not strictly interior");
    }
  }
  result.stats.init_scans = 1;

  Vector x = x0;
  Vector step(n);
  Vector proposal(n);
  while (result.stats.proper_steps < cfg.proper_steps_target) {
    if (static_cast<double>(result.stats.wall_steps) >= cfg.i_max) {
      result.status = WalkStatus::kHitIMax;
      break;
    }
    ++result.stats.wall_steps;
    sample_unit_ball_into(rng, step);
    proposal.noalias() = x + cfg.eta * step;

    bool ok = true;
    if (ledger) {
      ledger->advance();
      const auto& due = ledger->due_constraints(ledger->step());
      for (int j : due) {
        const auto rc = ledger->recheck_and_reschedule(poly, j, proposal, ledger->step());
        if (rc.violated) ok = false;
      }
    } else {
      const Vector h = poly.slacks(proposal);
      ok = h.minCoeff() >= 0.0;
    }
    if (ok && rho_eff && proposal.norm() > *rho_eff) ok = false;
    if (ok && hooks.cap && !hooks.cap->contains(proposal)) ok = false;

    if (ok) {
      x.swap(proposal);
      ++result.stats.proper_steps;
      if (hooks.trajectory) hooks.trajectory->push_back(x);
      if (cfg.audit && !body_contains(poly, rho_eff, hooks.cap, x)) {
        ++result.stats.audit_violations;
      }
    } else {
      ++result.stats.improper_steps;
    }
  }

  if (ledger) {
    result.stats.per_constraint_checks = ledger->checks_per_constraint();
    result.stats.total_checks = ledger->total_checks();
  } else {
    for (int j = 0; j < m; ++j) result.stats.per_constraint_checks[j] = result.stats.wall_steps;
    result.stats.total_checks = result.stats.wall_steps * m;
  }
  if (result.status == WalkStatus::kOk && result.stats.audit_violations > 0) {
    result.status = WalkStatus::kLeftBody;
  }
  result.last_point = std::move(x);
  return result;
}

RescaleResult speedy_to_uniform(const Vector& y, const Polytope& poly,
                                std::optional<double> rho_extra, const EllipsoidCap* cap) {
  const double n = static_cast<double>(poly.dim());
  RescaleResult r;
  r.z = (2.0 * n / (2.0 * n - 1.0)) * y;
  r.accepted = body_contains(poly, rho_extra, cap, r.z);
  return r;
}

namespace {

struct RestartOutcome {
  WalkResult run;
  RescaleResult rescale;
};

RestartOutcome run_restart(const Polytope& poly, const Vector& x0, const WalkConfig& cfg,
                           double i_max_local, Pcg64 rng, const WalkHooks& hooks) {
  WalkConfig local = cfg;
  local.i_max = i_max_local;
  RestartOutcome out;
  out.run = ball_walk_run(poly, x0, local, rng, hooks);
  if (out.run.status != WalkStatus::kHitIMax) {
    out.rescale = speedy_to_uniform(out.run.last_point, poly, cfg.rho, hooks.cap);
  }
  return out;
}

// Folds one completed restart into the batch result. Returns false when the
// batch is done (budget exhausted or p samples collected).
bool fold_restart(BatchResult& batch, const RestartOutcome& out, std::int64_t p) {
  batch.stats.merge(out.run.stats);
  if (out.run.status == WalkStatus::kHitIMax) {
    batch.status = WalkStatus::kHitIMax;
    return false;
  }
  if (out.run.status == WalkStatus::kLeftBody) batch.status = WalkStatus::kLeftBody;
  ++batch.stats.rejection_attempts;
  if (out.rescale.accepted) {
    batch.samples.push_back(out.rescale.z);
    ++batch.stats.accepted_samples;
  }
  return batch.samples.size() < static_cast<std::size_t>(p);
}

}  // namespace

BatchResult sample_uniform_batch(const Polytope& poly, const Vector& x0, const WalkConfig& cfg,
                                 std::int64_t p, Pcg64& rng, const WalkHooks& hooks,
                                 int threads) {
  if (p < 0) throw std::invalid_argument("sample_uniform_batch: p >= 0");
  const int m = poly.num_constraints();
  BatchResult batch;
  batch.stats.per_constraint_checks.assign(m, 0);
  if (p == 0) return batch;

  // Recording hooks tie the run order to a single stream.
  if (hooks.trajectory || hooks.events) threads = 1;

  std::uint64_t restart = 0;
  if (threads <= 1) {
    for (;;) {
      const double remaining = cfg.i_max - static_cast<double>(batch.stats.wall_steps);
      if (remaining <= 0.0) {
        batch.status = WalkStatus::kHitIMax;
        break;
      }
      const auto out = run_restart(poly, x0, cfg, remaining, rng.substream(restart), hooks);
      ++restart;
      if (!fold_restart(batch, out, p)) break;
    }
    return batch;
  }

  // Parallel waves. Workers run with the budget as of the wave start; a run
  // that would have been truncated under the serial schedule is re-run with
  // its exact remaining budget, so the output matches the serial one.
  bool done = false;
  while (!done) {
    const double wave_budget = cfg.i_max - static_cast<double>(batch.stats.wall_steps);
    if (wave_budget <= 0.0) {
      batch.status = WalkStatus::kHitIMax;
      break;
    }
    std::vector<std::future<RestartOutcome>> futures;
    futures.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, run_restart, std::cref(poly),
                                   std::cref(x0), std::cref(cfg), wave_budget,
                                   rng.substream(restart + static_cast<std::uint64_t>(t)),
                                   std::cref(hooks)));
    }
    for (int t = 0; t < threads && !done; ++t) {
      RestartOutcome out = futures[static_cast<std::size_t>(t)].get();
      const double serial_budget = cfg.i_max - static_cast<double>(batch.stats.wall_steps);
      if (serial_budget <= 0.0) {
        batch.status = WalkStatus::kHitIMax;
        done = true;
        break;
      }
      if (static_cast<double>(out.run.stats.wall_steps) > serial_budget) {
        out = run_restart(poly, x0, cfg, serial_budget,
                          rng.substream(restart + static_cast<std::uint64_t>(t)), hooks);
      }
      if (!fold_restart(batch, out, p)) done = true;
    }
    restart += static_cast<std::uint64_t>(threads);
  }
  return batch;
}

Chord hit_and_run_chord(const Polytope& poly, const Vector& x, const Vector& u) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const Vector h = poly.slacks(x);
  const Vector a = poly.A() * u;
  double t_lo = -kInf;
  double t_hi = kInf;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (a(j) > 0.0) {
      t_hi = std::min(t_hi, h(j) / a(j));
    } else if (a(j) < 0.0) {
      t_lo = std::max(t_lo, h(j) / a(j));
    } else if (h(j) < 0.0) {
      throw std::runtime_error("hit_and_run_chord: x violates a constraint parallel to u");
    }
  }
  if (poly.rho()) {
    const double rho = *poly.rho();
    const double uu = u.squaredNorm();
    const double xu = x.dot(u);
    const double disc = xu * xu - uu * (x.squaredNorm() - rho * rho);
    if (disc < 0.0 || uu == 0.0) throw std::runtime_error("hit_and_run_chord: empty cap chord");
    const double root = std::sqrt(disc);
    t_lo = std::max(t_lo, (-xu - root) / uu);
    t_hi = std::min(t_hi, (-xu + root) / uu);
  }
  if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) {
    throw std::runtime_error("hit_and_run_chord: unbounded chord (no rho cap?)");
  }
  if (!(t_hi > t_lo)) throw std::runtime_error("hit_and_run_chord: numerically empty chord");
  return {t_lo, t_hi};
}

Vector hit_and_run_step(const Polytope& poly, const Vector& x, Pcg64& rng) {
  const int n = poly.dim();
  Vector u(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) u(i) = rng.normal();
    norm = u.norm();
  } while (norm == 0.0);
  u /= norm;
  const Chord chord = hit_and_run_chord(poly, x, u);
  return x + rng.uniform(chord.t_lo, chord.t_hi) * u;
}

ParamSet default_parameters(int n, int m, double eps, double R_over_r, ParamMode mode,
                            std::int64_t practical_proper_steps, ParamKnobs knobs) {
  if (n < 1 || m < 1) throw std::invalid_argument("default_parameters: need n, m >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("default_parameters: eps in (0,1)");
  if (!(R_over_r >= 1.0)) throw std::invalid_argument("default_parameters: R/r >= 1");

  const double dn = static_cast<double>(n);
  ParamSet set;
  set.walk.mode = OracleMode::kLazy;

  if (mode == ParamMode::kPractical) {
    if (practical_proper_steps < 1) {
      throw std::invalid_argument("default_parameters: practical mode needs proper steps");
    }
    set.walk.eta = 1.0 / (30.0 * std::sqrt(dn * clamped_log(dn)));
    set.walk.alpha = 4.0 * std::log(2.0 * m * 1e8);
    set.walk.proper_steps_target = practical_proper_steps;
    set.walk.i_max = 100.0 * static_cast<double>(practical_proper_steps);
    set.gamma = set.walk.gamma(n);
    set.rho_cap = 20.0 * std::sqrt(dn) * std::log(40.0 * dn * dn / eps);
    return set;
  }

  const double ln_n = std::log(std::max(dn, 2.0));
  const double ln_inv_eps = std::log(1.0 / eps);
  const double p_raw = knobs.c * dn * ln_inv_eps * ln_inv_eps * ln_n * ln_n;
  const std::int64_t p = std::max<std::int64_t>(n + 1, static_cast<std::int64_t>(std::ceil(p_raw)));
  const double dp = static_cast<double>(p);

  const double eta = 1.0 / (30.0 * std::sqrt(dn * clamped_log(dn / eps)));
  const double eta_hat = eta * std::sqrt(dn) / 10.0;
  const double rho_bar = 20.0 * std::sqrt(dn) * std::log(40.0 * dn * dn * dp * dp / eps);
  const double ln3 = std::pow(clamped_log(dn * dp * dp / eps), 3.0);
  const double proper =
      knobs.c2 * dn * dn * rho_bar * clamped_loglog(rho_bar) * ln3 * clamped_loglog(R_over_r);
  const double i_star = std::ceil(dn * std::log2(std::max(R_over_r, 1.0)));

  // The published step cap is independent of alpha, so alpha follows from it
  // in one pass.
  const double bracket_imax = (16.0 / dn) * (20.0 * m * eta_hat / eps) +
                              (640.0 * m * eta_hat / (dn * eps)) *
                                  std::max(0.0, std::log(dn * eps / (20.0 * m * eta_hat))) +
                              eps / (dn * dp);
  const double base = 2000.0 * (2.0 + dp) * std::max(i_star, 1.0) * proper * m;
  const double i_max = std::pow(base * bracket_imax, 2.0);
  const double alpha = 4.0 * std::log(2.0 * dn * dp * std::max(i_max, 1.0) / eps);
  const double gamma = alpha * eta * std::sqrt(dn);
  const double bracket_checks = 16.0 * gamma / dn +
                                (32.0 * gamma / dn) * std::max(0.0, std::log(dn / gamma)) +
                                6.0 * eps / (dn * dp);

  set.walk.eta = eta;
  set.walk.alpha = alpha;
  set.walk.proper_steps_target =
      static_cast<std::int64_t>(std::min(std::ceil(proper), 9.0e18));
  set.walk.i_max = i_max;
  set.p = p;
  set.gamma = gamma;
  set.checks_cap = base * bracket_checks;
  set.rho_cap = 20.0 * std::sqrt(dn) *
                std::log(40.0 * dn * dn * std::pow(dp, knobs.cap_log_exponent) / eps);
  return set;
}

}  // namespace polywalk
