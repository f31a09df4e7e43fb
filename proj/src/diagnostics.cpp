#include "polywalk/diagnostics.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace polywalk {

IsotropyReport isotropy_report(const Matrix& sigma, const Vector& mu) {
  const auto n = sigma.rows();
  if (sigma.cols() != n || mu.size() != n) {
    throw std::invalid_argument("isotropy_report: dimension mismatch");
  }
  const double skew_tol = 1e-10 * std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > skew_tol) {
    throw std::invalid_argument("isotropy_report: sigma not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  IsotropyReport rep;
  rep.eig_min = es.eigenvalues()(0);
  rep.eig_max = es.eigenvalues()(n - 1);
  rep.mean_norm = mu.norm();
  if (rep.eig_min <= 0.0) {
    rep.grade_a = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.grade_a = std::max({std::sqrt(rep.eig_max), 1.0 / std::sqrt(rep.eig_min),
                          10.0 * rep.mean_norm});
  return rep;
}

AntiConcentrationReport anti_concentration_probe(const ExactSampler& sampler,
                                                 const Vector& unit_normal, double offset,
                                                 double eps_hat, std::int64_t trials,
                                                 Pcg64& rng) {
  if (trials < 1) throw std::invalid_argument("anti_concentration_probe: trials >= 1");
  if (std::abs(unit_normal.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("anti_concentration_probe: normal must be unit length");
  }
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const Vector x = sampler(rng);
    if (std::abs(unit_normal.dot(x) - offset) <= eps_hat) ++hits;
  }
  AntiConcentrationReport rep;
  rep.trials = trials;
  rep.eps_hat = eps_hat;
  rep.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
  rep.std_error = std::sqrt(rep.p_hat * (1.0 - rep.p_hat) / static_cast<double>(trials));
  rep.bound_ok = rep.p_hat <= 2.0 * eps_hat + 3.0 * rep.std_error;
  return rep;
}

FrequencyReport frequency_report(const WalkStats& stats, const WalkConfig& cfg, int n,
                                 double beta, double eps_hat) {
  if (stats.wall_steps <= 0) throw std::invalid_argument("frequency_report: empty run");
  if (eps_hat < 0.0) {
    // Failure budget implied by alpha = 4 ln(2 i_max / eps_hat).
    eps_hat = std::min(1.0, 2.0 * cfg.i_max * std::exp(-cfg.alpha / 4.0));
  }
  FrequencyReport rep;
  rep.gamma = cfg.gamma(n);
  const double dn = static_cast<double>(n);
  const double wall = static_cast<double>(stats.wall_steps);
  rep.bound = 16.0 * rep.gamma * beta / dn +
              (32.0 * rep.gamma / dn) * beta * std::max(0.0, std::log(dn / rep.gamma)) +
              beta * eps_hat / wall;
  rep.bound_vacuous = rep.bound >= 1.0;
  rep.frequency.resize(stats.per_constraint_checks.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < rep.frequency.size(); ++j) {
    rep.frequency[j] = static_cast<double>(stats.per_constraint_checks[j]) / wall;
    sum += rep.frequency[j];
    if (rep.frequency[j] > rep.bound) rep.violations.push_back(static_cast<int>(j));
  }
  rep.mean_frequency = rep.frequency.empty() ? 0.0 : sum / rep.frequency.size();
  return rep;
}

double step_tail_bound(int n, double t) {
  if (n < 3) throw std::invalid_argument("step_tail_bound: n >= 3");
  if (t < 0.0) throw std::invalid_argument("step_tail_bound: t >= 0");
  return 2.0 * std::exp(-(n - 2) * t * t / 2.0);
}

ConductanceReport conductance_estimate(const Polytope& poly, double eta, std::int64_t trials,
                                       Pcg64& rng, const ExactSampler& sampler,
                                       double inradius) {
  if (trials < 1) throw std::invalid_argument("conductance_estimate: trials >= 1");
  if (!(inradius > 0.0)) throw std::invalid_argument("conductance_estimate: known inradius required");
  const int n = poly.dim();
  Vector xi(n);
  std::int64_t stayed = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const Vector x = sampler(rng);
    sample_unit_ball_into(rng, xi);
    if (body_contains(poly, std::nullopt, nullptr, x + eta * xi)) ++stayed;
  }
  ConductanceReport rep;
  rep.trials = trials;
  rep.lambda_hat = static_cast<double>(stayed) / static_cast<double>(trials);
  rep.lower_bound = 1.0 - eta * std::sqrt(static_cast<double>(n)) / (2.0 * inradius);
  rep.std_error =
      std::sqrt(rep.lambda_hat * (1.0 - rep.lambda_hat) / static_cast<double>(trials));
  return rep;
}

EquivalenceReport equivalence_check(const Polytope& poly, const Vector& x0,
                                    const WalkConfig& cfg,
                                    const std::vector<std::uint64_t>& seeds, double eps_hat) {
  if (!(eps_hat > 0.0 && eps_hat < 1.0)) {
    throw std::invalid_argument("equivalence_check: eps_hat in (0,1)");
  }
  const double required =
      4.0 * std::log(2.0 * poly.num_constraints() * cfg.i_max / eps_hat);
  if (!(cfg.alpha >= required)) {
    throw std::invalid_argument("equivalence_check: alpha below 4 ln(2 m i_max / eps_hat)");
  }
  EquivalenceReport rep;
  rep.total = static_cast<int>(seeds.size());
  std::vector<Vector> traj_lazy, traj_full;
  for (std::uint64_t seed : seeds) {
    traj_lazy.clear();
    traj_full.clear();
    WalkConfig on = cfg;
    on.mode = OracleMode::kLazy;
    on.seed = seed;
    WalkConfig off = cfg;
    off.mode = OracleMode::kFull;
    off.seed = seed;

    Pcg64 rng_on(seed);
    WalkHooks hooks_on;
    hooks_on.trajectory = &traj_lazy;
    ball_walk_run(poly, x0, on, rng_on, hooks_on);

    Pcg64 rng_off(seed);
    WalkHooks hooks_off;
    hooks_off.trajectory = &traj_full;
    ball_walk_run(poly, x0, off, rng_off, hooks_off);

    bool same = traj_lazy.size() == traj_full.size();
    for (std::size_t k = 0; same && k < traj_lazy.size(); ++k) {
      same = std::memcmp(traj_lazy[k].data(), traj_full[k].data(),
                         sizeof(double) * static_cast<std::size_t>(poly.dim())) == 0;
    }
    if (same) ++rep.agree_count;
  }
  return rep;
}

}  // namespace polywalk
