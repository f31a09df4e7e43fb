#pragma once

#include <cstdint>
#include <vector>

#include "polywalk/exact_samplers.hpp"
#include "polywalk/polytope.hpp"
#include "polywalk/walks.hpp"

namespace polywalk {

/// a-isotropic grading of a covariance/mean pair: eigenvalues must lie in
/// [1/a^2, a^2] and the mean norm must be at most a/10.
struct IsotropyReport {
  double eig_min = 0.0;
  double eig_max = 0.0;
  double mean_norm = 0.0;
  double grade_a = 0.0;  // max(sqrt(eig_max), 1/sqrt(eig_min), 10 * mean_norm)
};

IsotropyReport isotropy_report(const Matrix& sigma, const Vector& mu);

struct AntiConcentrationReport {
  double p_hat = 0.0;
  double std_error = 0.0;  // binomial
  double eps_hat = 0.0;
  std::int64_t trials = 0;
  bool bound_ok = false;  // p_hat <= 2 eps_hat + 3 sigma
};

/// Monte Carlo estimate of P(dist(X, H) <= eps_hat) for X from an exact
/// sampler of a 1-isotropic body and H = {x : normal . x = offset} with a
/// unit normal.
AntiConcentrationReport anti_concentration_probe(const ExactSampler& sampler,
                                                 const Vector& unit_normal, double offset,
                                                 double eps_hat, std::int64_t trials,
                                                 Pcg64& rng);

struct FrequencyReport {
  std::vector<double> frequency;  // F_j = N_j / N
  double mean_frequency = 0.0;
  double bound = 0.0;  // 16 gamma beta / n + 32 (gamma/n) beta ln(n/gamma) + beta eps_hat / N
  double gamma = 0.0;
  bool bound_vacuous = false;  // bound >= 1, satisfied by any frequency
  std::vector<int> violations;  // j with F_j > bound
};

/// Per-constraint check frequencies from a lazy-mode run against the
/// expected-frequency bound. beta is the warm-start assumption; eps_hat
/// defaults to the failure budget implied by alpha and i_max.
FrequencyReport frequency_report(const WalkStats& stats, const WalkConfig& cfg, int n,
                                 double beta = 1.0, double eps_hat = -1.0);

/// Spherical-cap tail 2 exp(-(n-2) t^2 / 2) bounding P(|u . xi/||xi||| >= t).
double step_tail_bound(int n, double t);

struct ConductanceReport {
  double lambda_hat = 0.0;
  double lower_bound = 0.0;  // 1 - eta sqrt(n) / (2 r)
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Fraction of (exact uniform point, ball proposal) pairs staying inside:
/// the average local conductance, to compare with its inradius bound.
ConductanceReport conductance_estimate(const Polytope& poly, double eta, std::int64_t trials,
                                       Pcg64& rng, const ExactSampler& sampler,
                                       double inradius);

struct EquivalenceReport {
  int agree_count = 0;
  int total = 0;
};

/// Runs the lazy and full-scan walks with identical RNG streams per seed and
/// compares the accepted-point trajectories bit-exactly. Requires
/// alpha >= 4 ln(2 m i_max / eps_hat); refuses otherwise.
EquivalenceReport equivalence_check(const Polytope& poly, const Vector& x0,
                                    const WalkConfig& cfg,
                                    const std::vector<std::uint64_t>& seeds, double eps_hat);

}  // namespace polywalk
