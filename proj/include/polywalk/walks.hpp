#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "polywalk/deadline_ledger.hpp"
#include "polywalk/polytope.hpp"
#include "polywalk/rng.hpp"

namespace polywalk {

enum class OracleMode { kLazy, kFull };  // CLI: on = lazy ledger, off = full scan

struct WalkConfig {
  double eta = 0.0;                      // ball-walk step size
  double alpha = 1.0;                    // slack-budget tolerance
  std::int64_t proper_steps_target = 0;  // proper steps per run
  double i_max = 1e18;                   // cap on proper+improper steps
  OracleMode mode = OracleMode::kLazy;
  std::uint64_t seed = 0;
  std::optional<double> rho;  // extra centered cap, intersected with the body's own
  bool audit = false;         // full membership of every accepted point, post hoc

  double gamma(int n) const;  // alpha * eta * sqrt(n)
};

struct WalkStats {
  std::int64_t proper_steps = 0;
  std::int64_t improper_steps = 0;
  std::int64_t wall_steps = 0;  // proper + improper
  std::vector<std::int64_t> per_constraint_checks;  // N_j; excludes the start scan
  std::int64_t total_checks = 0;                    // sum of N_j
  std::int64_t init_scans = 0;          // full slack scans at walk starts (m rows each)
  std::int64_t rejection_attempts = 0;  // speedy-to-uniform tests (m rows each)
  std::int64_t accepted_samples = 0;
  std::int64_t audit_violations = 0;

  double lambda_hat() const {
    return wall_steps > 0 ? static_cast<double>(proper_steps) / wall_steps : 0.0;
  }
  /// Every inequality evaluation, including start scans and rejection tests.
  std::int64_t inequality_checks_total(int m) const {
    return total_checks + static_cast<std::int64_t>(m) * (init_scans + rejection_attempts);
  }
  void merge(const WalkStats& other);
};

/// Membership cap ||F y + mu|| <= radius. The rounding loop uses it to carry
/// the nested-body ball constraint into the working frame, where it is an
/// ellipsoid rather than a centered ball.
struct EllipsoidCap {
  Matrix F;
  Vector mu;
  double radius = 0.0;

  bool contains(const Vector& y) const { return (F * y + mu).norm() <= radius; }
  /// Lower bound on the Euclidean distance from y to the cap boundary,
  /// via the largest singular value of F.
  double boundary_distance_lb(const Vector& y, double f_sigma_max) const {
    return (radius - (F * y + mu).norm()) / f_sigma_max;
  }
};

struct WalkHooks {
  const EllipsoidCap* cap = nullptr;
  std::vector<Vector>* trajectory = nullptr;  // accepted points, in order
  std::vector<CheckEvent>* events = nullptr;  // ledger recheck log
};

enum class WalkStatus { kOk, kHitIMax, kLeftBody };

struct WalkResult {
  Vector last_point;  // chain position after the final proper step
  WalkStats stats;
  WalkStatus status = WalkStatus::kOk;
};

struct RescaleResult {
  Vector z;
  bool accepted = false;
};

struct BatchResult {
  std::vector<Vector> samples;
  WalkStats stats;
  WalkStatus status = WalkStatus::kOk;
};

struct Chord {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Uniform draw from the unit ball: Gaussian direction, radius U^(1/n).
Vector sample_unit_ball(Pcg64& rng, int n);
void sample_unit_ball_into(Pcg64& rng, Vector& out);

/// True iff x is in {Ax <= b}, inside the body's own rho cap, inside
/// rho_extra, and inside the ellipsoid cap (each when present).
bool body_contains(const Polytope& poly, std::optional<double> rho_extra,
                   const EllipsoidCap* cap, const Vector& x);

/// Ball walk X <- X + eta * xi when the proposal passes membership, else
/// stay put; runs until proper_steps_target acceptances or the step cap.
/// Lazy mode asks the ledger which constraints are due each step and checks
/// only those, at the proposal; the centered caps are checked every step.
WalkResult ball_walk_run(const Polytope& poly, const Vector& x0, const WalkConfig& cfg,
                         Pcg64& rng, const WalkHooks& hooks = {});

/// Speedy-to-uniform rejection: Z = (2n / (2n-1)) * Y, accepted iff Z is in
/// the body (one full membership scan).
RescaleResult speedy_to_uniform(const Vector& y, const Polytope& poly,
                                std::optional<double> rho_extra = std::nullopt,
                                const EllipsoidCap* cap = nullptr);

/// Repeats {restart at x0 on a fresh RNG substream, run the walk, rescale,
/// rejection-test} until p samples are accepted or the cumulative step
/// budget runs out. With threads > 1 restarts run in parallel; the output
/// is bit-identical to the serial schedule.
BatchResult sample_uniform_batch(const Polytope& poly, const Vector& x0, const WalkConfig& cfg,
                                 std::int64_t p, Pcg64& rng, const WalkHooks& hooks = {},
                                 int threads = 1);

/// Chord {t : x + t u in body} via all m slack/direction ratios plus the
/// rho cap. Throws when the chord is empty or unbounded.
Chord hit_and_run_chord(const Polytope& poly, const Vector& x, const Vector& u);

/// One hit-and-run step: uniform direction, uniform point on the chord.
/// Costs m dot products per step; this is the full-scan baseline.
Vector hit_and_run_step(const Polytope& poly, const Vector& x, Pcg64& rng);

enum class ParamMode { kPaper, kPractical };

struct ParamKnobs {
  double c = 1.0;   // universal constant of the sample-count bound
  double c2 = 1.0;  // universal constant of the mixing bound
  int cap_log_exponent = 2;  // exponent of p inside the sampling-cap log
};

struct ParamSet {
  WalkConfig walk;
  std::int64_t p = 0;  // samples per rounding iteration (paper mode only)
  double checks_cap = std::numeric_limits<double>::infinity();
  double gamma = 0.0;
  double rho_cap = 0.0;  // working-frame sampling cap for the rounding loop
};

/// Paper mode evaluates the published parameter schedule (eta, alpha, the
/// proper-step count, the step and check caps) for given n, m, eps, R/r.
/// Practical mode scales the same shapes down to desk-size runs:
/// eta = 1/(30 sqrt(n ln n)), alpha = 4 ln(2 m 1e8), caller-chosen proper
/// steps, i_max = 100 * proper steps.
ParamSet default_parameters(int n, int m, double eps, double R_over_r, ParamMode mode,
                            std::int64_t practical_proper_steps = 0, ParamKnobs knobs = {});

}  // namespace polywalk
