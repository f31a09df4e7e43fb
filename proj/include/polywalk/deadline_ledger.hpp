#pragma once

#include <cstdint>
#include <vector>

#include "polywalk/polytope.hpp"

namespace polywalk {

/// One recheck of constraint `constraint` at walk step `step`, observing
/// `slack` and rescheduling `wait` steps ahead.
struct CheckEvent {
  std::int64_t step = 0;
  int constraint = 0;
  double slack = 0.0;
  std::int64_t wait = 0;
};

struct RecheckResult {
  double slack = 0.0;
  bool violated = false;
  std::int64_t wait = 0;
};

/// Per-constraint recheck schedule: every constraint sits in exactly one
/// bucket of a circular array, one bucket per future step, and a pointer
/// advances one bucket per walk step. A constraint checked with Euclidean
/// margin d is next due after max(floor(d * sqrt(n) / (alpha * eta)), 1)
/// steps, so a step only pays for the constraints that are actually due.
class DeadlineLedger {
 public:
  /// Computes all m slacks at x0 (the one full scan a walk pays at start)
  /// and schedules every constraint. Throws if x0 is not strictly interior
  /// to {Ax <= b} (some slack <= 0).
  DeadlineLedger(const Polytope& poly, const Vector& x0, double alpha, double eta,
                 std::optional<double> diameter_hint = std::nullopt);

  /// Called exactly once per ball-walk step; O(1).
  void advance();

  std::int64_t step() const { return step_; }

  /// Pops and returns the constraints whose deadline is the current step.
  /// `step` must equal step(). The returned reference is invalidated by the
  /// next call.
  const std::vector<int>& due_constraints(std::int64_t step);

  /// Recomputes the slack of j at x (one dot product, N_j incremented) and
  /// reschedules: wait 1 when violated (the constraint stays hot while the
  /// proposal gets rejected), otherwise the slack-proportional wait.
  RecheckResult recheck_and_reschedule(const Polytope& poly, int j, const Vector& x,
                                       std::int64_t step);

  double budget_per_step() const { return budget_; }  // alpha * eta / sqrt(n)
  std::int64_t capacity() const { return static_cast<std::int64_t>(bucket_head_.size()); }
  std::int64_t total_steps() const { return step_; }
  std::int64_t total_checks() const { return total_checks_; }
  const std::vector<std::int64_t>& checks_per_constraint() const { return n_checks_; }
  std::int64_t deadline_of(int j) const { return deadline_[j]; }

  /// Number of constraints currently scheduled; equals m at all times.
  std::int64_t bucket_population() const;

  void set_event_sink(std::vector<CheckEvent>* sink) { events_ = sink; }

 private:
  void schedule(int j, std::int64_t wait);
  std::int64_t wait_for_slack(int j, double slack) const;

  std::vector<std::int32_t> bucket_head_;  // -1 = empty; else head constraint
  std::vector<std::int32_t> next_;         // intrusive per-bucket list
  std::vector<std::int64_t> deadline_;
  std::vector<std::int64_t> n_checks_;
  std::vector<double> wait_scale_;  // sqrt(n) / (alpha * eta * ||A_j||)
  std::vector<int> due_buffer_;
  std::vector<CheckEvent>* events_ = nullptr;
  std::int64_t pointer_ = 0;
  std::int64_t step_ = 0;
  std::int64_t total_checks_ = 0;
  double budget_ = 0.0;
};

}  // namespace polywalk
