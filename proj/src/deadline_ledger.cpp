#include "polywalk/deadline_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polywalk {

namespace {
constexpr std::int64_t kMinCapacity = 4;
constexpr std::int64_t kMaxCapacity = std::int64_t{1} << 20;
}  // namespace

DeadlineLedger::DeadlineLedger(const Polytope& poly, const Vector& x0, double alpha,
                               double eta, std::optional<double> diameter_hint) {
  if (!(alpha > 0.0) || !(eta > 0.0)) {
    throw std::invalid_argument("DeadlineLedger: alpha and eta must be positive");
  }
  const int m = poly.num_constraints();
  const int n = poly.dim();
  budget_ = alpha * eta / std::sqrt(static_cast<double>(n));

  const Vector h = poly.slacks(x0);
  for (int j = 0; j < m; ++j) {
    if (!(h(j) > 0.0)) {
      throw std::invalid_argument("DeadlineLedger: x0 not strictly interior, slack " +
                                  std::to_string(h(j)) + " at constraint " + std::to_string(j));
    }
  }

  // Waits are measured in Euclidean distance to the hyperplane, so the
  // budget per step applies uniformly whatever the row norms are.
  wait_scale_.resize(m);
  for (int j = 0; j < m; ++j) wait_scale_[j] = 1.0 / (budget_ * poly.row_norms()(j));

  double diameter = 0.0;
  if (diameter_hint) {
    diameter = *diameter_hint;
  } else if (poly.rho()) {
    diameter = 2.0 * *poly.rho();
  } else {
    // No cap given: size buckets from the starting slacks. Longer waits are
    // clamped to capacity - 1, which only means an early recheck.
    diameter = 2.0 * (h.array() / poly.row_norms().array()).maxCoeff();
  }
  const double want = std::ceil(diameter / budget_) + 2.0;
  const std::int64_t capacity =
      std::clamp(static_cast<std::int64_t>(std::min(want, 1e18)), kMinCapacity, kMaxCapacity);

  bucket_head_.assign(static_cast<std::size_t>(capacity), -1);
  next_.assign(m, -1);
  deadline_.assign(m, 0);
  n_checks_.assign(m, 0);
  for (int j = 0; j < m; ++j) schedule(j, wait_for_slack(j, h(j)));
}

void DeadlineLedger::advance() {
  pointer_ = (pointer_ + 1) % capacity();
  ++step_;
}

const std::vector<int>& DeadlineLedger::due_constraints(std::int64_t step) {
  if (step != step_) {
    throw std::invalid_argument("due_constraints: step " + std::to_string(step) +
                                " is not the ledger's current step " + std::to_string(step_));
  }
  due_buffer_.clear();
  for (std::int32_t j = bucket_head_[static_cast<std::size_t>(pointer_)]; j >= 0; j = next_[j]) {
    due_buffer_.push_back(j);
  }
  bucket_head_[static_cast<std::size_t>(pointer_)] = -1;
  std::sort(due_buffer_.begin(), due_buffer_.end());
  return due_buffer_;
}

RecheckResult DeadlineLedger::recheck_and_reschedule(const Polytope& poly, int j,
                                                     const Vector& x, std::int64_t step) {
  if (step != step_) throw std::invalid_argument("recheck_and_reschedule: stale step index");
  RecheckResult result;
  result.slack = poly.slack(j, x);
  result.violated = result.slack < 0.0;
  result.wait = result.violated ? 1 : wait_for_slack(j, result.slack);
  ++n_checks_[j];
  ++total_checks_;
  schedule(j, result.wait);
  if (events_) events_->push_back({step_, j, result.slack, result.wait});
  return result;
}

std::int64_t DeadlineLedger::bucket_population() const {
  std::int64_t count = 0;
  for (std::int32_t head : bucket_head_) {
    for (std::int32_t j = head; j >= 0; j = next_[j]) ++count;
  }
  return count;
}

void DeadlineLedger::schedule(int j, std::int64_t wait) {
  const std::int64_t slot = (pointer_ + wait) % capacity();
  next_[j] = bucket_head_[static_cast<std::size_t>(slot)];
  bucket_head_[static_cast<std::size_t>(slot)] = static_cast<std::int32_t>(j);
  deadline_[j] = step_ + wait;
}

std::int64_t DeadlineLedger::wait_for_slack(int j, double slack) const {
  const double w = std::floor(slack * wait_scale_[j]);
  const double clamped = std::min(w, static_cast<double>(capacity() - 1));
  return std::max<std::int64_t>(static_cast<std::int64_t>(clamped), 1);
}

}  // namespace polywalk
