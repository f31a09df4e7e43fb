#include "polywalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace polywalk {

using nlohmann::json;

namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json polytope_to_json(const Polytope& poly) {
  json j;
  j["n"] = poly.dim();
  j["m"] = poly.num_constraints();
  json rows = json::array();
  for (int r = 0; r < poly.num_constraints(); ++r) {
    json row = json::array();
    for (int c = 0; c < poly.dim(); ++c) row.push_back(poly.A()(r, c));
    rows.push_back(std::move(row));
  }
  j["A"] = std::move(rows);
  j["b"] = std::vector<double>(poly.b().data(), poly.b().data() + poly.b().size());
  if (poly.rho()) {
    j["rho"] = *poly.rho();
  } else {
    j["rho"] = nullptr;
  }
  return j;
}

Polytope polytope_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const auto& rows = j.at("A");
  if (static_cast<int>(rows.size()) != m) throw std::invalid_argument("polytope json: A has wrong row count");
  RowMajorMatrix A(m, n);
  for (int r = 0; r < m; ++r) {
    const auto& row = rows.at(r);
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("polytope json: ragged A");
    for (int c = 0; c < n; ++c) A(r, c) = row.at(c).get<double>();
  }
  const auto& bj = j.at("b");
  if (static_cast<int>(bj.size()) != m) throw std::invalid_argument("polytope json: b size mismatch");
  Vector b(m);
  for (int r = 0; r < m; ++r) b(r) = bj.at(r).get<double>();
  std::optional<double> rho;
  if (j.contains("rho") && !j.at("rho").is_null()) rho = j.at("rho").get<double>();
  return Polytope(std::move(A), std::move(b), rho);
}

void save_polytope(const std::string& path, const Polytope& poly) {
  write_json_file(path, polytope_to_json(poly));
}

Polytope load_polytope(const std::string& path) {
  return polytope_from_json(read_json_file(path));
}

void write_samples_csv(std::ostream& out, const std::vector<Vector>& samples) {
  if (samples.empty()) {
    out << "\n";
    return;
  }
  const auto n = samples.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << (i ? "," : "") << "x" << (i + 1);
  out << "\n";
  for (const Vector& s : samples) {
    for (Eigen::Index i = 0; i < n; ++i) out << (i ? "," : "") << format_g17(s(i));
    out << "\n";
  }
}

json samples_to_json(const std::vector<Vector>& samples) {
  json arr = json::array();
  for (const Vector& s : samples) {
    arr.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  }
  return arr;
}

json stats_to_json(const WalkStats& stats) {
  json j;
  j["proper"] = stats.proper_steps;
  j["improper"] = stats.improper_steps;
  j["checks_total"] = stats.total_checks;
  j["checks_per_constraint"] = stats.per_constraint_checks;
  j["lambda_hat"] = stats.lambda_hat();
  j["accepted"] = stats.accepted_samples;
  j["rejected"] = stats.rejection_attempts - stats.accepted_samples;
  j["init_scans"] = stats.init_scans;
  j["wall_steps"] = stats.wall_steps;
  return j;
}

json rounding_result_to_json(const RoundingResult& result) {
  json j;
  json rows = json::array();
  const Matrix& f = result.map.sigma_factor;
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(f(r, c));
    rows.push_back(std::move(row));
  }
  j["sigma_factor"] = std::move(rows);
  j["mu"] = std::vector<double>(result.map.mu.data(),
                                result.map.mu.data() + result.map.mu.size());
  j["warm_point"] = std::vector<double>(result.warm_point.data(),
                                        result.warm_point.data() + result.warm_point.size());
  j["iterations"] = result.iterations_completed;
  j["checks_used"] = result.checks_used;
  j["succeeded"] = result.succeeded;
  if (!result.succeeded) j["failure_reason"] = result.failure_reason;
  return j;
}

json volume_to_json(const VolumeEstimate& est) {
  json j;
  j["volume"] = est.volume;
  j["log_volume"] = est.log_volume;
  j["rel_error"] = est.rel_error;
  j["ratios"] = est.ratios;
  j["reliable"] = est.reliable;
  j["succeeded"] = est.succeeded;
  return j;
}

json isotropy_to_json(const IsotropyReport& rep) {
  json j;
  j["eig_min"] = rep.eig_min;
  j["eig_max"] = rep.eig_max;
  j["mean_norm"] = rep.mean_norm;
  j["grade_a"] = rep.grade_a;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace polywalk
