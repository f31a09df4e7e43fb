#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "polywalk/diagnostics.hpp"
#include "polywalk/polytope.hpp"
#include "polywalk/rounding.hpp"
#include "polywalk/volume.hpp"
#include "polywalk/walks.hpp"

namespace polywalk {

// Polytope file format: {"n": int, "m": int, "A": [[...]] row-major,
// "b": [...], "rho": number|null}.
nlohmann::json polytope_to_json(const Polytope& poly);
Polytope polytope_from_json(const nlohmann::json& j);
void save_polytope(const std::string& path, const Polytope& poly);
Polytope load_polytope(const std::string& path);

// CSV sample format: header "x1,...,xn", one sample per line, 17
// significant digits.
void write_samples_csv(std::ostream& out, const std::vector<Vector>& samples);
nlohmann::json samples_to_json(const std::vector<Vector>& samples);

nlohmann::json stats_to_json(const WalkStats& stats);
nlohmann::json rounding_result_to_json(const RoundingResult& result);
nlohmann::json volume_to_json(const VolumeEstimate& est);
nlohmann::json isotropy_to_json(const IsotropyReport& rep);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace polywalk
