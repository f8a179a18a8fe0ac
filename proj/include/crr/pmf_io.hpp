#pragma once

// JSON pmf documents:
//   {"variables":[{"name":"S","symbols":["0","1"]},...],
//    "mass":[{"index":["0","0","0"],"p":"7/20"},...]}
// Omitted cells are zero. "p" may be a JSON number, a decimal string or a
// rational "a/b".
//
// An optional "distortion" member describes d(s, s_hat) for the variable S:
//   {"source":"S","recon":["0","1"],"values":[[0,1],[1,0]],"dbar":1}
// When absent, Hamming distortion on S is assumed.

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "crr/probability.hpp"

namespace crr {

/// Parses "0.35", "1e-3" or "7/20" into a double. Throws ParseError.
double parse_mass_literal(std::string_view text);

JointPmf pmf_from_json(const nlohmann::json &doc);
nlohmann::ordered_json pmf_to_json(const JointPmf &p);

/// Distortion for `source` from doc["distortion"], or nullopt if absent.
std::optional<DistortionMeasure>
distortion_from_json(const nlohmann::json &doc, const Alphabet &source);

nlohmann::json read_json_file(const std::filesystem::path &path);

} // namespace crr
