#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "subnls/minimizer.hpp"
#include "subnls/orlicz.hpp"

namespace subnls {

enum class OutputFormat { Json, Csv, Both };
OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

struct OrliczConfig {
  NFamily family = NFamily::LogMatched;
  double alpha = 1.0;
  double p = 4.0;
  double q = 2.0;

  NFunction make() const;
};

/// Parsed run file. The schema is documented in docs/config_schema.md.
struct RunConfig {
  SolveConfig solve;
  std::vector<std::uint64_t> seeds{0};  // one continuation per seed; 0 is the deterministic start
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::Both;
  std::optional<OrliczConfig> orlicz;
};

/// Strict INI parsing: unknown sections or keys, missing required keys and
/// malformed values all throw ConfigError naming the offending key.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form of the physics-relevant settings (output block excluded).
nlohmann::json canonical(const RunConfig& cfg);
/// 16 hex digits of the FNV-1a hash of canonical(cfg).dump().
std::string config_digest(const RunConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

}  // namespace subnls
