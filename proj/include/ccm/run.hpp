#pragma once

#include <string>

#include <json.hpp>

#include "ccm/specfile.hpp"

namespace ccm {

inline constexpr const char* kVersion = "0.1.0";

struct RunRequest {
  std::string command;
  SpecFile spec;
  std::string out_path;        // empty = stdout
  std::string format = "json"; // json | csv
  i64 cap = 10000;             // quotient-order cap
};

struct RunReport {
  std::string command;
  nlohmann::json result;
  double wall_ms = 0.0;
  std::string version = kVersion;
};

// Converts a finite group of any class to an equivalent finite Cayley group.
GroupPtr to_finite_cayley(const GroupPtr& g);

RunReport dispatch(const RunRequest& req);

// Deterministic byte output; the timing field is the only volatile part.
std::string emit(const RunReport& report, const std::string& format);

}  // namespace ccm
