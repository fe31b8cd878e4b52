#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hardy::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a over the canonical dump with timestamp, report_hash and runtime fields removed.
std::string report_hash(const nlohmann::json& doc);

/// Parses "a,b,c" into doubles; throws ParameterError on junk.
std::vector<double> parse_list(const std::string& text);

}  // namespace hardy::cli
