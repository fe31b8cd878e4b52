#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace hardy {

enum class Relation { eq, ge, le };

/// Pass/fail record binding an identity to computed sides and a tolerance.
///
/// Equality: pass iff rel_err <= tolerance or |lhs - rhs| <= k_sigma * stderr.
/// ge / le: pass iff lhs >= rhs (resp. <=) up to the same slack.
/// When `max_rel_stderr` is set, a statistical result whose stderr exceeds
/// that fraction of |lhs| fails regardless, so noise cannot buy a pass.
struct VerificationReport {
  std::string identity_name;
  nlohmann::json params = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  std::optional<double> stderr_combined;
  std::optional<double> max_rel_stderr;
  double k_sigma = 3.0;
  Relation relation = Relation::eq;
  std::string active_criterion;
  std::uint64_t seed = 0;
  bool pass = false;
  double runtime_s = 0.0;
  nlohmann::json details = nlohmann::json::object();

  /// Fills abs_err, rel_err, active_criterion and pass from the other fields.
  void evaluate();
  nlohmann::json to_json() const;
};

/// Wall-clock helper for report runtimes.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

const char* to_string(Relation r);

}  // namespace hardy
