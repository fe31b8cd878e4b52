#include "hardy/report.hpp"

#include <cmath>

namespace hardy {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::eq: return "eq";
    case Relation::ge: return "ge";
    case Relation::le: return "le";
  }
  return "eq";
}

void VerificationReport::evaluate() {
  abs_err = std::abs(lhs - rhs);
  rel_err = rhs != 0.0 ? abs_err / std::abs(rhs) : abs_err;
  const double sigma = stderr_combined.value_or(0.0);
  const double tol_abs = tolerance * (rhs != 0.0 ? std::abs(rhs) : 1.0);

  if (stderr_combined && max_rel_stderr && sigma > *max_rel_stderr * std::abs(lhs)) {
    pass = false;
    active_criterion = "stderr_cap_exceeded";
    return;
  }
  // Signed shortfall: positive when the relation is violated.
  double shortfall = 0.0;
  switch (relation) {
    case Relation::eq: shortfall = abs_err; break;
    case Relation::ge: shortfall = rhs - lhs; break;
    case Relation::le: shortfall = lhs - rhs; break;
  }
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
    pass = false;
    active_criterion = "non_finite";
  } else if (shortfall <= tol_abs) {
    pass = true;
    active_criterion = relation == Relation::eq ? "rel_tol" : "relation";
  } else if (stderr_combined && shortfall <= k_sigma * sigma) {
    pass = true;
    active_criterion = "k_sigma";
  } else {
    pass = false;
    active_criterion = stderr_combined && k_sigma * sigma > tol_abs ? "k_sigma" : "rel_tol";
  }
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["identity"] = identity_name;
  j["params"] = params;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["abs_err"] = abs_err;
  j["rel_err"] = rel_err;
  j["tolerance"] = tolerance;
  j["relation"] = to_string(relation);
  j["stderr"] = stderr_combined ? nlohmann::json(*stderr_combined) : nlohmann::json(nullptr);
  j["k_sigma"] = k_sigma;
  if (max_rel_stderr) j["max_rel_stderr"] = *max_rel_stderr;
  j["active_criterion"] = active_criterion;
  j["seed"] = seed;
  j["pass"] = pass;
  j["runtime_s"] = runtime_s;
  j["details"] = details;
  return j;
}

}  // namespace hardy
