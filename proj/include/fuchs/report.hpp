#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fuchs {

enum class Relation {
  approx,  // |lhs - rhs| <= tol * max(1, |rhs|)
  le,      // lhs <= rhs + tol * max(1, |rhs|)
  exact,   // lhs == rhs
};

struct CheckResult {
  std::string check;
  std::string anchor;  // the identity or inequality being tested, as a formula
  nlohmann::json params = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::approx;
  double tol = 0.0;
  bool pass = false;
  std::optional<double> runtime_ms;
  std::string note;
};

CheckResult make_check(std::string check, std::string anchor, double lhs, double rhs, Relation relation, double tol);

class Report {
 public:
  void add(CheckResult r) { checks_.push_back(std::move(r)); }
  const std::vector<CheckResult>& checks() const { return checks_; }
  bool all_pass() const;
  std::size_t failures() const;

  nlohmann::json to_json(bool with_timing) const;
  std::string to_csv(bool with_timing) const;

 private:
  std::vector<CheckResult> checks_;
};

std::string relation_name(Relation r);

}  // namespace fuchs
