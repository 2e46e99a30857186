#include "fuchs/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuchs {

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string relation_name(Relation r) {
  switch (r) {
    case Relation::approx: return "approx";
    case Relation::le: return "le";
    case Relation::exact: return "exact";
  }
  return "approx";
}

CheckResult make_check(std::string check, std::string anchor, double lhs, double rhs, Relation relation, double tol) {
  CheckResult r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.lhs = lhs;
  r.rhs = rhs;
  r.relation = relation;
  r.tol = tol;
  const double scale = std::isfinite(rhs) ? std::max(1.0, std::abs(rhs)) : 1.0;
  switch (relation) {
    case Relation::approx: r.pass = std::abs(lhs - rhs) <= tol * scale; break;
    case Relation::le: r.pass = (std::isinf(rhs) && rhs > 0) || lhs <= rhs + tol * scale; break;
    case Relation::exact: r.pass = lhs == rhs; break;
  }
  if (std::isnan(lhs) || std::isnan(rhs)) r.pass = false;
  return r;
}

bool Report::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; });
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const CheckResult& c) { return !c.pass; }));
}

nlohmann::json Report::to_json(bool with_timing) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks_) {
    nlohmann::json j;
    j["check"] = c.check;
    j["params"] = c.params;
    j["lhs"] = number(c.lhs);
    j["rhs"] = number(c.rhs);
    j["relation"] = relation_name(c.relation);
    j["tol"] = c.tol;
    j["pass"] = c.pass;
    j["anchor"] = c.anchor;
    if (!c.note.empty()) j["note"] = c.note;
    if (with_timing && c.runtime_ms) j["runtime_ms"] = *c.runtime_ms;
    arr.push_back(std::move(j));
  }
  return {{"checks", arr}, {"passed", checks_.size() - failures()}, {"failed", failures()}};
}

std::string Report::to_csv(bool with_timing) const {
  std::ostringstream os;
  os << "check,params,lhs,rhs,relation,tol,pass,anchor" << (with_timing ? ",runtime_ms" : "") << '\n';
  for (const auto& c : checks_) {
    os << csv_field(c.check) << ',' << csv_field(c.params.dump()) << ',' << csv_number(c.lhs) << ','
       << csv_number(c.rhs) << ',' << relation_name(c.relation) << ',' << csv_number(c.tol) << ','
       << (c.pass ? "true" : "false") << ',' << csv_field(c.anchor);
    if (with_timing) os << ',' << (c.runtime_ms ? csv_number(*c.runtime_ms) : "");
    os << '\n';
  }
  return os.str();
}

}  // namespace fuchs
