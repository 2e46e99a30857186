#include "fuchs/serialize.hpp"

#include <fstream>

namespace fuchs {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

void expect_kind(const nlohmann::json& j, const char* kind) {
  const auto& k = field(j, "kind");
  if (!k.is_string() || k.get<std::string>() != kind)
    throw SchemaError(std::string("expected kind '") + kind + "'");
}

nlohmann::json pack(const Eigen::MatrixXcd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back({m(r, c).real(), m(r, c).imag()});
  return arr;
}

Eigen::MatrixXcd unpack(const nlohmann::json& arr, Eigen::Index rows, Eigen::Index cols, const char* key) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols)
    throw SchemaError(std::string("field '") + key + "' must hold " + std::to_string(rows * cols) + " entries");
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = arr[static_cast<std::size_t>(r * cols + c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw SchemaError(std::string("entries of '") + key + "' must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

FieldParams params_from_json(const nlohmann::json& j) {
  try {
    return FieldParams::make(int_field(j, "prime"), int_field(j, "n"));
  } catch (const ParameterError& e) {
    throw SchemaError(e.what());
  }
}

}  // namespace

nlohmann::json theta_to_json(const ThetaParam& theta) { return {{"val", 0}, {"digits", theta.digits()}}; }

ThetaParam theta_from_json(int p, const nlohmann::json& j) {
  if (int_field(j, "val") != 0) throw SchemaError("theta must have valuation 0");
  const auto& d = field(j, "digits");
  if (!d.is_array()) throw SchemaError("theta digits must be an array");
  std::vector<int> digits;
  for (const auto& x : d) {
    if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= p)
      throw SchemaError("theta digits must lie in [0, p)");
    digits.push_back(x.get<int>());
  }
  try {
    return ThetaParam::from_digits(p, digits);
  } catch (const ParameterError& e) {
    throw SchemaError(e.what());
  }
}

nlohmann::json symbol_to_json(const Symbol& f) {
  return {{"kind", "symbol"},
          {"prime", f.params().p},
          {"n", f.params().n},
          {"m", f.m()},
          {"N", f.N()},
          {"theta", theta_to_json(f.theta())},
          {"values", pack(f.values())}};
}

Symbol symbol_from_json(const nlohmann::json& j) {
  expect_kind(j, "symbol");
  const FieldParams fp = params_from_json(j);
  const int m = int_field(j, "m"), N = int_field(j, "N");
  if (m < fp.n || N < fp.n || m > max_precision(fp.p) || N > max_precision(fp.p))
    throw SchemaError("symbol resolution out of range");
  const ThetaParam theta = theta_from_json(fp.p, field(j, "theta"));
  const auto rows = static_cast<Eigen::Index>(fp.p_pow(m - fp.n));
  const auto cols = static_cast<Eigen::Index>(fp.p_pow(N - fp.n));
  return Symbol(fp, theta, m, N, unpack(field(j, "values"), rows, cols, "values"));
}

nlohmann::json kernel_to_json(const OperatorKernel& a, const std::optional<ThetaParam>& theta) {
  nlohmann::json j = {{"kind", "operator_kernel"},
                      {"prime", a.params().p},
                      {"n", a.params().n},
                      {"M", a.scale()},
                      {"kernel", pack(a.kernel())}};
  if (theta) j["theta"] = theta_to_json(*theta);
  return j;
}

OperatorKernel kernel_from_json(const nlohmann::json& j) {
  expect_kind(j, "operator_kernel");
  const FieldParams fp = params_from_json(j);
  const int M = int_field(j, "M");
  if (M < fp.n || M > max_precision(fp.p)) throw SchemaError("kernel scale out of range");
  const auto size = static_cast<Eigen::Index>(fp.p_pow(M - fp.n));
  return OperatorKernel(fp, M, unpack(field(j, "kernel"), size, size, "kernel"));
}

std::optional<ThetaParam> kernel_theta_from_json(const nlohmann::json& j) {
  if (!j.contains("theta")) return std::nullopt;
  return theta_from_json(int_field(j, "prime"), j.at("theta"));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace fuchs
