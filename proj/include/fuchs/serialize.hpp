#pragma once

// JSON interchange for symbols and operator kernels. Complex entries are [re, im] pairs,
// row-major. Every artifact may carry a "provenance" object, which readers ignore.

#include <optional>
#include <string>

#include "fuchs/quantize.hpp"
#include "json.hpp"

namespace fuchs {

// Thrown when a document does not match the schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json theta_to_json(const ThetaParam& theta);
ThetaParam theta_from_json(int p, const nlohmann::json& j);

// {"kind": "symbol", "prime", "n", "m", "N", "theta": {"val": 0, "digits": [...]}, "values": [[re, im], ...]}
nlohmann::json symbol_to_json(const Symbol& f);
Symbol symbol_from_json(const nlohmann::json& j);

// {"kind": "operator_kernel", "prime", "n", "M", "theta"?, "kernel": [[re, im], ...]}
nlohmann::json kernel_to_json(const OperatorKernel& a, const std::optional<ThetaParam>& theta = std::nullopt);
OperatorKernel kernel_from_json(const nlohmann::json& j);
std::optional<ThetaParam> kernel_theta_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace fuchs
