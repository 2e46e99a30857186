// fuchs: verification suites and file-based quantization, star products and reconstruction.
//
// Exit codes: 0 success, 1 a verification check failed, 2 invalid configuration or input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fuchs/calculus.hpp"
#include "fuchs/serialize.hpp"
#include "fuchs/star.hpp"
#include "fuchs/verify.hpp"

namespace {

using fuchs::Symbol;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct FileOptions {
  std::string in;
  std::string in2;
  std::string out;
  std::vector<int> theta_digits;
  bool strict = false;
  std::string route = "operators";
  double s_probe = -1.0;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json symbol_summary(const Symbol& f) {
  return {{"prime", f.params().p}, {"n", f.params().n}, {"m", f.m()}, {"N", f.N()}};
}

// Brings a symbol to the closure scale max(m, N + n); logged, or refused in strict mode.
Symbol close_symbol(const Symbol& f, const std::string& label, bool strict, json& trace) {
  const int mc = fuchs::closure_scale(f.params(), f.m(), f.N());
  if (mc == f.m()) {
    trace.push_back(label + ": (m, N) = (" + std::to_string(f.m()) + ", " + std::to_string(f.N()) +
                    ") satisfies m >= N + n");
    return f;
  }
  const std::string msg = label + ": m = " + std::to_string(f.m()) + " < N + n = " +
                          std::to_string(f.N() + f.params().n);
  if (strict) throw fuchs::ParameterError(msg + " (closure condition, strict mode)");
  trace.push_back(msg + "; refined to m = " + std::to_string(mc));
  std::cerr << "fuchs: " << msg << "; refining to m = " << mc << '\n';
  return f.refined(mc, f.N());
}

json provenance(const std::string& command, const FileOptions& o, const json& trace) {
  json cfg = {{"in", o.in}, {"strict", o.strict}};
  if (!o.in2.empty()) cfg["in2"] = o.in2;
  if (command == "star") cfg["route"] = o.route;
  if (command == "reconstruct") cfg["s_probe"] = o.s_probe;
  if (!o.theta_digits.empty()) cfg["theta_digits"] = o.theta_digits;
  return {{"tool", "fuchs"}, {"command", command}, {"config", cfg}, {"resolution_trace", trace}};
}

void require_out(const FileOptions& o) {
  if (o.out.empty()) throw fuchs::ParameterError("--out is required");
}

void check_theta_flag(const FileOptions& o, const fuchs::ThetaParam& theta) {
  if (o.theta_digits.empty()) return;
  if (!(fuchs::ThetaParam::from_digits(theta.prime(), o.theta_digits) == theta))
    throw fuchs::ParameterError("theta mismatch between --theta-digits and the input file");
}

int cmd_quantize(const FileOptions& o) {
  require_out(o);
  json trace = json::array();
  const Symbol f0 = fuchs::symbol_from_json(fuchs::read_json_file(o.in));
  check_theta_flag(o, f0.theta());
  const Symbol f = close_symbol(f0, "input", o.strict, trace);
  const fuchs::OperatorKernel a = fuchs::quantize_direct(f);
  trace.push_back("kernel scale M = max(m, N) = " + std::to_string(a.scale()));
  json doc = fuchs::kernel_to_json(a, f.theta());
  doc["provenance"] = provenance("quantize", o, trace);
  doc["provenance"]["input"] = symbol_summary(f0);
  fuchs::write_json_file(o.out, doc);
  return 0;
}

int cmd_star(const FileOptions& o) {
  require_out(o);
  if (o.in2.empty()) throw fuchs::ParameterError("star needs --in2");
  if (o.route != "operators" && o.route != "kernel") throw fuchs::ParameterError("--route must be operators or kernel");
  json trace = json::array();
  const Symbol a0 = fuchs::symbol_from_json(fuchs::read_json_file(o.in));
  const Symbol b0 = fuchs::symbol_from_json(fuchs::read_json_file(o.in2));
  if (!(a0.params() == b0.params())) throw fuchs::ParameterError("inputs live over different (p, n)");
  if (!(a0.theta() == b0.theta())) throw fuchs::ParameterError("theta mismatch between the inputs");
  check_theta_flag(o, a0.theta());
  const Symbol a = close_symbol(a0, "left", o.strict, trace);
  const Symbol b = close_symbol(b0, "right", o.strict, trace);
  const int m = std::max(a.m(), b.m()), N = std::max(a.N(), b.N());
  trace.push_back("common resolution (max m, max N) = (" + std::to_string(m) + ", " + std::to_string(N) + ")");
  const Symbol c = o.route == "kernel" ? fuchs::star_via_kernel(a, b) : fuchs::star_via_operators(a, b);
  trace.push_back("output resolution (M, M), M = max(m, N) = " + std::to_string(c.m()));
  json doc = fuchs::symbol_to_json(c);
  doc["provenance"] = provenance("star", o, trace);
  doc["provenance"]["inputs"] = {symbol_summary(a0), symbol_summary(b0)};
  fuchs::write_json_file(o.out, doc);
  return 0;
}

int cmd_reconstruct(const FileOptions& o) {
  require_out(o);
  if (!(o.s_probe < 0.0)) throw fuchs::ParameterError("--s-probe must be negative");
  json trace = json::array();
  const json in = fuchs::read_json_file(o.in);
  const fuchs::OperatorKernel a = fuchs::kernel_from_json(in);
  std::optional<fuchs::ThetaParam> theta = fuchs::kernel_theta_from_json(in);
  if (!o.theta_digits.empty()) {
    const auto flag = fuchs::ThetaParam::from_digits(a.params().p, o.theta_digits);
    if (theta && !(*theta == flag)) throw fuchs::ParameterError("theta mismatch between --theta-digits and the input file");
    theta = flag;
  }
  if (!theta) throw fuchs::ParameterError("the kernel file carries no theta; pass --theta-digits");
  trace.push_back("coherent family at scale M = " + std::to_string(a.scale()) + ": " +
                  std::to_string(a.params().p_pow(a.scale() - a.params().n) * a.params().p_pow(a.scale())) +
                  " elements");
  fuchs::ReconstructDiagnostics diag;
  const Symbol f = fuchs::reconstruct_symbol(a, *theta, o.s_probe, &diag);
  trace.push_back("output resolution (M, M) = (" + std::to_string(f.m()) + ", " + std::to_string(f.N()) + ")");
  if (!diag.decay_finite) std::cerr << "fuchs: warning: coefficient decay check at s = " << o.s_probe << " failed\n";
  json doc = fuchs::symbol_to_json(f);
  doc["provenance"] = provenance("reconstruct", o, trace);
  doc["provenance"]["decay_probe"] = {
      {"s", diag.s_probe}, {"constant", diag.decay_constant}, {"finite", diag.decay_finite}};
  fuchs::write_json_file(o.out, doc);
  return 0;
}

int cmd_verify(const fuchs::RunConfig& cfg, const std::string& format, const std::string& out) {
  const fuchs::Report report = fuchs::run_verify(cfg);
  std::string text;
  if (format == "csv") {
    text = report.to_csv(cfg.timing);
  } else {
    json doc = report.to_json(cfg.timing);
    doc["config"] = {{"prime", cfg.prime}, {"n", cfg.n},         {"m", cfg.m},
                     {"N", cfg.N},         {"theta_digits", cfg.theta_digits}, {"suite", cfg.suite},
                     {"seed", cfg.seed},   {"tol", cfg.tol}};
    text = doc.dump(2) + '\n';
  }
  write_text(out, text);
  std::cerr << report.checks().size() << " checks, " << report.failures() << " failed\n";
  for (const auto& c : report.checks())
    if (!c.pass)
      std::cerr << "FAIL " << c.check << ": lhs = " << c.lhs << ", rhs = " << c.rhs << " (" << c.anchor << ")\n";
  return report.all_pass() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic Fuchs calculus: verification and symbol/operator tools"};
  app.require_subcommand(1);

  fuchs::RunConfig cfg;
  std::string format = "json", out;
  std::string suites = "padic|harmonic|repn|quantize|star|calculus|cv|all";
  auto* verify = app.add_subcommand("verify", "run verification suites and emit a report");
  verify->add_option("--prime", cfg.prime, "odd prime p");
  verify->add_option("--n", cfg.n, "level n >= 1");
  verify->add_option("--u-scale,--m", cfg.m, "u-scale m >= n");
  verify->add_option("--t-cutoff", cfg.N, "t-cutoff N >= n");
  verify->add_option("--theta-digits", cfg.theta_digits, "little-endian digits of theta (valuation 0)")
      ->delimiter(',');
  verify->add_option("--suite", cfg.suite, suites);
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--tol", cfg.tol, "override every non-exact tolerance");
  verify->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  verify->add_flag("--strict", cfg.strict, "refuse m < N + n instead of refining");
  verify->add_flag("--timing", cfg.timing, "include runtime_ms in the report");
  verify->add_option("--out", out, "report path (default stdout)");

  FileOptions fo;
  auto add_file_options = [&](CLI::App* sub, bool two_inputs) {
    sub->add_option("--in", fo.in, "input file")->required();
    if (two_inputs) sub->add_option("--in2", fo.in2, "second input file")->required();
    sub->add_option("--out", fo.out, "output file")->required();
    sub->add_option("--theta-digits", fo.theta_digits, "expected theta digits")->delimiter(',');
    sub->add_flag("--strict", fo.strict, "closure violations are errors");
  };
  auto* quantize = app.add_subcommand("quantize", "symbol file -> operator kernel file");
  add_file_options(quantize, false);
  auto* star = app.add_subcommand("star", "two symbol files -> their star product");
  add_file_options(star, true);
  star->add_option("--route", fo.route, "operators or kernel");
  auto* reconstruct = app.add_subcommand("reconstruct", "operator kernel file -> symbol via coherent coefficients");
  add_file_options(reconstruct, false);
  reconstruct->add_option("--s-probe", fo.s_probe, "decay probe exponent (negative)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*verify) return cmd_verify(cfg, format, out);
    if (*quantize) return cmd_quantize(fo);
    if (*star) return cmd_star(fo);
    if (*reconstruct) return cmd_reconstruct(fo);
  } catch (const fuchs::ParameterError& e) {
    std::cerr << "fuchs: invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fuchs::SchemaError& e) {
    std::cerr << "fuchs: schema error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "fuchs: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
