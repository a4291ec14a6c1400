#ifndef HFI_CLI_HPP
#define HFI_CLI_HPP

// Command-line surface: knot mini-language, the compute/check/tables/verify
// subcommands, and the exit-code contract (0 success, 1 validation or
// computation failure, 2 usage error).

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfi/document.hpp"
#include "hfi/invariants.hpp"
#include "hfi/report.hpp"
#include "hfi/verify.hpp"

namespace hfi {

// Bad values inside an otherwise well-formed flag (exit code 2, naming the
// flag), as opposed to domain failures (exit code 1).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::pair<int, int> parse_int_pair(const std::string& text, char sep,
                                          const std::string& flag) {
  auto at = text.find(sep);
  if (at == std::string::npos)
    throw UsageError(flag + ": expected two integers separated by '" +
                     std::string(1, sep) + "', got '" + text + "'");
  try {
    std::size_t used = 0;
    int a = std::stoi(text.substr(0, at), &used);
    if (used != at) throw std::invalid_argument("trailing characters");
    std::string rest = text.substr(at + 1);
    int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing characters");
    return {a, b};
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError(flag + ": expected two integers separated by '" +
                     std::string(1, sep) + "', got '" + text + "'");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f.good()) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

}  // namespace detail

struct KnotInput {
  ModelComplex complex{"unset"};
  std::optional<FilteredMorphism> involution;  // empty only for involution-free documents
};

// The knot mini-language: unknot | figure8 | torus:p,q | mirror-torus:p,q |
// thin:tau,squares | file:PATH.
inline KnotInput knot_from_spec(const std::string& spec) {
  KnotInput in;
  auto with_builtin = [&in](ModelComplex c) {
    in.involution = involution_for(c);
    in.complex = std::move(c);
  };
  if (spec == "unknot") {
    with_builtin(build_staircase({}));
  } else if (spec == "figure8") {
    with_builtin(build_thin_canonical(0, 1));
  } else if (spec.rfind("torus:", 0) == 0) {
    auto [p, q] = detail::parse_int_pair(spec.substr(6), ',', "--knot torus");
    with_builtin(build_staircase(from_alexander_lspace(torus_alexander(p, q))));
  } else if (spec.rfind("mirror-torus:", 0) == 0) {
    auto [p, q] = detail::parse_int_pair(spec.substr(13), ',', "--knot mirror-torus");
    with_builtin(
        build_mirror_staircase(from_alexander_lspace(torus_alexander(p, q))));
  } else if (spec.rfind("thin:", 0) == 0) {
    auto [tau, squares] =
        detail::parse_int_pair(spec.substr(5), ',', "--knot thin");
    with_builtin(build_thin_canonical(tau, squares));
  } else if (spec.rfind("file:", 0) == 0) {
    auto doc = parse_complex_file(detail::read_file(spec.substr(5)));
    in.complex = to_model_complex(doc);
    in.involution = document_involution(doc, in.complex);
  } else {
    throw UsageError("--knot: unknown spec '" + spec +
                     "' (expected unknot, figure8, torus:p,q, mirror-torus:p,q, "
                     "thin:tau,squares, or file:PATH)");
  }
  return in;
}

namespace detail {

inline int cmd_compute(const std::string& spec, std::optional<long long> surgery,
                       std::optional<int> depth, const std::string& format,
                       std::ostream& out) {
  KnotInput in = knot_from_spec(spec);
  if (!in.involution)
    throw std::runtime_error(
        "the document has no involution block; involutive invariants need one");
  Report report;
  if (surgery) {
    auto sr = surgery_report(in.complex, *in.involution, *surgery, depth);
    report = make_compute_report(spec, in.complex, sr.terms, &sr);
  } else {
    auto ct = correction_terms(in.complex, *in.involution, depth);
    report = make_compute_report(spec, in.complex, ct);
  }
  out << emit_report(report, format == "json" ? ReportFormat::machine
                                              : ReportFormat::text);
  return 0;
}

inline int cmd_check(const std::string& path, std::ostream& out) {
  std::string text = read_file(path);
  // parse stepwise so structural findings become a report instead of a throw
  ComplexDocument doc = parse_complex_document(text);
  std::size_t with = 0;
  for (const auto& g : doc.generators)
    if (g.maslov) ++with;
  if (with == 0)
    infer_maslov(doc);
  else if (with != doc.generators.size())
    throw DocumentError(
        "either all generators must carry a maslov grading or none may");
  ModelComplex c = to_model_complex(doc);
  auto vr = validate_complex(c);

  InvolutionSummary inv;
  if (doc.involution) {
    inv.present = true;
    auto iota = document_involution(doc, c);
    auto ir = verify_involution(c, *iota);
    inv.ok = ir.ok();
    inv.chain_map = ir.chain_map;
    inv.maslov_ok = ir.maslov_ok;
    inv.skew_ok = ir.skew_ok;
    inv.square = ir.square_status == SquareStatus::exact      ? "exact"
                 : ir.square_status == SquareStatus::homotopic ? "homotopic"
                                                               : "failed";
    inv.issues = ir.issues;
  }
  Report report = make_check_report(path, doc.name, doc.generators.size(),
                                    vr.ok, vr.issues, inv);
  out << emit_report(report, ReportFormat::text);
  return report.data.at("ok").get<bool>() ? 0 : 1;
}

inline int cmd_tables(const std::string& range, std::ostream& out) {
  auto [lo, hi] = parse_int_pair(range, ':', "--sigma-range");
  if (lo > hi)
    throw UsageError("--sigma-range: lower bound exceeds upper bound");
  out << emit_report(make_tables_report(lo, hi), ReportFormat::text);
  return 0;
}

inline int cmd_verify(const std::string& battery, std::uint64_t seed,
                      std::ostream& out) {
  std::vector<CheckResult> results;
  std::string title;
  if (battery == "paper-examples") {
    results = battery_paper_examples();
    title = "built-in reference examples";
  } else if (battery == "thm-1.7") {
    results = battery_tables();
    title = "signature/Arf closed-form table";
  } else if (battery == "properties") {
    results = battery_properties(seed);
    title = "randomized properties (seed " + std::to_string(seed) + ")";
  } else {
    throw UsageError(
        "verify: unknown battery '" + battery +
        "' (expected paper-examples, thm-1.7, or properties)");
  }
  out << emit_report(make_verify_report(title, results), ReportFormat::text);
  return all_passed(results) ? 0 : 1;
}

}  // namespace detail

// argv without the program name, in normal order.  Returns the process exit
// code and writes reports to `out`, diagnostics to `err`.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"involutive correction terms of large knot surgeries"};
  app.name("hfi");
  app.require_subcommand(1);

  std::string knot_spec;
  std::optional<long long> surgery;
  std::optional<int> depth;
  std::string format = "text";
  auto* compute =
      app.add_subcommand("compute", "invariants of one knot, optionally of a surgery");
  compute->add_option("--knot", knot_spec,
                      "unknot | figure8 | torus:p,q | mirror-torus:p,q | "
                      "thin:tau,squares | file:PATH")
      ->required();
  compute->add_option("--surgery", surgery, "surgery coefficient p >= max(1, genus)");
  compute->add_option("--depth", depth, "truncation depth override")
      ->check(CLI::PositiveNumber);
  compute->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  std::string input_path;
  auto* check = app.add_subcommand("check", "validate a complex document");
  check->add_option("--input", input_path, "path to a complex document")->required();

  std::string sigma_range = "-16:16";
  auto* tables =
      app.add_subcommand("tables", "closed-form alternating-knot triples");
  tables->add_option("--sigma-range", sigma_range, "signature range A:B");

  std::string battery;
  std::uint64_t seed = 7;
  auto* verify = app.add_subcommand("verify", "run a verification battery");
  verify->add_option("battery", battery, "paper-examples | thm-1.7 | properties")
      ->required();
  verify->add_option("--seed", seed, "seed for the randomized battery");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed())
      return detail::cmd_compute(knot_spec, surgery, depth, format, out);
    if (check->parsed()) return detail::cmd_check(input_path, out);
    if (tables->parsed()) return detail::cmd_tables(sigma_range, out);
    return detail::cmd_verify(battery, seed, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hfi

#endif  // HFI_CLI_HPP
