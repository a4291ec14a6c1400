#ifndef HFI_REPORT_HPP
#define HFI_REPORT_HPP

// Report objects for the command-line surface.  Every report is one ordered
// JSON value plus a kind tag; the machine form is that value serialized, the
// human form is a fixed text layout rendered from the same value.  Identical
// inputs therefore produce byte-identical bytes in both formats.

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hfi/invariants.hpp"

namespace hfi {

enum class ReportFormat { text, machine };

struct Report {
  std::string kind;  // "compute" | "check" | "tables" | "verify"
  nlohmann::ordered_json data;
};

// The exact machine spelling of a (V_lower, V0, V_upper) triple.
inline nlohmann::ordered_json triple_json(const Triple& t) {
  nlohmann::ordered_json j;
  j["V_lower"] = t.v_lower;
  j["V0"] = t.v0;
  j["V_upper"] = t.v_upper;
  return j;
}

inline nlohmann::ordered_json correction_json(const CorrectionTerms& ct) {
  nlohmann::ordered_json j;
  j["triple"] = triple_json(ct.triple());
  j["d_a"] = ct.d_a;
  j["d_b"] = ct.d_b;
  j["d_lower"] = ct.d_lower;
  j["d_upper"] = ct.d_upper;
  j["tower_non_q"] = ct.d_lower + 1;  // cone bottoms behind the d-values
  j["tower_q"] = ct.d_upper;
  nlohmann::ordered_json red = nlohmann::ordered_json::object();
  for (const auto& [grading, dim] : ct.reduced)
    red[std::to_string(grading)] = dim;
  j["reduced"] = std::move(red);
  j["depth"] = ct.depth;
  return j;
}

inline nlohmann::ordered_json surgery_json(const SurgeryReport& s) {
  nlohmann::ordered_json j;
  j["p"] = s.p;
  j["d_lower"] = format_rational(s.d_lower);
  j["d"] = format_rational(s.d);
  j["d_upper"] = format_rational(s.d_upper);
  nlohmann::ordered_json rev;
  rev["d_lower"] = format_rational(s.rev_d_lower);
  rev["d"] = format_rational(s.rev_d);
  rev["d_upper"] = format_rational(s.rev_d_upper);
  j["reversed"] = std::move(rev);
  return j;
}

inline Report make_compute_report(const std::string& spec, const ModelComplex& c,
                                  const CorrectionTerms& ct,
                                  const SurgeryReport* surgery = nullptr) {
  Report r;
  r.kind = "compute";
  r.data["knot"] = spec;
  r.data["complex"] = c.name();
  r.data["generators"] = c.size();
  r.data["invariants"] = correction_json(ct);
  if (surgery) r.data["surgery"] = surgery_json(*surgery);
  return r;
}

struct InvolutionSummary {
  bool present = false;
  bool ok = false;
  bool chain_map = false;
  bool maslov_ok = false;
  bool skew_ok = false;
  std::string square;  // "exact" | "homotopic" | "failed"
  std::vector<std::string> issues;
};

inline Report make_check_report(const std::string& source, const std::string& name,
                                std::size_t generators, bool complex_ok,
                                const std::vector<std::string>& issues,
                                const InvolutionSummary& inv) {
  Report r;
  r.kind = "check";
  r.data["source"] = source;
  r.data["name"] = name;
  r.data["generators"] = generators;
  r.data["complex_ok"] = complex_ok;
  r.data["issues"] = issues;
  nlohmann::ordered_json ij;
  ij["present"] = inv.present;
  if (inv.present) {
    ij["ok"] = inv.ok;
    ij["chain_map"] = inv.chain_map;
    ij["maslov_ok"] = inv.maslov_ok;
    ij["skew_ok"] = inv.skew_ok;
    ij["square"] = inv.square;
    ij["issues"] = inv.issues;
  }
  r.data["involution"] = std::move(ij);
  r.data["ok"] = complex_ok && (!inv.present || inv.ok);
  return r;
}

// The signature/Arf closed-form tables over an even signature range,
// split and ordered the way the source tables are printed: nonpositive
// signatures descending from 0, positive signatures ascending.
inline Report make_tables_report(int sigma_lo, int sigma_hi) {
  if (sigma_lo > sigma_hi)
    throw std::invalid_argument("empty signature range");
  Report r;
  r.kind = "tables";
  r.data["sigma_range"] = {sigma_lo, sigma_hi};
  auto row = [](int sigma) {
    nlohmann::ordered_json j;
    j["sigma"] = sigma;
    j["arf0"] = triple_json(alternating_triple(sigma, 0));
    j["arf1"] = triple_json(alternating_triple(sigma, 1));
    return j;
  };
  nlohmann::ordered_json neg = nlohmann::ordered_json::array();
  int start = std::min(0, sigma_hi);
  if (start % 2 != 0) --start;  // closed forms exist for even signatures only
  for (int s = start; s >= sigma_lo; s -= 2) neg.push_back(row(s));
  nlohmann::ordered_json pos = nlohmann::ordered_json::array();
  for (int s = 2; s <= sigma_hi; s += 2)
    if (s >= sigma_lo) pos.push_back(row(s));
  r.data["nonpositive"] = std::move(neg);
  r.data["positive"] = std::move(pos);
  return r;
}

namespace detail {

inline std::string triple_text(const nlohmann::ordered_json& t) {
  std::ostringstream out;
  out << "(" << t.at("V_lower").get<int>() << ", " << t.at("V0").get<int>()
      << ", " << t.at("V_upper").get<int>() << ")";
  return out.str();
}

inline void render_invariants(std::ostream& out, const nlohmann::ordered_json& v) {
  out << "triple (V_lower, V0, V_upper): " << triple_text(v.at("triple")) << "\n";
  out << "A-region d: " << v.at("d_a").get<int>()
      << "   B-region d: " << v.at("d_b").get<int>() << "\n";
  out << "involutive d_lower: " << v.at("d_lower").get<int>()
      << "   d_upper: " << v.at("d_upper").get<int>() << "\n";
  out << "cone tower bottoms: non-Q " << v.at("tower_non_q").get<int>()
      << ", Q " << v.at("tower_q").get<int>() << "\n";
  const auto& red = v.at("reduced");
  if (red.empty()) {
    out << "reduced involutive homology: none\n";
  } else {
    out << "reduced involutive homology:";
    for (const auto& [grading, dim] : red.items())
      out << "  grading " << grading << ": dim " << dim.get<std::size_t>();
    out << "\n";
  }
  out << "truncation depth: " << v.at("depth").get<int>() << "\n";
}

inline void render_surgery(std::ostream& out, const nlohmann::ordered_json& s) {
  out << "surgery p = " << s.at("p").get<long long>() << ":\n";
  out << "  d_lower = " << s.at("d_lower").get<std::string>()
      << "   d = " << s.at("d").get<std::string>()
      << "   d_upper = " << s.at("d_upper").get<std::string>() << "\n";
  const auto& rev = s.at("reversed");
  out << "  reversed orientation: d_lower = "
      << rev.at("d_lower").get<std::string>()
      << "   d = " << rev.at("d").get<std::string>()
      << "   d_upper = " << rev.at("d_upper").get<std::string>() << "\n";
}

inline void render_table(std::ostream& out, const std::string& title,
                         const nlohmann::ordered_json& rows) {
  if (rows.empty()) return;
  std::vector<std::array<std::string, 3>> cells;
  for (const auto& row : rows)
    cells.push_back({std::to_string(row.at("sigma").get<int>()),
                     triple_text(row.at("arf0")), triple_text(row.at("arf1"))});
  std::array<std::size_t, 3> width = {std::string("sigma").size(),
                                      std::string("Arf=0").size(),
                                      std::string("Arf=1").size()};
  for (const auto& c : cells)
    for (int k = 0; k < 3; ++k) width[k] = std::max(width[k], c[k].size());
  out << title << "\n";
  out << "  " << std::setw(int(width[0])) << "sigma" << "  "
      << std::setw(int(width[1])) << "Arf=0" << "  "
      << std::setw(int(width[2])) << "Arf=1" << "\n";
  for (const auto& c : cells)
    out << "  " << std::setw(int(width[0])) << c[0] << "  "
        << std::setw(int(width[1])) << c[1] << "  "
        << std::setw(int(width[2])) << c[2] << "\n";
}

inline void render_check(std::ostream& out, const nlohmann::ordered_json& d) {
  out << "document: " << d.at("name").get<std::string>() << " ("
      << d.at("source").get<std::string>() << ")\n";
  out << "generators: " << d.at("generators").get<std::size_t>() << "\n";
  out << "complex: " << (d.at("complex_ok").get<bool>() ? "ok" : "INVALID") << "\n";
  for (const auto& issue : d.at("issues"))
    out << "  issue: " << issue.get<std::string>() << "\n";
  const auto& inv = d.at("involution");
  if (!inv.at("present").get<bool>()) {
    out << "involution: absent\n";
    return;
  }
  if (inv.at("ok").get<bool>()) {
    out << "involution: ok (square " << inv.at("square").get<std::string>()
        << ")\n";
    return;
  }
  out << "involution: FAILED (chain map " << (inv.at("chain_map").get<bool>() ? "ok" : "broken")
      << ", gradings " << (inv.at("maslov_ok").get<bool>() ? "ok" : "broken")
      << ", skew filtration " << (inv.at("skew_ok").get<bool>() ? "ok" : "broken")
      << ", square " << inv.at("square").get<std::string>() << ")\n";
  for (const auto& issue : inv.at("issues"))
    out << "  issue: " << issue.get<std::string>() << "\n";
}

inline void render_verify(std::ostream& out, const nlohmann::ordered_json& d) {
  out << "battery: " << d.at("battery").get<std::string>() << "\n";
  for (const auto& check : d.at("checks")) {
    out << (check.at("pass").get<bool>() ? "  PASS " : "  FAIL ")
        << check.at("name").get<std::string>();
    auto detail = check.at("detail").get<std::string>();
    if (!detail.empty()) out << " — " << detail;
    out << "\n";
  }
  out << d.at("passed").get<std::size_t>() << " passed, "
      << d.at("failed").get<std::size_t>() << " failed\n";
}

}  // namespace detail

inline std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::machine) {
    nlohmann::ordered_json j;
    j["kind"] = r.kind;
    j["data"] = r.data;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (r.kind == "compute") {
    out << "knot: " << r.data.at("knot").get<std::string>() << "   complex: "
        << r.data.at("complex").get<std::string>() << " ("
        << r.data.at("generators").get<std::size_t>() << " generators)\n";
    detail::render_invariants(out, r.data.at("invariants"));
    if (r.data.contains("surgery")) detail::render_surgery(out, r.data.at("surgery"));
  } else if (r.kind == "tables") {
    detail::render_table(out, "signature <= 0", r.data.at("nonpositive"));
    if (!r.data.at("positive").empty()) {
      if (!r.data.at("nonpositive").empty()) out << "\n";
      detail::render_table(out, "signature > 0", r.data.at("positive"));
    }
  } else if (r.kind == "check") {
    detail::render_check(out, r.data);
  } else if (r.kind == "verify") {
    detail::render_verify(out, r.data);
  } else {
    out << r.data.dump(2) << "\n";
  }
  return out.str();
}

}  // namespace hfi

#endif  // HFI_REPORT_HPP
