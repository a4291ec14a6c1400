// Acceptance gate: one line per committed criterion, every check exact.
// Exits nonzero if any criterion fails.

#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hfi/hfi.hpp"

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    std::cout << "PASS — " << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "FAIL — " << name << " (" << e.what() << ")" << "\n";
  }
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

std::string show(const hfi::Triple& t) {
  std::ostringstream out;
  out << "(" << t.v_lower << ", " << t.v0 << ", " << t.v_upper << ")";
  return out.str();
}

void require_triple(const hfi::Triple& got, const hfi::Triple& want,
                    const std::string& where) {
  require(got == want, where + ": " + show(got) + " != " + show(want));
}

hfi::Triple end_to_end(const hfi::ModelComplex& c) {
  return hfi::correction_terms(c, hfi::involution_for(c)).triple();
}

struct GridRow {
  int sigma;
  hfi::Triple arf0, arf1;
};

// The committed closed-form values for |sigma| <= 16.
const std::vector<GridRow> kGrid = {
    {-16, {4, 4, 4}, {5, 4, 4}},  {-14, {4, 4, 4}, {4, 4, 3}},
    {-12, {4, 3, 3}, {3, 3, 3}},  {-10, {3, 3, 2}, {3, 3, 3}},
    {-8, {2, 2, 2}, {3, 2, 2}},   {-6, {2, 2, 2}, {2, 2, 1}},
    {-4, {2, 1, 1}, {1, 1, 1}},   {-2, {1, 1, 0}, {1, 1, 1}},
    {0, {0, 0, 0}, {1, 0, 0}},    {2, {0, 0, 0}, {0, 0, -1}},
    {4, {0, 0, -1}, {0, 0, -1}},  {6, {0, 0, -2}, {0, 0, -1}},
    {8, {0, 0, -2}, {0, 0, -2}},  {10, {0, 0, -2}, {0, 0, -3}},
    {12, {0, 0, -3}, {0, 0, -3}}, {14, {0, 0, -4}, {0, 0, -3}},
    {16, {0, 0, -4}, {0, 0, -4}},
};

}  // namespace

int main() {
  criterion("alternating-knot triple grid, closed form and end to end", [] {
    for (const auto& row : kGrid)
      for (int arf : {0, 1}) {
        const hfi::Triple& want = arf == 0 ? row.arf0 : row.arf1;
        std::string at = "sigma " + std::to_string(row.sigma) + " arf " +
                         std::to_string(arf);
        require_triple(hfi::alternating_triple(row.sigma, arf), want,
                       at + " closed form");
        require_triple(end_to_end(hfi::thin_model_for(row.sigma, arf)), want,
                       at + " end to end");
      }
    return "34 cells, both paths exact";
  });

  criterion("figure-eight triple and p=7 surgery terms", [] {
    auto c = hfi::build_thin_canonical(0, 1);
    require_triple(end_to_end(c), {1, 0, 0}, "triple");
    auto r = hfi::surgery_report(c, hfi::involution_for(c), 7);
    require(hfi::format_rational(r.d_lower) == "-1/2", "d_lower != -1/2");
    require(hfi::format_rational(r.d) == "3/2", "d != 3/2");
    require(hfi::format_rational(r.d_upper) == "3/2", "d_upper != 3/2");
    return "(1, 0, 0); surgery (-1/2, 3/2, 3/2)";
  });

  criterion("left trefoil p=1: cone towers, reduced class, correction terms", [] {
    auto c = hfi::build_mirror_staircase({1});
    auto r = hfi::surgery_report(c, hfi::involution_for(c), 1);
    require(r.tower_nonq == 1 && r.tower_q == 2,
            "cone tower bottoms != (1, 2)");
    require(r.terms.reduced == std::map<int, std::size_t>{{0, 1}},
            "reduced part != one class in grading 0");
    require(hfi::format_rational(r.d_lower) == "0", "d_lower != 0");
    require(hfi::format_rational(r.d) == "0", "d != 0");
    require(hfi::format_rational(r.d_upper) == "2", "d_upper != 2");
    require(hfi::format_rational(r.rev_d_lower) == "-2",
            "reversed d_lower != -2");
    require(hfi::format_rational(r.rev_d) == "0", "reversed d != 0");
    require(hfi::format_rational(r.rev_d_upper) == "0", "reversed d_upper != 0");
    return "towers (1, 2); Z2 at 0; terms (0, 0, 2); reversed (-2, 0, 0)";
  });

  criterion("negative torus family: triple (0, 0, -n) from the torsion", [] {
    for (int q : {3, 5, 7, 9}) {
      auto torsion = hfi::from_alexander_lspace(hfi::torus_alexander(2, q));
      int n = hfi::staircase_n(torsion);
      require(n == (q + 2) / 4, "q=" + std::to_string(q) + ": wrong n");
      require_triple(end_to_end(hfi::build_mirror_staircase(torsion)),
                     {0, 0, -n}, "q=" + std::to_string(q));
    }
    return "q in {3,5,7,9}, n in {1,1,2,2}";
  });

  criterion("positive torus family: triple (n, n, n), no reduced part", [] {
    for (int q : {3, 5, 7, 9}) {
      auto torsion = hfi::from_alexander_lspace(hfi::torus_alexander(2, q));
      int n = hfi::staircase_n(torsion);
      auto ct = hfi::correction_terms(hfi::build_staircase(torsion),
                                      hfi::involution_for(hfi::build_staircase(torsion)));
      require_triple(ct.triple(), {n, n, n}, "q=" + std::to_string(q));
      require(ct.reduced.empty(),
              "q=" + std::to_string(q) + ": unexpected reduced part");
    }
    return "q in {3,5,7,9}";
  });

  criterion("basis-change maps agree on all small thin models", [] {
    int cases = 0;
    for (int tau = -4; tau <= 4; ++tau)
      for (int squares = 0; squares <= 3; ++squares) {
        auto c = hfi::build_thin_canonical(tau, squares);
        require(hfi::conjectural_sarkar_map(c) == hfi::canonical_sarkar_map(c),
                "tau=" + std::to_string(tau) +
                    " squares=" + std::to_string(squares));
        ++cases;
      }
    return std::to_string(cases) + " models, exhaustive";
  });

  criterion("seeded randomized property suite", [] {
    auto results = hfi::battery_properties(7);
    require(results.size() >= 200, "fewer than 200 cases");
    for (const auto& r : results)
      require(r.pass, r.name + ": " + r.detail);
    return std::to_string(results.size()) + " cases, all properties hold";
  });

  criterion("obstruction logic: filling bound, cobordism, signature equality", [] {
    auto b = hfi::froyshov_bound(hfi::Rational(-2));
    require(b.bound == hfi::Rational(-8) && b.obstructed,
            "d_lower = -2 must give an obstructing bound of -8");
    auto fig8 = hfi::cobordism_check(hfi::alternating_input(0, 1, "figure-eight"),
                                     hfi::alternating_input(0, 0, "unknot"), 1);
    require(fig8.obstructed, "figure-eight vs unknot must obstruct");
    int pairs = 0;
    for (int arf : {0, 1})
      for (int s1 = -16; s1 <= 16; s1 += 2) {
        if (((s1 - 4 * arf - 4) % 8 + 8) % 8 != 0) continue;
        for (int s2 = -16; s2 <= 16; s2 += 2) {
          if (((s2 - 4 * arf - 4) % 8 + 8) % 8 != 0) continue;
          auto r = hfi::cobordism_check(hfi::alternating_input(s1, arf, "K"),
                                        hfi::alternating_input(s2, arf, "K'"), 1);
          require(r.obstructed == (s1 != s2),
                  "signature pair " + std::to_string(s1) + ", " +
                      std::to_string(s2));
          ++pairs;
        }
      }
    return "bound -8; 2 cobordism reasons; " + std::to_string(pairs) +
           " signature pairs";
  });

  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
