#ifndef HFI_VERIFY_HPP
#define HFI_VERIFY_HPP

// Batch verification batteries behind the CLI `verify` subcommand: the
// built-in reference examples, the signature/Arf closed-form table, and a
// seeded randomized property suite.  Every check is exact; a battery never
// throws — failures (including exceptions) become failing CheckResults.

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hfi/cone.hpp"
#include "hfi/invariants.hpp"
#include "hfi/involution.hpp"
#include "hfi/model_complex.hpp"
#include "hfi/report.hpp"

namespace hfi {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline void run_check(std::vector<CheckResult>& out, const std::string& name,
                      const std::function<void(std::ostringstream&)>& body) {
  CheckResult r;
  r.name = name;
  std::ostringstream detail;
  try {
    body(detail);
    r.pass = true;
  } catch (const std::exception& e) {
    r.pass = false;
    if (!detail.str().empty()) detail << "; ";
    detail << e.what();
  }
  r.detail = detail.str();
  out.push_back(r);
}

// Throwing assertion used inside battery bodies.
inline void expect(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

inline std::string triple_str(const Triple& t) {
  std::ostringstream out;
  out << "(" << t.v_lower << ", " << t.v0 << ", " << t.v_upper << ")";
  return out.str();
}

inline void expect_triple(const Triple& got, const Triple& want) {
  expect(got == want, "triple " + triple_str(got) + " != " + triple_str(want));
}

inline void expect_rational(const Rational& got, const std::string& want,
                            const std::string& label) {
  expect(format_rational(got) == want,
         label + " = " + format_rational(got) + " != " + want);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Battery 1: built-in reference examples

inline std::vector<CheckResult> battery_paper_examples() {
  std::vector<CheckResult> out;

  detail::run_check(out, "figure-eight triple", [](std::ostringstream& d) {
    auto c = build_thin_canonical(0, 1);
    auto ct = correction_terms(c, involution_for(c));
    detail::expect_triple(ct.triple(), Triple{1, 0, 0});
    d << "triple " << detail::triple_str(ct.triple());
  });

  detail::run_check(out, "figure-eight surgery p=7", [](std::ostringstream& d) {
    auto c = build_thin_canonical(0, 1);
    auto r = surgery_report(c, involution_for(c), 7);
    detail::expect_rational(r.d_lower, "-1/2", "d_lower");
    detail::expect_rational(r.d, "3/2", "d");
    detail::expect_rational(r.d_upper, "3/2", "d_upper");
    d << "(d_lower, d, d_upper) = (-1/2, 3/2, 3/2)";
  });

  detail::run_check(out, "figure-eight surgery p=1", [](std::ostringstream& d) {
    auto c = build_thin_canonical(0, 1);
    auto r = surgery_report(c, involution_for(c), 1);
    detail::expect_rational(r.d, "0", "d");
    detail::expect_rational(r.d_lower, "-2", "d_lower");
    detail::expect_rational(r.d_upper, "0", "d_upper");
    detail::expect_rational(r.rev_d_lower, "0", "reversed d_lower");
    detail::expect_rational(r.rev_d_upper, "2", "reversed d_upper");
    d << "d = 0, d_lower = -2, d_upper = 0";
  });

  detail::run_check(out, "left trefoil surgery p=1", [](std::ostringstream& d) {
    auto c = build_mirror_staircase({1});
    auto r = surgery_report(c, involution_for(c), 1);
    detail::expect(r.tower_nonq == 1 && r.tower_q == 2,
                   "cone tower bottoms != (1, 2)");
    detail::expect(r.terms.reduced == std::map<int, std::size_t>{{0, 1}},
                   "reduced part is not one class in grading 0");
    detail::expect_rational(r.d, "0", "d");
    detail::expect_rational(r.d_lower, "0", "d_lower");
    detail::expect_rational(r.d_upper, "2", "d_upper");
    detail::expect_rational(r.rev_d_lower, "-2", "reversed d_lower");
    detail::expect_rational(r.rev_d, "0", "reversed d");
    detail::expect_rational(r.rev_d_upper, "0", "reversed d_upper");
    d << "towers (1, 2), Z2 in grading 0, reversed d_lower = -2";
  });

  for (int q : {3, 5, 7, 9}) {
    detail::run_check(out, "mirror torus 2," + std::to_string(q) + " triple",
                      [q](std::ostringstream& d) {
                        auto torsion =
                            from_alexander_lspace(torus_alexander(2, q));
                        int n = staircase_n(torsion);
                        detail::expect(n == (q - 1 + 3) / 4,
                                       "torsion sequence gives wrong n");
                        auto c = build_mirror_staircase(torsion);
                        auto ct = correction_terms(c, involution_for(c));
                        detail::expect_triple(ct.triple(), Triple{0, 0, -n});
                        d << "triple (0, 0, " << -n << ")";
                      });
  }

  for (int q : {3, 5, 7, 9}) {
    detail::run_check(
        out, "torus 2," + std::to_string(q) + " triple",
        [q](std::ostringstream& d) {
          auto torsion = from_alexander_lspace(torus_alexander(2, q));
          int n = staircase_n(torsion);
          auto c = build_staircase(torsion);
          auto ct = correction_terms(c, involution_for(c));
          detail::expect_triple(ct.triple(), Triple{n, n, n});
          detail::expect(ct.reduced.empty(),
                         "staircase cone should have no reduced part");
          d << "triple (" << n << ", " << n << ", " << n << "), no reduced part";
        });
  }

  detail::run_check(out, "definite filling bound at d_lower = -2",
                    [](std::ostringstream& d) {
                      auto b = froyshov_bound(Rational(-2));
                      detail::expect(b.bound == Rational(-8), "bound != -8");
                      detail::expect(b.obstructed, "bound should obstruct");
                      d << "bound -8, obstructed";
                    });

  detail::run_check(
      out, "figure-eight vs unknot surgeries are not cobordant",
      [](std::ostringstream& d) {
        auto r = cobordism_check(alternating_input(0, 1, "figure-eight"),
                                 alternating_input(0, 0, "unknot"), 1);
        detail::expect(r.obstructed, "expected an obstruction");
        d << r.reasons.size() << " obstruction(s)";
      });

  detail::run_check(
      out, "equal triples force equal signatures in the admissible family",
      [](std::ostringstream& d) {
        // signatures with sigma = 4*Arf + 4 (mod 8): cobordant surgeries
        // must have equal signature, and the obstruction fires otherwise
        int checked = 0;
        for (int arf : {0, 1})
          for (int s1 = -16; s1 <= 16; s1 += 2) {
            if (((s1 - 4 * arf - 4) % 8 + 8) % 8 != 0) continue;
            for (int s2 = -16; s2 <= 16; s2 += 2) {
              if (((s2 - 4 * arf - 4) % 8 + 8) % 8 != 0) continue;
              auto r = cobordism_check(alternating_input(s1, arf, "K"),
                                       alternating_input(s2, arf, "K'"), 1);
              detail::expect(r.obstructed == (s1 != s2),
                             "obstruction mismatch at sigma " +
                                 std::to_string(s1) + " vs " +
                                 std::to_string(s2));
              ++checked;
            }
          }
        d << checked << " signature pairs";
      });

  return out;
}

// ---------------------------------------------------------------------------
// Battery 2: the signature/Arf closed-form table, end to end

namespace detail {

// The full table of triples for |sigma| <= 16, frozen from the closed form's
// printed values: row sigma, then the Arf = 0 and Arf = 1 triples.
struct AltRow {
  int sigma;
  Triple arf0, arf1;
};

inline const std::vector<AltRow>& alternating_table() {
  static const std::vector<AltRow> rows = {
      {-16, {4, 4, 4}, {5, 4, 4}},   {-14, {4, 4, 4}, {4, 4, 3}},
      {-12, {4, 3, 3}, {3, 3, 3}},   {-10, {3, 3, 2}, {3, 3, 3}},
      {-8, {2, 2, 2}, {3, 2, 2}},    {-6, {2, 2, 2}, {2, 2, 1}},
      {-4, {2, 1, 1}, {1, 1, 1}},    {-2, {1, 1, 0}, {1, 1, 1}},
      {0, {0, 0, 0}, {1, 0, 0}},     {2, {0, 0, 0}, {0, 0, -1}},
      {4, {0, 0, -1}, {0, 0, -1}},   {6, {0, 0, -2}, {0, 0, -1}},
      {8, {0, 0, -2}, {0, 0, -2}},   {10, {0, 0, -2}, {0, 0, -3}},
      {12, {0, 0, -3}, {0, 0, -3}},  {14, {0, 0, -4}, {0, 0, -3}},
      {16, {0, 0, -4}, {0, 0, -4}},
  };
  return rows;
}

}  // namespace detail

inline std::vector<CheckResult> battery_tables() {
  std::vector<CheckResult> out;
  for (const auto& row : detail::alternating_table()) {
    for (int arf : {0, 1}) {
      const Triple& want = arf == 0 ? row.arf0 : row.arf1;
      std::string name = "sigma " + std::to_string(row.sigma) + " Arf " +
                         std::to_string(arf);
      detail::run_check(out, name, [&row, arf, &want](std::ostringstream& d) {
        detail::expect_triple(alternating_triple(row.sigma, arf), want);
        auto c = thin_model_for(row.sigma, arf);
        auto ct = correction_terms(c, involution_for(c));
        detail::expect_triple(ct.triple(), want);
        d << detail::triple_str(want);
      });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Battery 3: seeded randomized property suite

namespace detail {

// Full pipeline properties on one model with a built-in involution: the
// complex validates, the involution verifies, the correction terms satisfy
// the parity rule, the inequality chain, and the Euler-characteristic
// identity for the reduced part, the cone dimensions obey the rank identity,
// and everything agrees when the truncation window is deepened by one step.
inline void pipeline_properties(const ModelComplex& c) {
  expect(validate_complex(c).ok, "complex fails validation");
  auto iota = involution_for(c);
  expect(verify_involution(c, iota).ok(), "involution fails verification");

  auto ct = correction_terms(c, iota);
  expect((ct.d_lower - ct.d_a) % 2 == 0 && (ct.d_upper - ct.d_a) % 2 == 0,
         "involutive d-values break the parity rule");
  expect(ct.triple().v_upper <= ct.triple().v0, "V_upper > V0");
  expect(ct.triple().v0 <= ct.triple().v_lower, "V0 > V_lower");
  expect(ct.triple().v0 >= 0, "V0 < 0");
  long long euler = 0;
  for (const auto& [r, dim] : ct.reduced)
    euler += (r % 2 == 0 ? 1 : -1) * static_cast<long long>(dim);
  expect(euler == (ct.d_upper - ct.d_lower) / 2,
         "reduced Euler characteristic != (d_upper - d_lower)/2");

  // cone rank identity per grading
  auto a = build_a_plus(c, ct.depth);
  auto i0 = restrict_involution(a, iota);
  auto cone = involutive_cone(a, i0);
  auto ha = graded_homology(a);
  auto hc = graded_homology(cone);
  std::vector<std::vector<std::size_t>> one_plus(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    std::vector<std::size_t> v = i0[e];
    v.push_back(e);
    std::sort(v.begin(), v.end());
    std::vector<std::size_t> red;
    for (std::size_t i = 0; i < v.size();) {
      std::size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      if ((j - i) % 2 == 1) red.push_back(v[i]);
      i = j;
    }
    one_plus[e] = red;
  }
  for (int r = ha.min_grading + 1; r <= ha.trust_max; ++r) {
    auto m_r = induced_endo(a, ha, one_plus, r);
    auto m_r1 = induced_endo(a, ha, one_plus, r - 1);
    std::size_t coker = ha.dim(r) - rank(m_r);
    std::size_t kerdim = ha.dim(r - 1) - rank(m_r1);
    expect(hc.dim(r) == coker + kerdim,
           "cone rank identity fails in grading " + std::to_string(r));
  }

  // deepening the window must not move any reported value
  auto deeper = correction_terms(c, iota, ct.depth + 2);
  expect(deeper.d_a == ct.d_a && deeper.d_b == ct.d_b &&
             deeper.d_lower == ct.d_lower && deeper.d_upper == ct.d_upper &&
             deeper.reduced == ct.reduced,
         "correction terms changed when the window deepened");
}

// Prop-style swap test: on C + C with the swap involution, the cone homology
// is H(A)[shifted] + H(A) and Q induces zero.
inline void swap_cone_properties(const ModelComplex& c) {
  expect(validate_complex(c).ok, "complex fails validation");
  auto cc = direct_sum(c, c);
  expect(validate_complex(cc).ok, "direct sum fails validation");
  const std::size_t n = c.generators().size();
  FilteredMorphism swap(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    swap.add(i, n + i, 0);
    swap.add(n + i, i, 0);
  }
  auto a2 = build_a_plus(cc, default_depth(cc));
  auto i0 = restrict_involution(a2, swap);
  auto cone = involutive_cone(a2, i0);
  auto hc = graded_homology(cone);
  auto h1 = graded_homology(build_a_plus(c, default_depth(c)));
  for (int r = h1.min_grading + 1; r <= h1.trust_max; ++r)
    expect(hc.dim(r) == h1.dim(r) + h1.dim(r - 1),
           "swap cone dimension mismatch in grading " + std::to_string(r));
  for (const auto& [r, q] : hc.q_maps) {
    if (r > hc.trust_max) continue;
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < q.cols(); ++j)
        expect(!q.get(i, j),
               "Q acts nontrivially on swap-cone homology in grading " +
                   std::to_string(r));
  }
}

inline std::vector<int> random_torsion(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 4);
  std::uniform_int_distribution<int> step(1, 3);
  int n = len(rng);
  std::vector<int> torsion;
  int at = 0;
  for (int k = 0; k < n; ++k) torsion.push_back(at += step(rng));
  return torsion;
}

inline ModelComplex random_thin(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> taus(-4, 4);
  std::uniform_int_distribution<int> sqs(0, 3);
  std::uniform_int_distribution<int> shift(1, 4);
  int tau = taus(rng);
  int squares = sqs(rng);
  std::vector<int> shifts;
  for (int k = 0; k < squares / 2; ++k) shifts.push_back(shift(rng));
  return build_thin_canonical(tau, squares, shifts);
}

// A direct sum of random blocks conjugated by a random filtered change of
// basis g = 1 + n with n grading-preserving and strictly filtration-
// decreasing (hence nilpotent, hence g invertible with ∂' = g ∂ g^{-1}
// still a legal filtered differential).
inline ModelComplex random_conjugated_sum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> blocks(1, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  auto block = [&rng, &kind]() {
    switch (kind(rng)) {
      case 0: return build_staircase(random_torsion(rng));
      case 1: return build_mirror_staircase(random_torsion(rng));
      default: return random_thin(rng);
    }
  };
  ModelComplex c = block();
  int extra = blocks(rng) - 1;
  for (int k = 0; k < extra; ++k) c = direct_sum(c, block());

  const auto& gens = c.generators();
  const std::size_t n = gens.size();

  // n_map[src] -> formal sum of U^k tgt, grading-preserving, strictly
  // filtration-decreasing in at least one direction
  FilteredMorphism nil(n);
  std::uniform_int_distribution<int> coin(0, 7);
  bool added = false;
  for (std::size_t src = 0; src < n; ++src)
    for (std::size_t tgt = 0; tgt < n; ++tgt) {
      if (src == tgt) continue;
      int dm = gens[tgt].maslov - gens[src].maslov;
      if (dm % 2 != 0) continue;
      int k = dm / 2;
      if (k < 0) continue;  // keep the conjugated differential inside F2[U]
      int di = gens[tgt].i - k - gens[src].i;
      int dj = gens[tgt].j - k - gens[src].j;
      if (di > 0 || dj > 0 || (di == 0 && dj == 0)) continue;
      if (coin(rng) != 0) continue;
      nil.add(src, tgt, k);
      added = true;
    }
  if (!added) return c;

  // g = 1 + nil; g^{-1} = 1 + nil + nil^2 + ... (nil is nilpotent because it
  // strictly decreases i + j)
  FilteredMorphism g = morphism_sum(FilteredMorphism::identity(n), nil);
  FilteredMorphism ginv = FilteredMorphism::identity(n);
  FilteredMorphism power = nil;
  for (std::size_t step = 0; step < n; ++step) {
    bool nonzero = false;
    for (std::size_t s = 0; s < n; ++s) nonzero = nonzero || !power.terms()[s].empty();
    if (!nonzero) break;
    ginv = morphism_sum(ginv, power);
    power = compose(power, nil);
  }
  FilteredMorphism dprime =
      compose(g, compose(differential_morphism(c), ginv));

  ModelComplex out(c.name() + "-conjugated");
  for (const auto& g2 : gens) out.add_generator(g2.name, g2.i, g2.j, g2.maslov);
  for (std::size_t src = 0; src < n; ++src)
    for (const auto& t : dprime.terms()[src]) out.add_term(src, t.target, t.upower);
  return out;
}

}  // namespace detail

inline std::vector<CheckResult> battery_properties(std::uint64_t seed) {
  std::vector<CheckResult> out;

  // exhaustive basis-change cross-check on small thin models
  for (int tau = -4; tau <= 4; ++tau)
    for (int squares = 0; squares <= 3; ++squares) {
      std::string name = "basis-change maps agree on thin tau=" +
                         std::to_string(tau) + " squares=" +
                         std::to_string(squares);
      detail::run_check(out, name, [tau, squares](std::ostringstream&) {
        auto c = build_thin_canonical(tau, squares);
        detail::expect(conjectural_sarkar_map(c) == canonical_sarkar_map(c),
                       "local formula differs from the canonical map");
      });
    }

  std::mt19937_64 rng(seed);
  for (int k = 0; k < 30; ++k) {
    auto torsion = detail::random_torsion(rng);
    detail::run_check(out, "staircase pipeline case " + std::to_string(k),
                      [&torsion](std::ostringstream&) {
                        detail::pipeline_properties(build_staircase(torsion));
                      });
  }
  for (int k = 0; k < 30; ++k) {
    auto torsion = detail::random_torsion(rng);
    detail::run_check(out, "mirror staircase pipeline case " + std::to_string(k),
                      [&torsion](std::ostringstream&) {
                        detail::pipeline_properties(
                            build_mirror_staircase(torsion));
                      });
  }
  for (int k = 0; k < 60; ++k) {
    auto c = detail::random_thin(rng);
    detail::run_check(out, "thin pipeline case " + std::to_string(k),
                      [&c](std::ostringstream&) {
                        detail::pipeline_properties(c);
                      });
  }
  for (int k = 0; k < 60; ++k) {
    auto c = detail::random_conjugated_sum(rng);
    detail::run_check(out, "conjugated sum case " + std::to_string(k),
                      [&c](std::ostringstream&) {
                        detail::swap_cone_properties(c);
                      });
  }
  return out;
}

// ---------------------------------------------------------------------------

inline Report make_verify_report(const std::string& battery,
                                 const std::vector<CheckResult>& results) {
  Report r;
  r.kind = "verify";
  r.data["battery"] = battery;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  std::size_t passed = 0;
  for (const auto& c : results) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["detail"] = c.detail;
    checks.push_back(std::move(j));
    if (c.pass) ++passed;
  }
  r.data["checks"] = std::move(checks);
  r.data["passed"] = passed;
  r.data["failed"] = results.size() - passed;
  return r;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace hfi

#endif  // HFI_VERIFY_HPP
