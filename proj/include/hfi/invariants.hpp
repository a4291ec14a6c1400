#pragma once

// Homology of truncated complexes, U-tower detection, and the correction-term
// pipeline: d-type invariants of large surgeries and the concordance triple
// (V_lower, V0, V_upper), plus the closed-form values for alternating knots
// and the cobordism obstruction helpers built on them.

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfi/cone.hpp"
#include "hfi/f2.hpp"
#include "hfi/involution.hpp"
#include "hfi/model_complex.hpp"

namespace hfi {

using Rational = boost::rational<long long>;

inline std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

struct NoTowerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StabilizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInvolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSingleTower : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SurgeryTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// Internal consistency violation: the computed homology does not have the
// structure the theory guarantees (usually a sign the input is not knot-like).
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultMargin = 3;

namespace detail {

// Row-echelon span with an attached coordinate vector per row, used to
// express cycles in the chosen homology basis (boundary rows carry zero
// coordinates, representative rows carry a unit coordinate).
class Expresser {
 public:
  Expresser() = default;
  void init(std::size_t ambient, std::size_t coord_width) {
    ambient_ = ambient;
    coord_width_ = coord_width;
  }

  // Insert v if independent of the current span; returns true when inserted.
  bool add(F2Vec v, F2Vec coord) {
    reduce(v, coord);
    if (v.is_zero()) return false;
    std::size_t p = v.first_set();
    std::size_t pos = 0;
    while (pos < rows_.size() && rows_[pos].first_set() < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    coords_.insert(coords_.begin() + static_cast<std::ptrdiff_t>(pos),
                   std::move(coord));
    return true;
  }

  // Coordinates of v over the span, or nullopt when v is outside it.
  std::optional<F2Vec> express(F2Vec v) const {
    F2Vec c(coord_width_);
    reduce(v, c);
    if (!v.is_zero()) return std::nullopt;
    return c;
  }

 private:
  void reduce(F2Vec& v, F2Vec& c) const {
    for (std::size_t idx = 0; idx < rows_.size(); ++idx) {
      std::size_t p = rows_[idx].first_set();
      if (p < v.size() && v.test(p)) {
        v ^= rows_[idx];
        c ^= coords_[idx];
      }
    }
  }

  std::size_t ambient_ = 0;
  std::size_t coord_width_ = 0;
  std::vector<F2Vec> rows_;
  std::vector<F2Vec> coords_;
};

}  // namespace detail

struct HomologySummary {
  struct Block {
    std::vector<std::size_t> elem_ids;        // ascending global indices
    std::map<std::size_t, std::size_t> pos;   // global index -> local position
    std::vector<F2Vec> reps;                  // cycle representatives
    detail::Expresser expr;                   // boundaries + representatives
  };

  int trust_max = 0;
  int min_grading = 0;
  int max_grading = 0;
  bool has_q = false;
  std::map<int, std::size_t> dims;   // one entry per grading with elements
  std::map<int, F2Matrix> u_maps;    // r -> induced U: H_r -> H_{r-2}
  std::map<int, F2Matrix> q_maps;    // r -> induced Q: H_r -> H_{r-1}
  std::map<int, Block> blocks;

  std::size_t dim(int r) const {
    auto it = dims.find(r);
    return it == dims.end() ? 0 : it->second;
  }
};

namespace detail {

// Induced map on homology of a grading-homogeneous chain map given by
// per-element target lists (parities).  Degree is the grading shift.
template <typename TargetsFn>
F2Matrix induced_from(const HomologySummary& h, TargetsFn&& targets, int r,
                      int degree) {
  std::size_t dom_dim = h.dim(r);
  std::size_t cod_dim = h.dim(r + degree);
  F2Matrix out(cod_dim, dom_dim);
  if (dom_dim == 0) return out;
  const auto& dom = h.blocks.at(r);
  auto cod_it = h.blocks.find(r + degree);
  for (std::size_t j = 0; j < dom_dim; ++j) {
    const F2Vec& rep = dom.reps[j];
    std::map<std::size_t, int> parity;
    for (std::size_t p = 0; p < dom.elem_ids.size(); ++p) {
      if (!rep.test(p)) continue;
      for (std::size_t tgt : targets(dom.elem_ids[p])) parity[tgt] ^= 1;
    }
    bool empty = true;
    for (const auto& [tgt, par] : parity)
      if (par) empty = false;
    if (empty) continue;
    if (cod_it == h.blocks.end())
      throw std::logic_error("induced image misses its grading block");
    const auto& cod = cod_it->second;
    F2Vec img(cod.elem_ids.size());
    for (const auto& [tgt, par] : parity) {
      if (!par) continue;
      auto pos = cod.pos.find(tgt);
      if (pos == cod.pos.end())
        throw std::logic_error("induced image element has the wrong grading");
      img.flip(pos->second);
    }
    auto coords = cod.expr.express(std::move(img));
    if (!coords) throw std::logic_error("induced image is not a cycle");
    for (std::size_t i = 0; i < cod_dim; ++i)
      if (coords->test(i)) out.set(i, j, true);
  }
  return out;
}

}  // namespace detail

inline HomologySummary graded_homology(const TruncatedComplex& t) {
  if (t.size() == 0) throw std::invalid_argument("empty truncation");
  HomologySummary h;
  h.trust_max = t.trust_max;
  h.has_q = t.has_q;

  std::map<int, std::vector<std::size_t>> bucket;
  for (std::size_t e = 0; e < t.size(); ++e) bucket[t.grading[e]].push_back(e);
  h.min_grading = bucket.begin()->first;
  h.max_grading = bucket.rbegin()->first;
  for (auto& [r, ids] : bucket) {
    HomologySummary::Block blk;
    blk.elem_ids = ids;
    for (std::size_t p = 0; p < ids.size(); ++p) blk.pos[ids[p]] = p;
    h.blocks.emplace(r, std::move(blk));
  }

  // local boundary matrices and their kernels
  std::map<int, std::vector<F2Vec>> kernels;
  for (auto& [r, blk] : h.blocks) {
    auto below = h.blocks.find(r - 1);
    std::size_t rows = below == h.blocks.end() ? 0 : below->second.elem_ids.size();
    F2Matrix d(rows, blk.elem_ids.size());
    for (std::size_t j = 0; j < blk.elem_ids.size(); ++j) {
      for (std::size_t tgt : t.boundary[blk.elem_ids[j]]) {
        if (below == h.blocks.end())
          throw std::logic_error("boundary image misses its grading block");
        d.flip(below->second.pos.at(tgt), j);
      }
    }
    kernels[r] = kernel_basis(d);
  }

  // representatives modulo boundaries, chosen greedily over the canonical
  // kernel basis; the expresser also records the boundary span
  for (auto& [r, blk] : h.blocks) {
    const auto& kern = kernels[r];
    blk.expr.init(blk.elem_ids.size(), kern.size());
    auto above = h.blocks.find(r + 1);
    if (above != h.blocks.end()) {
      for (std::size_t e : above->second.elem_ids) {
        F2Vec v(blk.elem_ids.size());
        for (std::size_t tgt : t.boundary[e]) v.flip(blk.pos.at(tgt));
        blk.expr.add(std::move(v), F2Vec(kern.size()));
      }
    }
    for (const F2Vec& kv : kern) {
      F2Vec coord(kern.size());
      coord.set(blk.reps.size());
      if (blk.expr.add(kv, std::move(coord))) blk.reps.push_back(kv);
    }
    h.dims[r] = blk.reps.size();
  }

  for (auto& [r, blk] : h.blocks) {
    h.u_maps.emplace(
        r, detail::induced_from(
               h,
               [&](std::size_t e) {
                 std::vector<std::size_t> out;
                 if (t.u_map[e]) out.push_back(*t.u_map[e]);
                 return out;
               },
               r, -2));
    if (t.has_q)
      h.q_maps.emplace(
          r, detail::induced_from(
                 h,
                 [&](std::size_t e) {
                   std::vector<std::size_t> out;
                   if (t.q_map[e]) out.push_back(*t.q_map[e]);
                   return out;
                 },
                 r, -1));
  }
  return h;
}

// Induced action on H_r of a grading-preserving chain self-map given by
// per-element target lists.
inline F2Matrix induced_endo(const TruncatedComplex&, const HomologySummary& h,
                             const std::vector<std::vector<std::size_t>>& f,
                             int r) {
  return detail::induced_from(
      h, [&](std::size_t e) -> const std::vector<std::size_t>& { return f[e]; },
      r, 0);
}

// ---------------------------------------------------------------------------
// Tower detection

enum class TowerMode { plain, q_image, non_q_image };

namespace detail {

// rank of the composite (optionally Q first, then U all the way) from grading
// d0 down into grading r.
inline std::size_t top_composite_rank(const HomologySummary& h, int r, int d0,
                                      bool through_q) {
  std::size_t dom = h.dim(d0);
  if (dom == 0) return 0;
  F2Matrix acc = F2Matrix::identity(dom);
  int g = d0;
  if (through_q) {
    acc = h.q_maps.at(d0);
    g = d0 - 1;
    if (acc.rows() == 0) return 0;
  }
  while (g > r) {
    if (h.dim(g) == 0) return 0;
    acc = h.u_maps.at(g).multiply(acc);
    g -= 2;
    if (acc.rows() == 0) return 0;
  }
  return rank(acc);
}

}  // namespace detail

// Rank of the eventual image (the U-divisible part) in grading r, measured as
// the image of the full composite from the top of the trust region.  Towers
// reach every grading of their parity inside the window, while a U-torsion
// chain contributes only when its top grading reaches the trust ceiling —
// and a chain that tall would change between truncation depths, which the
// stabilization check rejects.  A fixed step count cannot certify this:
// consecutive image ranks can agree and then drop again, because the drops
// happen exactly at chain tops, which need not sit at consecutive heights.
// `margin` is the minimum number of U-steps the window must leave above r;
// nullopt when it does not.
inline std::optional<std::size_t> stable_image_rank(const HomologySummary& h,
                                                    int r, int margin,
                                                    bool through_q) {
  int domain_parity = through_q ? (r + 1) : r;
  int d0 = h.trust_max;
  if ((d0 - domain_parity) % 2 != 0) --d0;
  if (d0 < r + 2 * margin + (through_q ? 1 : 0)) return std::nullopt;
  return detail::top_composite_rank(h, r, d0, through_q);
}

inline int tower_bottom(const HomologySummary& h, int margin, TowerMode mode) {
  if (margin < 1) throw std::invalid_argument("margin must be >= 1");
  if (mode != TowerMode::plain && !h.has_q)
    throw std::logic_error("complex has no Q action");
  for (int r = h.min_grading; r <= h.trust_max; ++r) {
    bool hit = false;
    if (mode == TowerMode::plain) {
      auto s = stable_image_rank(h, r, margin, false);
      if (!s) throw NoTowerError("trust region too shallow to certify a tower");
      hit = *s > 0;
    } else if (mode == TowerMode::q_image) {
      auto s = stable_image_rank(h, r, margin, true);
      if (!s) throw NoTowerError("trust region too shallow to certify a tower");
      hit = *s > 0;
    } else {
      auto sp = stable_image_rank(h, r, margin, false);
      auto sq = stable_image_rank(h, r, margin, true);
      if (!sp || !sq)
        throw NoTowerError("trust region too shallow to certify a tower");
      hit = *sp > *sq;
    }
    if (hit) return r;
  }
  throw NoTowerError("no tower in the trust region");
}

// ---------------------------------------------------------------------------
// Correction terms

struct Triple {
  int v_lower = 0;
  int v0 = 0;
  int v_upper = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::string to_string(const Triple& t) {
  return "(" + std::to_string(t.v_lower) + ", " + std::to_string(t.v0) + ", " +
         std::to_string(t.v_upper) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Triple& t) {
  return os << to_string(t);
}

struct CorrectionTerms {
  int d_a = 0;      // plain tower bottom of H(A region)
  int d_b = 0;      // plain tower bottom of H(B region)
  int d_lower = 0;  // (non-Q-image bottom of the involutive cone) - 1
  int d_upper = 0;  // Q-image bottom of the involutive cone
  int v_lower = 0;
  int v0 = 0;
  int v_upper = 0;
  std::map<int, std::size_t> reduced;  // nonzero reduced dims of the cone
  int depth = 0;

  Triple triple() const { return Triple{v_lower, v0, v_upper}; }
};

namespace detail {

inline CorrectionTerms correction_pass(const ModelComplex& c,
                                       const FilteredMorphism& iota, int depth,
                                       int margin) {
  CorrectionTerms out;
  out.depth = depth;

  auto a = build_a_plus(c, depth);
  auto b = build_b_plus(c, depth);
  auto ha = graded_homology(a);
  auto hb = graded_homology(b);
  out.d_a = tower_bottom(ha, margin, TowerMode::plain);
  out.d_b = tower_bottom(hb, margin, TowerMode::plain);
  if ((out.d_b - out.d_a) % 2 != 0)
    throw ComputationError("region tower bottoms have different parity");
  out.v0 = (out.d_b - out.d_a) / 2;

  auto i0 = restrict_involution(a, iota);
  auto cone = involutive_cone(a, i0);
  auto hc = graded_homology(cone);
  int nonq = tower_bottom(hc, margin, TowerMode::non_q_image);
  int qb = tower_bottom(hc, margin, TowerMode::q_image);
  out.d_lower = nonq - 1;
  out.d_upper = qb;
  if ((out.d_lower - out.d_a) % 2 != 0 || (out.d_upper - out.d_a) % 2 != 0)
    throw ComputationError("involutive tower bottoms break the parity rule");
  out.v_lower = out.v0 + (out.d_a - out.d_lower) / 2;
  out.v_upper = out.v0 + (out.d_a - out.d_upper) / 2;
  if (!(out.v_upper <= out.v0 && out.v0 <= out.v_lower && out.v0 >= 0))
    throw ComputationError("correction terms violate the inequality chain");

  // Reduced part by tower accounting: the cone homology is exactly two towers
  // (bottoms nonq and qb, of opposite parity) plus U-torsion.
  for (int r = hc.min_grading; r <= hc.trust_max; ++r) {
    long long d = static_cast<long long>(hc.dim(r));
    if (r >= nonq && (r - nonq) % 2 == 0) --d;
    if (r >= qb && (r - qb) % 2 == 0) --d;
    if (d < 0) throw ComputationError("tower accounting failed");
    if (d > 0) out.reduced[r] = static_cast<std::size_t>(d);
  }
  long long chi = 0;
  for (const auto& [r, d] : out.reduced)
    chi += (r % 2 == 0 ? 1 : -1) * static_cast<long long>(d);
  if (chi != (out.d_upper - out.d_lower) / 2)
    throw ComputationError("reduced Euler characteristic mismatch");
  return out;
}

}  // namespace detail

inline CorrectionTerms correction_terms(const ModelComplex& c,
                                        const FilteredMorphism& iota,
                                        std::optional<int> depth = std::nullopt,
                                        int margin = kDefaultMargin) {
  auto vr = validate_complex(c);
  if (!vr.ok) {
    std::string msg = "invalid model complex";
    for (const auto& issue : vr.issues) msg += "; " + issue;
    throw std::invalid_argument(msg);
  }
  auto ir = verify_involution(c, iota);
  if (!ir.ok()) {
    std::string msg = "involution checks failed";
    for (const auto& issue : ir.issues) msg += "; " + issue;
    throw InvalidInvolution(msg);
  }
  int n = depth.value_or(default_depth(c));
  auto first = detail::correction_pass(c, iota, n, margin);
  auto second = detail::correction_pass(c, iota, n + 2, margin);
  if (first.d_a != second.d_a || first.d_b != second.d_b ||
      first.d_lower != second.d_lower || first.d_upper != second.d_upper ||
      first.reduced != second.reduced)
    throw StabilizationFailure(
        "invariants changed between truncation depths " + std::to_string(n) +
        " and " + std::to_string(n + 2));
  return first;
}

inline CorrectionTerms correction_terms(const ModelComplex& c,
                                        std::optional<int> depth = std::nullopt,
                                        int margin = kDefaultMargin) {
  return correction_terms(c, involution_for(c), depth, margin);
}

// ---------------------------------------------------------------------------
// Surgery arithmetic

struct SurgeryReport {
  long long p = 0;
  Rational d, d_lower, d_upper;           // correction terms of the surgery
  Rational rev_d, rev_d_lower, rev_d_upper;  // same manifold, reversed
  int tower_nonq = 0;                     // bottoms of the involutive cone
  int tower_q = 0;
  CorrectionTerms terms;
};

inline SurgeryReport surgery_report(const ModelComplex& c,
                                    const FilteredMorphism& iota, long long p,
                                    std::optional<int> depth = std::nullopt,
                                    int margin = kDefaultMargin) {
  long long need = std::max<long long>(1, genus(c));
  if (p < need)
    throw SurgeryTooSmall("surgery coefficient " + std::to_string(p) +
                          " is below the required minimum " +
                          std::to_string(need));
  SurgeryReport r;
  r.p = p;
  r.terms = correction_terms(c, iota, depth, margin);
  Rational base(p - 1, 4);
  r.d = base - Rational(2 * r.terms.v0);
  r.d_lower = base - Rational(2 * r.terms.v_lower);
  r.d_upper = base - Rational(2 * r.terms.v_upper);
  // orientation reversal negates and swaps the involutive pair
  r.rev_d = -r.d;
  r.rev_d_lower = -r.d_upper;
  r.rev_d_upper = -r.d_lower;
  r.tower_nonq = r.terms.d_lower + 1;
  r.tower_q = r.terms.d_upper;
  return r;
}

inline SurgeryReport surgery_report(const ModelComplex& c, long long p,
                                    std::optional<int> depth = std::nullopt,
                                    int margin = kDefaultMargin) {
  return surgery_report(c, involution_for(c), p, depth, margin);
}

// ---------------------------------------------------------------------------
// Alternating knots: closed forms from (signature, Arf)

// Arf invariant of a thin canonical model with m staircase steps and r0
// squares, via the determinant 2m + 1 + 4*r0: Arf = 0 iff det = +-1 mod 8.
inline int arf_of_thin(int m, int r0) {
  if (m < 0 || r0 < 0) throw std::invalid_argument("negative thin parameters");
  int det = (2 * m + 1 + 4 * r0) % 8;
  return (det == 1 || det == 7) ? 0 : 1;
}

namespace detail {

inline void check_sigma_arf(int sigma, int arf) {
  if (sigma % 2 != 0)
    throw std::invalid_argument("signature must be even for alternating knots");
  if (arf != 0 && arf != 1) throw std::invalid_argument("Arf must be 0 or 1");
}

}  // namespace detail

// Smallest square count (0 or 1) whose thin model realizes the given Arf.
inline int thin_r0_for(int sigma, int arf) {
  detail::check_sigma_arf(sigma, arf);
  int m = std::abs(sigma / 2);
  return arf_of_thin(m, 0) == arf ? 0 : 1;
}

inline ModelComplex thin_model_for(int sigma, int arf) {
  return build_thin_canonical(-sigma / 2, thin_r0_for(sigma, arf));
}

inline Triple alternating_triple(int sigma, int arf) {
  detail::check_sigma_arf(sigma, arf);
  int tau = -sigma / 2;
  int m = std::abs(tau);
  int n = (m + 1) / 2;
  int r0 = thin_r0_for(sigma, arf);
  if (r0 % 2 == 0) {
    if (tau >= 0) return Triple{n, n, n};
    return Triple{0, 0, -n};
  }
  if (tau == 0) return Triple{1, 0, 0};
  if (tau > 0) {
    if (tau % 2 != 0) return Triple{n, n, n - 1};
    return Triple{n + 1, n, n};
  }
  if (m % 2 != 0) return Triple{0, 0, -n + 1};
  return Triple{0, 0, -n};
}

// ---------------------------------------------------------------------------
// Obstruction helpers

struct FroyshovBound {
  Rational bound;       // max rank of H^2 of a negative-definite spin filling
  bool obstructed = false;  // negative bound: no such filling at all
};

inline FroyshovBound froyshov_bound(const Rational& d_lower) {
  Rational b = Rational(4) * d_lower;
  return FroyshovBound{b, b < Rational(0)};
}

struct CobordismInput {
  Triple triple;
  int arf = 0;
  std::string name;
};

inline CobordismInput alternating_input(int sigma, int arf,
                                        std::string name = "") {
  CobordismInput in;
  in.triple = alternating_triple(sigma, arf);
  in.arf = arf;
  in.name = name.empty() ? "sigma=" + std::to_string(sigma) +
                               ",arf=" + std::to_string(arf)
                         : std::move(name);
  return in;
}

struct CobordismResult {
  bool obstructed = false;
  std::vector<std::string> reasons;
};

// Can the p-surgeries on the two knots be Z2-homology cobordant?  The
// correction-term triples must agree (they are cobordism invariants of the
// surgery) and so must the Arf invariants (Rokhlin: mu = (1-p)/8 + Arf).
inline CobordismResult cobordism_check(const CobordismInput& a,
                                       const CobordismInput& b, long long p) {
  if (p < 1 || p % 2 == 0)
    throw std::invalid_argument("surgery coefficient must be odd and positive");
  CobordismResult r;
  if (!(a.triple == b.triple))
    r.reasons.push_back("correction-term triples differ: " +
                        to_string(a.triple) + " vs " + to_string(b.triple));
  if (a.arf != b.arf)
    r.reasons.push_back(
        "Arf invariants differ, so the Rokhlin invariants of the surgeries "
        "differ");
  r.obstructed = !r.reasons.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Absolute grading normalization

// Shift all Maslov gradings by one constant so the single tower of the B
// region bottoms out in grading zero.
inline ModelComplex normalize_maslov(const ModelComplex& c,
                                     std::optional<int> depth = std::nullopt) {
  auto vr = validate_complex(c);
  if (!vr.ok) {
    std::string msg = "invalid model complex";
    for (const auto& issue : vr.issues) msg += "; " + issue;
    throw std::invalid_argument(msg);
  }
  int n = depth.value_or(default_depth(c));
  auto b = build_b_plus(c, n);
  auto h = graded_homology(b);
  int bottom = tower_bottom(h, kDefaultMargin, TowerMode::plain);
  for (int r = h.min_grading; r <= h.trust_max; ++r) {
    std::size_t expect = (r >= bottom && (r - bottom) % 2 == 0) ? 1 : 0;
    if (h.dim(r) != expect)
      throw NotSingleTower("B-region homology is not a single tower");
  }
  if (bottom == 0) return c;
  ModelComplex out(c.name());
  for (const auto& g : c.generators())
    out.add_generator(g.name, g.i, g.j, g.maslov - bottom);
  for (std::size_t s = 0; s < c.generators().size(); ++s)
    for (const auto& term : c.differential()[s])
      out.add_term(s, term.target, term.upower);
  out.set_provenance(c.provenance());
  if (c.tau()) out.set_tau(*c.tau());
  out.set_torsion(c.torsion());
  return out;
}

}  // namespace hfi
