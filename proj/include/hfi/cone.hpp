#pragma once

// Finite U-power truncations of a model complex, the two surgery regions
// (A = "max(i,j) >= 0" and B = "i >= 0"), and the mapping cone that glues a
// complex to itself along 1 + involution.
//
// An element of a truncation is a formal power U^k x of a generator x.  The
// window is cut by grading, not by a uniform bound on k: we keep U^k x
// exactly when its grading M(x) - 2k stays at or below a top value
// window_top = (max generator grading) + 2 * depth.  A grading cut is closed
// under every grading-preserving or grading-decreasing map -- in particular
// under involutions that carry negative U-powers -- so boundaries, restricted
// involutions and cones all square/commute exactly instead of only up to
// window-edge noise.  Gradings at or below trust_max are unaffected by the
// cut and agree with the full (infinite) complex.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hfi/f2.hpp"
#include "hfi/involution.hpp"
#include "hfi/model_complex.hpp"

namespace hfi {

struct TruncElem {
  std::size_t gen = 0;  // generator index in the source model complex
  int k = 0;            // U-power; negative powers live above the base
  bool q = false;       // true for the Q-copy inside an involutive cone
};

class TruncatedComplex {
 public:
  std::vector<TruncElem> elems;
  std::vector<int> grading;                          // per element
  std::vector<std::vector<std::size_t>> boundary;    // sorted target indices
  std::vector<std::optional<std::size_t>> u_map;     // U action, or zero
  std::vector<std::optional<std::size_t>> q_map;     // Q action (cones only)
  bool has_q = false;

  std::vector<std::string> gen_names;  // copied from the model, for reports
  std::vector<int> k_max_by_gen;       // region ceiling per generator
  int window_top = 0;   // largest grading kept by the cut
  int trust_max = 0;    // gradings <= trust_max agree with the full complex

  std::size_t size() const { return elems.size(); }

  std::optional<std::size_t> find(std::size_t gen, int k, bool q) const {
    auto it = index_.find(std::make_tuple(gen, k, q));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void register_elem(std::size_t gen, int k, bool q, int grading_value) {
    index_[std::make_tuple(gen, k, q)] = elems.size();
    elems.push_back(TruncElem{gen, k, q});
    grading.push_back(grading_value);
  }

  std::string label(std::size_t e) const {
    std::string out;
    if (elems[e].q) out += "Q.";
    if (elems[e].k != 0)
      out += "U^" + std::to_string(elems[e].k) + ".";
    out += gen_names[elems[e].gen];
    return out;
  }

 private:
  std::map<std::tuple<std::size_t, int, bool>, std::size_t> index_;
};

inline int default_depth(const ModelComplex& c) { return diameter(c) + 6; }

namespace detail {

inline int ceil_half(int a) { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }

template <typename KMax>
TruncatedComplex build_region(const ModelComplex& c, int depth, KMax k_max) {
  if (depth < 1) throw std::invalid_argument("truncation depth must be >= 1");
  const auto& gens = c.generators();
  if (gens.empty()) throw std::invalid_argument("empty complex");

  int max_m = gens[0].maslov;
  for (const auto& g : gens) max_m = std::max(max_m, g.maslov);

  TruncatedComplex t;
  t.window_top = max_m + 2 * depth;
  t.trust_max = t.window_top - diameter(c) - 2;
  t.gen_names.reserve(gens.size());
  t.k_max_by_gen.reserve(gens.size());
  for (const auto& g : gens) {
    t.gen_names.push_back(g.name);
    t.k_max_by_gen.push_back(k_max(g));
  }

  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    // Smallest power still inside the grading window; largest allowed by the
    // region.  The range can be empty for generators far below the top.
    int k_min = ceil_half(gens[gi].maslov - t.window_top);
    for (int k = k_min; k <= t.k_max_by_gen[gi]; ++k)
      t.register_elem(gi, k, false, gens[gi].maslov - 2 * k);
  }

  t.boundary.resize(t.size());
  t.u_map.resize(t.size());
  for (std::size_t e = 0; e < t.size(); ++e) {
    std::size_t gi = t.elems[e].gen;
    int k = t.elems[e].k;
    for (const auto& term : c.differential()[gi]) {
      int k2 = k + static_cast<int>(term.upower);
      if (k2 > t.k_max_by_gen[term.target]) continue;  // leaves the region
      auto tgt = t.find(term.target, k2, false);
      if (!tgt)
        throw std::logic_error("truncation window dropped an in-region term");
      t.boundary[e].push_back(*tgt);
    }
    std::sort(t.boundary[e].begin(), t.boundary[e].end());
    if (k + 1 <= t.k_max_by_gen[gi]) t.u_map[e] = t.find(gi, k + 1, false);
  }
  return t;
}

}  // namespace detail

// Region A: U^k x survives while k <= max(i, j).  Its degree-zero part is the
// large-surgery complex whose homology carries d.
inline TruncatedComplex build_a_plus(const ModelComplex& c, int depth) {
  return detail::build_region(
      c, depth, [](const Generator& g) { return std::max(g.i, g.j); });
}

// Region B: U^k x survives while k <= i.  Its homology is a single tower for
// any valid model complex and anchors the normalization.
inline TruncatedComplex build_b_plus(const ModelComplex& c, int depth) {
  return detail::build_region(c, depth,
                              [](const Generator& g) { return g.i; });
}

// The natural projection from region A onto region B: identity on elements
// with i - k >= 0, zero on the rest.  Entry e maps a-element e to a b-element
// or to nothing.
inline std::vector<std::optional<std::size_t>> v0_projection(
    const TruncatedComplex& a, const TruncatedComplex& b) {
  if (a.window_top != b.window_top)
    throw std::invalid_argument("regions built at different depths");
  std::vector<std::optional<std::size_t>> out(a.size());
  for (std::size_t e = 0; e < a.size(); ++e)
    out[e] = b.find(a.elems[e].gen, a.elems[e].k, false);
  return out;
}

// Restrict a filtered morphism of the model complex to a truncated region,
// dropping the terms that exit the region (quotient semantics).  Terms never
// exit through the window top: the morphism preserves grading and the window
// is a grading cut.
inline std::vector<std::vector<std::size_t>> restrict_involution(
    const TruncatedComplex& a, const FilteredMorphism& f) {
  std::vector<std::vector<std::size_t>> out(a.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    std::size_t gi = a.elems[e].gen;
    int k = a.elems[e].k;
    for (const auto& term : f.terms()[gi]) {
      int k2 = k + term.upower;
      if (k2 > a.k_max_by_gen[term.target]) continue;
      auto tgt = a.find(term.target, k2, false);
      if (!tgt)
        throw std::logic_error(
            "restricted involution left the grading window");
      out[e].push_back(*tgt);
    }
    std::sort(out[e].begin(), out[e].end());
  }
  return out;
}

// Mapping cone of 1 + iota0 on a truncated region.  The base copy is shifted
// up by one in grading; the Q-copy keeps the region grading.  The boundary is
// lower triangular: d(base e) = base d(e) + Q((1 + iota0)(e)), d(Q e) = Q d(e).
inline TruncatedComplex involutive_cone(
    const TruncatedComplex& a,
    const std::vector<std::vector<std::size_t>>& iota0) {
  if (iota0.size() != a.size())
    throw std::invalid_argument("involution size mismatch");
  TruncatedComplex t;
  t.has_q = true;
  t.gen_names = a.gen_names;
  t.k_max_by_gen = a.k_max_by_gen;
  t.window_top = a.window_top + 1;
  t.trust_max = a.trust_max;

  const std::size_t n = a.size();
  for (std::size_t e = 0; e < n; ++e)
    t.register_elem(a.elems[e].gen, a.elems[e].k, false, a.grading[e] + 1);
  for (std::size_t e = 0; e < n; ++e)
    t.register_elem(a.elems[e].gen, a.elems[e].k, true, a.grading[e]);

  t.boundary.resize(2 * n);
  t.u_map.resize(2 * n);
  t.q_map.resize(2 * n);
  for (std::size_t e = 0; e < n; ++e) {
    // base copy
    t.boundary[e] = a.boundary[e];
    std::vector<std::size_t> one_plus_iota{e};
    for (std::size_t tgt : iota0[e]) one_plus_iota.push_back(tgt);
    std::sort(one_plus_iota.begin(), one_plus_iota.end());
    // cancel duplicated entries mod 2 (the fixed part of the involution)
    std::vector<std::size_t> reduced;
    for (std::size_t i = 0; i < one_plus_iota.size();) {
      std::size_t j = i;
      while (j < one_plus_iota.size() && one_plus_iota[j] == one_plus_iota[i])
        ++j;
      if ((j - i) % 2 == 1) reduced.push_back(one_plus_iota[i]);
      i = j;
    }
    for (std::size_t tgt : reduced) t.boundary[e].push_back(n + tgt);
    std::sort(t.boundary[e].begin(), t.boundary[e].end());
    if (a.u_map[e]) t.u_map[e] = *a.u_map[e];
    t.q_map[e] = n + e;
    // Q copy
    t.boundary[n + e].reserve(a.boundary[e].size());
    for (std::size_t tgt : a.boundary[e]) t.boundary[n + e].push_back(n + tgt);
    if (a.u_map[e]) t.u_map[n + e] = n + *a.u_map[e];
  }
  return t;
}

}  // namespace hfi
