#ifndef HFI_INVOLUTION_HPP
#define HFI_INVOLUTION_HPP

// U-equivariant endomorphisms of a model complex, given termwise on
// generators as sums of U^k · target with k ∈ ℤ (conjugation maps genuinely
// need U^{-1} terms). Provides the built-in involutions of the staircase
// and thin families, the Sarkar basis-change map in both its canonical and
// local-formula forms, and the validator that checks a candidate involution
// for the chain-map, grading, skew-filtration and square-equals-Sarkar
// conditions — the last one exactly or up to an explicitly solved homotopy.

#include <algorithm>
#include <cassert>

#include "hfi/f2.hpp"
#include "hfi/model_complex.hpp"

namespace hfi {

class SarkarFormulaError : public std::runtime_error {
 public:
  explicit SarkarFormulaError(const std::string& what) : std::runtime_error(what) {}
};

struct MorTerm {
  std::size_t target = 0;
  int upower = 0;
  friend auto operator<=>(const MorTerm&, const MorTerm&) = default;
};

// Formal F2-sum of U^k · generator, kept sorted and duplicate-free.
using FormalSum = std::vector<MorTerm>;

inline void sum_xor(FormalSum& s, MorTerm t) {
  auto it = std::lower_bound(s.begin(), s.end(), t);
  if (it != s.end() && *it == t)
    s.erase(it);
  else
    s.insert(it, t);
}

class FilteredMorphism {
 public:
  FilteredMorphism() = default;
  explicit FilteredMorphism(std::size_t n) : terms_(n) {}

  static FilteredMorphism identity(std::size_t n) {
    FilteredMorphism f(n);
    for (std::size_t g = 0; g < n; ++g) f.add(g, g, 0);
    return f;
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<FormalSum>& terms() const { return terms_; }

  void add(std::size_t src, std::size_t tgt, int upower) {
    sum_xor(terms_[src], MorTerm{tgt, upower});
  }
  void clear(std::size_t src) { terms_[src].clear(); }

  // Applies the map to a formal sum (U-equivariantly).
  FormalSum apply(const FormalSum& v) const {
    FormalSum out;
    for (const auto& t : v)
      for (const auto& m : terms_[t.target])
        sum_xor(out, MorTerm{m.target, m.upower + t.upower});
    return out;
  }

  friend bool operator==(const FilteredMorphism& a, const FilteredMorphism& b) {
    return a.terms_ == b.terms_;
  }

 private:
  std::vector<FormalSum> terms_;
};

// f ∘ g as term tables.
inline FilteredMorphism compose(const FilteredMorphism& f, const FilteredMorphism& g) {
  FilteredMorphism out(g.size());
  for (std::size_t src = 0; src < g.size(); ++src)
    for (const auto& t1 : g.terms()[src])
      for (const auto& t2 : f.terms()[t1.target])
        out.add(src, t2.target, t1.upower + t2.upower);
  return out;
}

inline FilteredMorphism morphism_sum(const FilteredMorphism& a, const FilteredMorphism& b) {
  FilteredMorphism out = a;
  for (std::size_t src = 0; src < b.size(); ++src)
    for (const auto& t : b.terms()[src]) out.add(src, t.target, t.upower);
  return out;
}

// The differential, viewed as a term table (a degree -1 "morphism").
inline FilteredMorphism differential_morphism(const ModelComplex& c) {
  FilteredMorphism d(c.size());
  for (std::size_t src = 0; src < c.size(); ++src)
    for (const auto& t : c.differential()[src]) d.add(src, t.target, t.upower);
  return d;
}

// ---------------------------------------------------------------------------
// built-in involutions

inline FilteredMorphism standard_staircase_involution(const ModelComplex& c) {
  if (c.provenance() != Provenance::staircase &&
      c.provenance() != Provenance::mirror_staircase)
    throw std::invalid_argument("standard_staircase_involution needs a staircase");
  FilteredMorphism f(c.size());
  f.add(*c.find("x0"), *c.find("x0"), 0);
  for (std::size_t s = 1; s <= c.torsion().size(); ++s) {
    auto one = *c.find("x" + std::to_string(s) + "_1");
    auto two = *c.find("x" + std::to_string(s) + "_2");
    f.add(one, two, 0);
    f.add(two, one, 0);
  }
  return f;
}

namespace detail {

// The involution on one mirrored pair of squares, written into f:
//   a -> a', b -> c', c -> b', e -> e',  a' -> a+e, b' -> c, c' -> b, e' -> e.
inline void add_pair_terms(FilteredMorphism& f, const SquareInfo& sq,
                           const SquareInfo& sqp) {
  f.add(sq.a, sqp.a, 0);
  f.add(sq.b, sqp.c, 0);
  f.add(sq.c, sqp.b, 0);
  f.add(sq.e, sqp.e, 0);
  f.add(sqp.a, sq.a, 0);
  f.add(sqp.a, sq.e, 0);
  f.add(sqp.b, sq.c, 0);
  f.add(sqp.c, sq.b, 0);
  f.add(sqp.e, sq.e, 0);
}

}  // namespace detail

inline FilteredMorphism standard_square_pair_involution(const ModelComplex& c,
                                                        std::size_t square_index) {
  if (square_index >= c.squares().size() || !c.squares()[square_index].partner)
    throw std::invalid_argument("square index does not name a mirrored pair");
  const SquareInfo& sq = c.squares()[square_index];
  const SquareInfo& sqp = c.squares()[*sq.partner];
  FilteredMorphism f = FilteredMorphism::identity(c.size());
  for (std::size_t g : {sq.a, sq.b, sq.c, sq.e, sqp.a, sqp.b, sqp.c, sqp.e})
    f.clear(g);
  detail::add_pair_terms(f, sq, sqp);
  return f;
}

// The involution of a thin canonical model: the staircase swap plus the
// standard pair maps, with corrections coupling the staircase to the
// diagonal square when one is present. The correction pattern depends only
// on the sign and parity of tau.
inline FilteredMorphism thin_involution(const ModelComplex& c) {
  if (c.provenance() != Provenance::thin)
    throw std::invalid_argument("thin_involution needs a thin canonical model");
  int tau = *c.tau();
  std::size_t m = c.torsion().size();
  FilteredMorphism f(c.size());

  auto x = [&](std::size_t s, int side) {
    return *c.find(s == 0 ? "x0" : "x" + std::to_string(s) + "_" + std::to_string(side));
  };

  const SquareInfo* diag = nullptr;
  for (std::size_t k = 0; k < c.squares().size(); ++k) {
    const SquareInfo& sq = c.squares()[k];
    if (sq.diagonal)
      diag = &sq;
    else if (*sq.partner > k)
      detail::add_pair_terms(f, sq, c.squares()[*sq.partner]);
  }

  // staircase swap
  for (std::size_t s = 1; s <= m; ++s) {
    f.add(x(s, 1), x(s, 2), 0);
    f.add(x(s, 2), x(s, 1), 0);
  }

  if (!diag) {
    f.add(x(0, 1), x(0, 1), 0);
    return f;
  }

  // diagonal square present: a -> a + x0, x0 -> x0 + e, e -> e
  f.add(diag->a, diag->a, 0);
  f.add(diag->a, x(0, 1), 0);
  f.add(x(0, 1), x(0, 1), 0);
  f.add(x(0, 1), diag->e, 0);
  f.add(diag->e, diag->e, 0);

  bool odd = m % 2;
  if (m == 0) {
    // figure-eight pattern: b and c swap
    f.add(diag->b, diag->c, 0);
    f.add(diag->c, diag->b, 0);
  } else if (tau > 0 && odd) {
    // b -> c + x1_2, c -> b + x1_1 (all terms live at the swapped cell)
    f.add(diag->b, diag->c, 0);
    f.add(diag->b, x(1, 2), 0);
    f.add(diag->c, diag->b, 0);
    f.add(diag->c, x(1, 1), 0);
  } else if (tau > 0 && !odd) {
    // the correction moves up to the staircase: x1 picks up U^{-1} b / c
    f.add(diag->b, diag->c, 0);
    f.add(diag->c, diag->b, 0);
    f.add(x(1, 1), diag->c, -1);
    f.add(x(1, 2), diag->b, -1);
  } else if (tau < 0 && odd) {
    // mirror of the previous case; x1_1 is the i-high branch, so its
    // correction runs through b
    f.add(diag->b, diag->c, 0);
    f.add(diag->c, diag->b, 0);
    f.add(x(1, 1), diag->b, -1);
    f.add(x(1, 2), diag->c, -1);
  } else {  // tau < 0, even
    // b -> c + x1_1, c -> b + x1_2 (x1_1 shares the cell (0,-1) with c)
    f.add(diag->b, diag->c, 0);
    f.add(diag->b, x(1, 1), 0);
    f.add(diag->c, diag->b, 0);
    f.add(diag->c, x(1, 2), 0);
  }
  return f;
}

// Dispatch: the built-in involution for a builder-produced complex.
inline FilteredMorphism involution_for(const ModelComplex& c) {
  switch (c.provenance()) {
    case Provenance::staircase:
    case Provenance::mirror_staircase:
      return standard_staircase_involution(c);
    case Provenance::thin:
      return thin_involution(c);
    case Provenance::user:
      break;
  }
  throw std::invalid_argument("no built-in involution for user-supplied complexes");
}

// ---------------------------------------------------------------------------
// Sarkar basis-change map

// Canonical form: identity on staircases; identity + (a -> e) on each
// square of a thin model.
inline FilteredMorphism canonical_sarkar_map(const ModelComplex& c) {
  switch (c.provenance()) {
    case Provenance::staircase:
    case Provenance::mirror_staircase:
      return FilteredMorphism::identity(c.size());
    case Provenance::thin: {
      FilteredMorphism f = FilteredMorphism::identity(c.size());
      for (const auto& sq : c.squares()) f.add(sq.a, sq.e, 0);
      return f;
    }
    case Provenance::user:
      break;
  }
  throw std::invalid_argument("canonical Sarkar map needs a builder-produced complex");
}

// Local formula: 1 + U^{-1} (sum of odd-i-drop pieces) ∘ (sum of odd-j-drop
// pieces), where the (i,j)-drop of a differential term x -> U^k y is
// (i(x) - i(y) + k, j(x) - j(y) + k). Fails when the composite would need a
// negative U-power on a stored generator.
inline FilteredMorphism conjectural_sarkar_map(const ModelComplex& c) {
  const auto& gens = c.generators();
  FilteredMorphism odd_i(c.size()), odd_j(c.size());
  for (std::size_t src = 0; src < c.size(); ++src)
    for (const auto& t : c.differential()[src]) {
      int di = gens[src].i - (gens[t.target].i - t.upower);
      int dj = gens[src].j - (gens[t.target].j - t.upower);
      if (di % 2) odd_i.add(src, t.target, t.upower);
      if (dj % 2) odd_j.add(src, t.target, t.upower);
    }
  FilteredMorphism f = FilteredMorphism::identity(c.size());
  FilteredMorphism comp = compose(odd_i, odd_j);
  for (std::size_t src = 0; src < c.size(); ++src)
    for (const auto& t : comp.terms()[src]) {
      if (t.upower - 1 < 0)
        throw SarkarFormulaError(
            "local Sarkar formula produced U^{-1} on generator " +
            gens[t.target].name);
      f.add(src, t.target, t.upower - 1);
    }
  return f;
}

// ---------------------------------------------------------------------------
// validation

enum class SquareStatus { exact, homotopic, failed };

struct InvolutionReport {
  bool chain_map = false;
  bool maslov_ok = false;
  bool skew_ok = false;
  bool square_filtered = false;   // iota^2 obeys the plain (non-skew) bounds
  bool homotopy_filtered = false; // informational, when a homotopy was found
  SquareStatus square_status = SquareStatus::failed;
  std::vector<std::string> issues;

  bool ok() const {
    return chain_map && maslov_ok && skew_ok && square_status != SquareStatus::failed;
  }
};

namespace detail {

// Solves d∘H + H∘d = rhs for a U-equivariant degree +1 map H given by
// unknown generator-to-generator coefficients (the U-power of each
// potential term is pinned by the gradings, so the system is finite).
// Returns the term table of H, or nullopt.
inline std::optional<FilteredMorphism> solve_homotopy(const ModelComplex& c,
                                                      const FilteredMorphism& rhs) {
  const auto& gens = c.generators();
  std::size_t n = c.size();
  // variables: pairs (x,y) with M(y) ≡ M(x)+1 (mod 2)
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  std::vector<std::vector<std::size_t>> var_at(n, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t xg = 0; xg < n; ++xg)
    for (std::size_t y = 0; y < n; ++y)
      if (((gens[y].maslov - gens[xg].maslov - 1) % 2) == 0) {
        var_at[xg][y] = vars.size();
        vars.emplace_back(xg, y);
      }
  auto upower_of = [&](std::size_t xg, std::size_t y) {
    return (gens[y].maslov - gens[xg].maslov - 1) / 2;
  };
  // equations: pairs (x,z) with M(z) ≡ M(x) (mod 2)
  std::vector<std::pair<std::size_t, std::size_t>> eqs;
  std::vector<std::vector<std::size_t>> eq_at(n, std::vector<std::size_t>(n, SIZE_MAX));
  for (std::size_t xg = 0; xg < n; ++xg)
    for (std::size_t z = 0; z < n; ++z)
      if (((gens[z].maslov - gens[xg].maslov) % 2) == 0) {
        eq_at[xg][z] = eqs.size();
        eqs.emplace_back(xg, z);
      }
  auto eq_upower = [&](std::size_t xg, std::size_t z) {
    return (gens[z].maslov - gens[xg].maslov) / 2;
  };

  F2Matrix a(eqs.size(), vars.size());
  F2Vec b(eqs.size());
  // d∘H: var (x,y) feeds equation (x,t) through each term y -> U^k t
  for (std::size_t v = 0; v < vars.size(); ++v) {
    auto [xg, y] = vars[v];
    for (const auto& t : c.differential()[y]) {
      std::size_t e = eq_at[xg][t.target];
      if (e == SIZE_MAX) continue;
      if (upower_of(xg, y) + t.upower == eq_upower(xg, t.target)) a.flip(e, v);
    }
  }
  // H∘d: equation (x,y) receives var (u,y) for each term x -> U^k u
  for (std::size_t xg = 0; xg < n; ++xg)
    for (const auto& t : c.differential()[xg]) {
      std::size_t u = t.target;
      for (std::size_t y = 0; y < n; ++y) {
        std::size_t v = var_at[u][y];
        std::size_t e = eq_at[xg][y];
        if (v == SIZE_MAX || e == SIZE_MAX) continue;
        if (t.upower + upower_of(u, y) == eq_upower(xg, y)) a.flip(e, v);
      }
    }
  for (std::size_t xg = 0; xg < n; ++xg)
    for (const auto& t : rhs.terms()[xg]) {
      std::size_t e = eq_at[xg][t.target];
      if (e == SIZE_MAX) return std::nullopt;  // grading parity mismatch
      if (t.upower != eq_upower(xg, t.target)) return std::nullopt;
      b.flip(e);
    }

  auto sol = solve_linear(a, b);
  if (!sol) return std::nullopt;
  FilteredMorphism h(n);
  for (std::size_t v = 0; v < vars.size(); ++v)
    if (sol->test(v)) {
      auto [xg, y] = vars[v];
      h.add(xg, y, upower_of(xg, y));
    }
  return h;
}

}  // namespace detail

// Checks a candidate involution: chain map, Maslov preservation, skew
// filtration bounds, and iota^2 = Sarkar map (exactly, else up to homotopy).
inline InvolutionReport verify_involution(const ModelComplex& c,
                                          const FilteredMorphism& iota) {
  InvolutionReport rep;
  const auto& gens = c.generators();

  rep.maslov_ok = true;
  rep.skew_ok = true;
  for (std::size_t src = 0; src < c.size(); ++src)
    for (const auto& t : iota.terms()[src]) {
      const Generator& s = gens[src];
      const Generator& g = gens[t.target];
      if (g.maslov - 2 * t.upower != s.maslov) {
        rep.maslov_ok = false;
        rep.issues.push_back("grading violation: " + s.name + " -> U^" +
                             std::to_string(t.upower) + " " + g.name);
      }
      if (g.i - t.upower > s.j || g.j - t.upower > s.i) {
        rep.skew_ok = false;
        rep.issues.push_back("skew filtration violation: " + s.name + " -> U^" +
                             std::to_string(t.upower) + " " + g.name);
      }
    }

  FilteredMorphism d = differential_morphism(c);
  rep.chain_map = compose(iota, d) == compose(d, iota);
  if (!rep.chain_map) rep.issues.push_back("iota does not commute with the differential");

  FilteredMorphism square = compose(iota, iota);
  rep.square_filtered = true;
  for (std::size_t src = 0; src < c.size(); ++src)
    for (const auto& t : square.terms()[src]) {
      const Generator& s = gens[src];
      const Generator& g = gens[t.target];
      if (g.i - t.upower > s.i || g.j - t.upower > s.j) {
        rep.square_filtered = false;
        rep.issues.push_back("iota^2 breaks the filtration bounds at " + s.name);
      }
    }

  FilteredMorphism sigma = c.provenance() == Provenance::user
                               ? conjectural_sarkar_map(c)
                               : canonical_sarkar_map(c);
  if (square == sigma) {
    rep.square_status = SquareStatus::exact;
  } else {
    FilteredMorphism rhs = morphism_sum(square, sigma);
    auto h = detail::solve_homotopy(c, rhs);
    if (h) {
      rep.square_status = SquareStatus::homotopic;
      rep.homotopy_filtered = true;
      for (std::size_t src = 0; src < c.size(); ++src)
        for (const auto& t : h->terms()[src])
          if (gens[t.target].i - t.upower > gens[src].i ||
              gens[t.target].j - t.upower > gens[src].j)
            rep.homotopy_filtered = false;
      // re-check the solved homotopy by direct substitution
      FilteredMorphism check =
          morphism_sum(compose(d, *h), compose(*h, d));
      if (!(check == rhs)) {
        rep.square_status = SquareStatus::failed;
        rep.issues.push_back("internal error: homotopy verification failed");
      }
    } else {
      rep.square_status = SquareStatus::failed;
      rep.issues.push_back("iota^2 is not chain homotopic to the Sarkar map");
    }
  }
  return rep;
}

}  // namespace hfi

#endif
