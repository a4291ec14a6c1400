#ifndef HFI_MODEL_COMPLEX_HPP
#define HFI_MODEL_COMPLEX_HPP

// Finite bifiltered model complexes for knots: generators carry a position
// (i,j) in the plane and a Maslov grading; differentials carry a U-power.
// The full invariance package only ever sees the model through U-translates
// U^k·x sitting at (i-k, j-k) with grading M-2k, so the model stays finite
// while standing in for the whole infinite complex.
//
// Builders produce three families:
//   * staircases (the complexes of L-space knots, parametrized by the
//     torsion sequence 0 < n_1 < ... < n_m),
//   * their mirrors,
//   * thin canonical models: a step-length-one (anti)staircase plus a
//     number of length-one square summands.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfi {

class NotLSpaceForm : public std::runtime_error {
 public:
  explicit NotLSpaceForm(const std::string& what) : std::runtime_error(what) {}
};

struct Generator {
  std::string name;
  int i = 0;
  int j = 0;
  int maslov = 0;
};

struct DiffTerm {
  std::size_t target = 0;
  int upower = 0;  // contributes U^upower · target
};

enum class Provenance { staircase, mirror_staircase, thin, user };

// Book-keeping for a square summand of a thin model: the four generators
// and, for off-diagonal squares, the index of the mirrored partner square.
struct SquareInfo {
  std::size_t a = 0, b = 0, c = 0, e = 0;
  bool diagonal = false;
  std::optional<std::size_t> partner;  // index into squares()
};

class ModelComplex {
 public:
  explicit ModelComplex(std::string name = "complex") : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  const std::vector<std::vector<DiffTerm>>& differential() const { return diff_; }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t add_generator(const std::string& name, int i, int j, int maslov) {
    gens_.push_back(Generator{name, i, j, maslov});
    diff_.emplace_back();
    // first occurrence wins; duplicates are caught by validate_complex
    index_.emplace(name, gens_.size() - 1);
    return gens_.size() - 1;
  }

  void add_term(std::size_t src, std::size_t tgt, int upower) {
    diff_[src].push_back(DiffTerm{tgt, upower});
  }
  void add_term(const std::string& src, const std::string& tgt, int upower) {
    auto s = find(src), t = find(tgt);
    if (!s || !t) throw std::invalid_argument("add_term: unknown generator");
    add_term(*s, *t, upower);
  }

  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }
  const std::optional<int>& tau() const { return tau_; }
  void set_tau(int t) { tau_ = t; }
  const std::vector<int>& torsion() const { return torsion_; }
  void set_torsion(std::vector<int> t) { torsion_ = std::move(t); }
  const std::vector<SquareInfo>& squares() const { return squares_; }
  void add_square(SquareInfo s) { squares_.push_back(s); }

 private:
  std::string name_;
  std::vector<Generator> gens_;
  std::vector<std::vector<DiffTerm>> diff_;
  std::map<std::string, std::size_t> index_;
  Provenance provenance_ = Provenance::user;
  std::optional<int> tau_;
  std::vector<int> torsion_;
  std::vector<SquareInfo> squares_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;

  void fail(std::string msg) {
    ok = false;
    issues.push_back(std::move(msg));
  }
};

inline ValidationReport validate_complex(const ModelComplex& c) {
  ValidationReport rep;
  const auto& gens = c.generators();
  const auto& diff = c.differential();

  std::map<std::string, int> seen;
  for (const auto& g : gens) {
    if (g.name.empty()) rep.fail("generator with empty name");
    if (++seen[g.name] == 2) rep.fail("duplicate generator name: " + g.name);
  }

  for (std::size_t s = 0; s < diff.size(); ++s) {
    std::map<std::pair<std::size_t, int>, int> mult;
    for (const auto& t : diff[s]) {
      if (t.target >= gens.size()) {
        rep.fail("differential of " + gens[s].name + " hits unknown generator");
        continue;
      }
      const Generator& src = gens[s];
      const Generator& tgt = gens[t.target];
      if (t.upower < 0)
        rep.fail("negative U-power in differential of " + src.name);
      if (tgt.i - t.upower > src.i || tgt.j - t.upower > src.j)
        rep.fail("filtration violation: " + src.name + " -> U^" +
                 std::to_string(t.upower) + " " + tgt.name);
      if (tgt.maslov - 2 * t.upower != src.maslov - 1)
        rep.fail("Maslov violation: " + src.name + " -> U^" +
                 std::to_string(t.upower) + " " + tgt.name);
      if (++mult[{t.target, t.upower}] == 2)
        rep.fail("duplicate differential term on " + gens[s].name);
    }
  }

  // d^2 = 0 as formal sums in U^k · generator
  for (std::size_t s = 0; s < diff.size(); ++s) {
    std::map<std::pair<std::size_t, int>, int> acc;
    for (const auto& t1 : diff[s]) {
      if (t1.target >= gens.size()) continue;
      for (const auto& t2 : diff[t1.target])
        acc[{t2.target, t1.upower + t2.upower}] ^= 1;
    }
    for (const auto& [key, parity] : acc)
      if (parity)
        rep.fail("d^2 != 0 starting from " + gens[s].name);
  }
  return rep;
}

inline int genus(const ModelComplex& c) {
  int g = 0;
  for (const auto& x : c.generators()) g = std::max(g, x.j - x.i);
  return g;
}

inline int diameter(const ModelComplex& c) {
  if (c.size() == 0) return 0;
  int imin = c.generators()[0].i, imax = imin;
  int jmin = c.generators()[0].j, jmax = jmin;
  for (const auto& x : c.generators()) {
    imin = std::min(imin, x.i);
    imax = std::max(imax, x.i);
    jmin = std::min(jmin, x.j);
    jmax = std::max(jmax, x.j);
  }
  return (imax - imin) + (jmax - jmin);
}

// Alternating sum n_m - n_{m-1} + ... ± n_1; equals V_0 of the staircase
// knot and the depth of the mirror's extra towers.
inline int staircase_n(const std::vector<int>& torsion) {
  int n = 0, sign = 1;
  for (std::size_t k = torsion.size(); k-- > 0;) {
    n += sign * torsion[k];
    sign = -sign;
  }
  return n;
}

namespace detail {

inline void check_torsion(const std::vector<int>& torsion) {
  int prev = 0;
  for (int t : torsion) {
    if (t <= prev)
      throw std::invalid_argument("torsion parameters must be strictly increasing and positive");
    prev = t;
  }
}

// Walks the staircase positions from the extremal generator x_m down to
// x_0 = (0,0). Returns positions[s] for s = 0..m (side 1); side 2 is the
// (i,j) swap. `mirror` flips which coordinate moves first and the
// direction of travel.
inline std::vector<std::pair<int, int>> staircase_positions(
    const std::vector<int>& torsion, bool mirror) {
  std::size_t m = torsion.size();
  int g = m ? torsion.back() : 0;
  int n = staircase_n(torsion);
  std::vector<std::pair<int, int>> pos(m + 1);
  int ci = mirror ? n : -n;
  int cj = mirror ? n - g : g - n;
  for (std::size_t s = m; s > 0; --s) {
    pos[s] = {ci, cj};
    int step = torsion[s - 1] - (s >= 2 ? torsion[s - 2] : 0);
    bool i_step = ((m - s) % 2 == 0);  // i moves first leaving x_m
    if (i_step)
      ci += mirror ? -step : step;
    else
      cj += mirror ? step : -step;
  }
  pos[0] = {ci, cj};  // lands at (0,0) by construction
  return pos;
}

inline ModelComplex build_staircase_impl(const std::vector<int>& torsion,
                                         bool mirror, const std::string& name) {
  check_torsion(torsion);
  std::size_t m = torsion.size();
  int n = staircase_n(torsion);
  auto pos = staircase_positions(torsion, mirror);
  if (pos[0] != std::pair<int, int>{0, 0})
    throw std::logic_error("staircase walk failed to close at the origin");

  // x_s is a source of the differential iff s has the right parity:
  // staircase sources point away from the extremes, mirror sources include
  // the extremal generator itself.
  auto is_source = [&](std::size_t s) {
    return mirror ? (s % 2 == m % 2) : (s % 2 == (m + 1) % 2);
  };

  // Maslov: anchored at the extremal generator (-2n for the staircase,
  // +2n for the mirror), propagated along arrows which drop it by one.
  std::vector<int> maslov(m + 1, 0);
  if (m) {
    maslov[m] = mirror ? 2 * n : -2 * n;
    for (std::size_t s = m; s > 0; --s)
      maslov[s - 1] = maslov[s] + (is_source(s) ? -1 : +1);
  }

  ModelComplex c(name);
  c.add_generator("x0", pos[0].first, pos[0].second, maslov[0]);
  for (std::size_t s = 1; s <= m; ++s) {
    c.add_generator("x" + std::to_string(s) + "_1", pos[s].first, pos[s].second,
                    maslov[s]);
    c.add_generator("x" + std::to_string(s) + "_2", pos[s].second, pos[s].first,
                    maslov[s]);
  }
  auto idx = [&](std::size_t s, int side) -> std::string {
    if (s == 0) return "x0";
    return "x" + std::to_string(s) + "_" + std::to_string(side);
  };
  for (std::size_t s = 0; s <= m; ++s) {
    if (!is_source(s)) continue;
    for (int side = 1; side <= (s == 0 ? 1 : 2); ++side) {
      if (s >= 1) c.add_term(idx(s, side), idx(s - 1, side), 0);
      if (s == 0 && m >= 1) {
        c.add_term("x0", idx(1, 1), 0);
        c.add_term("x0", idx(1, 2), 0);
      }
      if (s >= 1 && s + 1 <= m) c.add_term(idx(s, side), idx(s + 1, side), 0);
    }
  }
  c.set_provenance(mirror ? Provenance::mirror_staircase : Provenance::staircase);
  c.set_torsion(torsion);
  return c;
}

// Adds one square summand with initial corner (i0,j0); returns its record.
inline SquareInfo add_square_gens(ModelComplex& c, const std::string& suffix,
                                  int i0, int j0, int tau) {
  SquareInfo sq;
  sq.a = c.add_generator("a" + suffix, i0, j0, i0 + j0 - tau);
  sq.b = c.add_generator("b" + suffix, i0 - 1, j0, i0 + j0 - 1 - tau);
  sq.c = c.add_generator("c" + suffix, i0, j0 - 1, i0 + j0 - 1 - tau);
  sq.e = c.add_generator("e" + suffix, i0, j0, i0 + j0 - tau);
  c.add_term(sq.a, sq.b, 0);
  c.add_term(sq.a, sq.c, 0);
  c.add_term(sq.b, sq.e, 1);
  c.add_term(sq.c, sq.e, 1);
  return sq;
}

}  // namespace detail

inline ModelComplex build_staircase(const std::vector<int>& torsion) {
  return detail::build_staircase_impl(torsion, false, "staircase");
}

inline ModelComplex build_mirror_staircase(const std::vector<int>& torsion) {
  return detail::build_staircase_impl(torsion, true, "mirror-staircase");
}

// Thin canonical model: step-length-one (anti)staircase for tau plus
// `squares` square summands. Squares come in mirrored pairs with initial
// corners (s,-s) and (-s,s); an odd count leaves one square on the
// diagonal at (0,0). pair_shifts overrides the default s = 1, 2, ... for
// the pairs.
inline ModelComplex build_thin_canonical(int tau, int squares,
                                         const std::vector<int>& pair_shifts = {}) {
  if (squares < 0) throw std::invalid_argument("square count must be >= 0");
  std::vector<int> torsion;
  for (int k = 1; k <= std::abs(tau); ++k) torsion.push_back(k);
  ModelComplex c = torsion.empty()
                       ? ModelComplex("thin")
                       : detail::build_staircase_impl(torsion, tau < 0, "thin");
  if (torsion.empty()) c.add_generator("x0", 0, 0, -tau);

  // the anchored staircase Maslov gradings coincide with the thin formula
  // i + j - tau; keep the builder honest
  for (const auto& g : c.generators())
    if (g.maslov != g.i + g.j - tau)
      throw std::logic_error("thin staircase grading mismatch");

  int pairs = squares / 2;
  bool diagonal = squares % 2;
  if (!pair_shifts.empty() && static_cast<int>(pair_shifts.size()) != pairs)
    throw std::invalid_argument("pair_shifts must list one shift per square pair");
  for (int k = 1; k <= pairs; ++k) {
    int s = pair_shifts.empty() ? k : pair_shifts[k - 1];
    if (s < 1) throw std::invalid_argument("pair shifts must be positive");
    std::string tag = std::to_string(k);
    SquareInfo sq = detail::add_square_gens(c, tag, s, -s, tau);
    SquareInfo sqp = detail::add_square_gens(c, tag + "p", -s, s, tau);
    sq.partner = c.squares().size() + 1;
    sqp.partner = c.squares().size();
    c.add_square(sq);
    c.add_square(sqp);
  }
  if (diagonal) {
    SquareInfo sq = detail::add_square_gens(c, "", 0, 0, tau);
    sq.diagonal = true;
    c.add_square(sq);
  }
  c.set_provenance(Provenance::thin);
  c.set_tau(tau);
  c.set_torsion(torsion);
  return c;
}

// Exact Alexander polynomial of the (p,q) torus knot as a centered,
// ascending coefficient list: coeffs[k] is the coefficient of
// t^(k - (p-1)(q-1)/2).
inline std::vector<int> torus_alexander(int p, int q) {
  if (p < 2 || q < 2) throw std::invalid_argument("torus parameters must be >= 2");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("torus parameters must be coprime");

  // (t^{pq}-1)/(t^p-1) = 1 + t^p + ... + t^{p(q-1)}
  std::vector<long long> num(static_cast<std::size_t>(p) * (q - 1) + 1, 0);
  for (int k = 0; k < q; ++k) num[static_cast<std::size_t>(p) * k] = 1;
  // multiply by (t-1)
  std::vector<long long> scaled(num.size() + 1, 0);
  for (std::size_t k = 0; k < num.size(); ++k) {
    scaled[k + 1] += num[k];
    scaled[k] -= num[k];
  }
  // exact division by (t^q - 1), ascending coefficients
  std::vector<long long> divisor(static_cast<std::size_t>(q) + 1, 0);
  divisor[0] = -1;
  divisor[static_cast<std::size_t>(q)] = 1;
  std::vector<long long> quot(scaled.size() - divisor.size() + 1, 0);
  std::vector<long long> rem = scaled;
  for (std::size_t k = quot.size(); k-- > 0;) {
    long long lead = rem[k + divisor.size() - 1];
    quot[k] = lead;  // divisor is monic
    if (lead == 0) continue;
    for (std::size_t d = 0; d < divisor.size(); ++d) rem[k + d] -= lead * divisor[d];
  }
  for (long long r : rem)
    if (r != 0) throw std::logic_error("torus Alexander division was not exact");

  int deg = (p - 1) * (q - 1);  // quot has degree deg, centered by deg/2
  std::vector<int> out(static_cast<std::size_t>(deg) + 1, 0);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<int>(quot[k]);
  return out;
}

// Recognizes an Alexander polynomial of L-space form
//   (-1)^m + sum_i (-1)^(m-i) (t^{n_i} + t^{-n_i})
// and returns the torsion sequence n_1 < ... < n_m. Input is an ascending,
// centered coefficient list of odd length.
inline std::vector<int> from_alexander_lspace(const std::vector<int>& coeffs) {
  if (coeffs.empty() || coeffs.size() % 2 == 0)
    throw NotLSpaceForm("coefficient list must be centered with odd length");
  int d = static_cast<int>(coeffs.size() / 2);
  auto coeff = [&](int e) { return coeffs[static_cast<std::size_t>(e + d)]; };
  for (int e = 1; e <= d; ++e)
    if (coeff(e) != coeff(-e)) throw NotLSpaceForm("coefficients are not symmetric");

  std::vector<int> torsion;
  for (int e = 1; e <= d; ++e)
    if (coeff(e) != 0) torsion.push_back(e);
  int m = static_cast<int>(torsion.size());
  for (int s = 1; s <= m; ++s) {
    int expected = (m - s) % 2 == 0 ? 1 : -1;  // top coefficient +1, alternating
    if (coeff(torsion[static_cast<std::size_t>(s - 1)]) != expected)
      throw NotLSpaceForm("nonzero coefficients do not alternate from +1 at the top");
  }
  if (coeff(0) != (m % 2 == 0 ? 1 : -1))
    throw NotLSpaceForm("constant coefficient breaks the alternating pattern");
  return torsion;
}

// Disjoint union of two model complexes; generator names get ".1"/".2"
// suffixes so the result has unique names regardless of the inputs.
inline ModelComplex direct_sum(const ModelComplex& a, const ModelComplex& b) {
  ModelComplex out(a.name() + "+" + b.name());
  for (const auto& g : a.generators())
    out.add_generator(g.name + ".1", g.i, g.j, g.maslov);
  for (const auto& g : b.generators())
    out.add_generator(g.name + ".2", g.i, g.j, g.maslov);
  const std::size_t off = a.generators().size();
  for (std::size_t s = 0; s < a.generators().size(); ++s)
    for (const auto& t : a.differential()[s]) out.add_term(s, t.target, t.upower);
  for (std::size_t s = 0; s < b.generators().size(); ++s)
    for (const auto& t : b.differential()[s])
      out.add_term(off + s, off + t.target, t.upower);
  return out;
}

}  // namespace hfi

#endif
