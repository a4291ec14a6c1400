#ifndef HFI_TEST_ORACLES_HPP
#define HFI_TEST_ORACLES_HPP

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive (bool matrices, exhaustive
// enumeration) and shares no code with include/hfi.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using BoolMat = std::vector<std::vector<bool>>;
using BoolVec = std::vector<bool>;

// Plain Gaussian elimination on a bool matrix; returns the rank.
inline std::size_t rank(BoolMat m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && !m[piv][c]) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && m[i][c])
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = m[i][j] ^ m[r][j];
    ++r;
  }
  return r;
}

inline BoolVec mul(const BoolMat& m, const BoolVec& v) {
  BoolVec out(m.size(), false);
  for (std::size_t i = 0; i < m.size(); ++i) {
    bool s = false;
    for (std::size_t j = 0; j < v.size(); ++j) s = s ^ (m[i][j] && v[j]);
    out[i] = s;
  }
  return out;
}

inline bool is_zero(const BoolVec& v) {
  for (bool b : v)
    if (b) return false;
  return true;
}

// Exhaustive kernel dimension: counts solutions of m·v = 0 over all 2^cols
// vectors. Only usable for cols <= ~20.
inline std::size_t kernel_dim_exhaustive(const BoolMat& m, std::size_t cols) {
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cols); ++bits) {
    BoolVec v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = (bits >> j) & 1;
    if (is_zero(mul(m, v))) ++count;
  }
  std::size_t dim = 0;
  while ((std::uint64_t{1} << dim) < count) ++dim;
  return dim;
}

// Exhaustive solvability of m·v = b.
inline bool solvable_exhaustive(const BoolMat& m, const BoolVec& b,
                                std::size_t cols) {
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cols); ++bits) {
    BoolVec v(cols);
    for (std::size_t j = 0; j < cols; ++j) v[j] = (bits >> j) & 1;
    if (mul(m, v) == b) return true;
  }
  return false;
}

// Exhaustive span membership over a small basis list.
inline bool in_span_exhaustive(const std::vector<BoolVec>& basis,
                               const BoolVec& v) {
  std::size_t k = basis.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    BoolVec acc(v.size(), false);
    for (std::size_t i = 0; i < k; ++i)
      if ((bits >> i) & 1)
        for (std::size_t j = 0; j < v.size(); ++j) acc[j] = acc[j] ^ basis[i][j];
    if (acc == v) return true;
  }
  return false;
}

// Graded chain-complex homology oracle. Elements are opaque indices
// 0..n-1 with integer gradings; the differential is a list of columns
// (boundary of element j = set of indices). dim H_r = dim ker ∂_r − rank ∂_{r+1}.
struct GradedComplexOracle {
  std::vector<int> grading;                    // per element
  std::vector<std::vector<std::size_t>> bdry;  // per element, image indices

  std::map<int, std::size_t> homology_dims() const {
    std::size_t n = grading.size();
    std::map<int, std::vector<std::size_t>> by_grading;
    for (std::size_t i = 0; i < n; ++i) by_grading[grading[i]].push_back(i);
    std::map<int, std::size_t> dims;
    for (auto& [r, elems] : by_grading) {
      auto block = [&](int src_grading) {
        // matrix rows = elements of grading src-1, cols = elements of src
        std::vector<std::size_t> src, tgt;
        for (std::size_t i = 0; i < n; ++i) {
          if (grading[i] == src_grading) src.push_back(i);
          if (grading[i] == src_grading - 1) tgt.push_back(i);
        }
        BoolMat m(tgt.size(), BoolVec(src.size(), false));
        for (std::size_t c = 0; c < src.size(); ++c)
          for (std::size_t t : bdry[src[c]])
            for (std::size_t rr = 0; rr < tgt.size(); ++rr)
              if (tgt[rr] == t) m[rr][c] = !m[rr][c];
        return m;
      };
      BoolMat d_r = block(r);
      BoolMat d_above = block(r + 1);
      std::size_t cycles = elems.size() - rank(d_r);
      std::size_t boundaries = rank(d_above);
      dims[r] = cycles - boundaries;
    }
    return dims;
  }
};

}  // namespace oracle

#endif
