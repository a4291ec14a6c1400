#ifndef HFI_F2_HPP
#define HFI_F2_HPP

// Dense linear algebra over the two-element field, bit-packed into 64-bit
// words. Everything downstream (homology, tower detection, homotopy
// searches) reduces to rank / kernel / solve on these matrices, so the
// elimination order is fixed once here: pivots are chosen at the leftmost
// unused column, breaking ties by the lowest row index. That makes every
// derived basis and every solution canonical and run-to-run reproducible.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hfi {

class F2Vec {
 public:
  F2Vec() = default;
  explicit F2Vec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= mask;
    else
      w_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  F2Vec& operator^=(const F2Vec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  bool is_zero() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  // Index of the first set bit, or size() when zero.
  std::size_t first_set() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[k]));
    return n_;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  bool operator==(const F2Vec& o) const { return n_ == o.n_ && w_ == o.w_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;

  friend class F2Matrix;
};

class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

  static F2Matrix identity(std::size_t n) {
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (c & 63);
    if (v)
      bits_[r * words_ + (c >> 6)] |= mask;
    else
      bits_[r * words_ + (c >> 6)] &= ~mask;
  }
  void flip(std::size_t r, std::size_t c) {
    bits_[r * words_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
  }

  // row(dst) ^= row(src)
  void xor_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = &bits_[dst * words_];
    const std::uint64_t* s = &bits_[src * words_];
    for (std::size_t k = 0; k < words_; ++k) d[k] ^= s[k];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < words_; ++k)
      std::swap(bits_[a * words_ + k], bits_[b * words_ + k]);
  }

  F2Vec row(std::size_t r) const {
    F2Vec v(cols_);
    for (std::size_t k = 0; k < words_; ++k) v.w_[k] = bits_[r * words_ + k];
    return v;
  }

  void set_row(std::size_t r, const F2Vec& v) {
    for (std::size_t k = 0; k < words_; ++k) bits_[r * words_ + k] = v.w_[k];
  }

  // Matrix-vector product; the vector indexes columns.
  F2Vec apply(const F2Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("F2Matrix::apply size mismatch");
    F2Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      const std::uint64_t* rw = &bits_[r * words_];
      for (std::size_t k = 0; k < words_; ++k) acc ^= rw[k] & v.w_[k];
      if (__builtin_popcountll(acc) & 1) out.set(r);
    }
    return out;
  }

  // this · other (composition of linear maps: apply other first).
  F2Matrix multiply(const F2Matrix& other) const {
    if (cols_ != other.rows_)
      throw std::invalid_argument("F2Matrix::multiply size mismatch");
    F2Matrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t* orow = &out.bits_[r * out.words_];
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!get(r, c)) continue;
        const std::uint64_t* srow = &other.bits_[c * other.words_];
        for (std::size_t k = 0; k < out.words_; ++k) orow[k] ^= srow[k];
      }
    }
    return out;
  }

  bool operator==(const F2Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

// Row-reduces m in place to reduced row-echelon form. Returns the pivot
// columns in order; pivot i lives in row i. Deterministic: leftmost column
// first, lowest row index on ties.
inline std::vector<std::size_t> rref_in_place(F2Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && !m.get(piv, c)) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, r);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.xor_row(i, r);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t rank(F2Matrix m) { return detail::rref_in_place(m).size(); }

// Canonical kernel basis: one vector per free column, in increasing free
// column order, with the free coordinate set to one.
inline std::vector<F2Vec> kernel_basis(F2Matrix m) {
  std::vector<std::size_t> pivots = detail::rref_in_place(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<F2Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    F2Vec v(m.cols());
    v.set(free);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (m.get(i, free)) v.set(pivots[i]);
    basis.push_back(v);
  }
  return basis;
}

// Solves a·x = b; returns the canonical solution (free variables zero) or
// nullopt when inconsistent.
inline std::optional<F2Vec> solve_linear(const F2Matrix& a, const F2Vec& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear size mismatch");
  // Augment with b as an extra column and reduce.
  F2Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.get(r, c)) aug.set(r, c, true);
    if (b.test(r)) aug.set(r, a.cols(), true);
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < aug.rows(); ++c) {
    std::size_t piv = r;
    while (piv < aug.rows() && !aug.get(piv, c)) ++piv;
    if (piv == aug.rows()) continue;
    aug.swap_rows(piv, r);
    for (std::size_t i = 0; i < aug.rows(); ++i)
      if (i != r && aug.get(i, c)) aug.xor_row(i, r);
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < aug.rows(); ++i)
    if (aug.get(i, a.cols())) return std::nullopt;  // 0 = 1 row
  F2Vec x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (aug.get(i, a.cols())) x.set(pivots[i]);
  return x;
}

// Incrementally maintained subspace with a reduced-echelon basis, used for
// quotient computations and membership tests.
class F2Subspace {
 public:
  explicit F2Subspace(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }

  // Reduces v against the current basis; returns the residue.
  F2Vec reduce(F2Vec v) const {
    for (const auto& row : rows_) {
      std::size_t p = row.first_set();
      if (v.test(p)) v ^= row;
    }
    return v;
  }

  bool contains(const F2Vec& v) const { return reduce(v).is_zero(); }

  // Inserts v if independent; returns true when the dimension grew.
  bool insert(const F2Vec& v) {
    F2Vec res = reduce(v);
    if (res.is_zero()) return false;
    std::size_t p = res.first_set();
    for (auto& row : rows_)
      if (row.test(p)) row ^= res;
    // keep rows ordered by pivot so reduce() stays a single sweep
    std::size_t at = 0;
    while (at < rows_.size() && rows_[at].first_set() < p) ++at;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(at), res);
    return true;
  }

 private:
  std::size_t ambient_;
  std::vector<F2Vec> rows_;  // reduced echelon, increasing pivot
};

inline bool subspace_membership(const std::vector<F2Vec>& basis, const F2Vec& v) {
  if (basis.empty()) return v.is_zero();
  F2Subspace s(basis[0].size());
  for (const auto& b : basis) s.insert(b);
  return s.contains(v);
}

}  // namespace hfi

#endif
