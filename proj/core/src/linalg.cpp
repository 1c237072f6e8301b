#include "rankforge/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace rankforge {

FqVector DenseMatrix::mul_vec(const FqVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("dimension mismatch");
  FqVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    const std::uint32_t* r = row(i);
    // Lazy reduction: q^2 * cols stays well below 2^64 for q < 2^16.
    for (std::size_t j = 0; j < cols_; ++j) acc += static_cast<std::uint64_t>(r[j]) * v[j];
    out[i] = static_cast<std::uint32_t>(acc % field_.q());
  }
  return out;
}

RrefResult rref(const DenseMatrix& m) {
  DenseMatrix a = m;
  const PrimeField& f = a.field();
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a.at(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) {
        std::uint32_t t = a.at(p, j);
        a.set(p, j, a.at(r, j));
        a.set(r, j, t);
      }
    const std::uint32_t pinv = f.inv(a.at(r, c));
    for (std::size_t j = c; j < cols; ++j) a.set(r, j, f.mul(a.at(r, j), pinv));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const std::uint32_t v = a.at(i, c);
      if (!v) continue;
      std::uint32_t* ri = a.row(i);
      const std::uint32_t* rr = a.row(r);
      const std::uint32_t q = f.q();
      for (std::size_t j = c; j < cols; ++j) {
        std::uint64_t t = ri[j] + static_cast<std::uint64_t>(q - v) * rr[j];
        ri[j] = static_cast<std::uint32_t>(t % q);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return RrefResult{std::move(a), r, std::move(pivots)};
}

std::vector<FqVector> right_kernel(const DenseMatrix& m) {
  RrefResult rr = rref(m);
  const PrimeField& f = m.field();
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (auto c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<FqVector> basis;
  for (std::size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    FqVector v(cols, 0);
    v[free_c] = 1;
    // Pivot row i has leading column pivot_cols[i]; v[pivot] = -M_red[i][free_c].
    for (std::size_t i = 0; i < rr.rank; ++i)
      v[rr.pivot_cols[i]] = f.neg(rr.reduced.at(i, free_c));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<FqVector> solve(const DenseMatrix& m, const FqVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("dimension mismatch");
  // Eliminate on the augmented matrix.
  DenseMatrix aug(m.field(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, m.cols(), b[i]);
  }
  RrefResult rr = rref(aug);
  // Inconsistent iff a pivot lands in the augmented column.
  for (auto c : rr.pivot_cols)
    if (c == m.cols()) return std::nullopt;
  FqVector x(m.cols(), 0);
  for (std::size_t i = 0; i < rr.rank; ++i)
    x[rr.pivot_cols[i]] = rr.reduced.at(i, m.cols());
  return x;
}

std::uint32_t det(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det needs square input");
  const PrimeField& f = m.field();
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  bool negate = false;
  std::uint32_t scale = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (a.at(i, c)) { piv = i; break; }
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = c; j < n; ++j) {
        std::uint32_t t = a.at(piv, j);
        a.set(piv, j, a.at(c, j));
        a.set(c, j, t);
      }
      negate = !negate;
    }
    scale = f.mul(scale, a.at(c, c));
    const std::uint32_t inv = f.inv(a.at(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (!a.at(i, c)) continue;
      const std::uint32_t mult = f.neg(f.mul(a.at(i, c), inv));
      for (std::size_t j = c; j < n; ++j)
        a.set(i, j, f.add(a.at(i, j), f.mul(mult, a.at(c, j))));
    }
  }
  return negate ? f.neg(scale) : scale;
}

// ---------------------------------------------------------------- echelon ---

EchelonAccumulator::EchelonAccumulator(PrimeField field, std::size_t cols)
    : field_(field),
      cols_(cols),
      packed_(field.q() == 2),
      words_((cols + 63) / 64),
      pivot_of_col_(cols, static_cast<std::size_t>(-1)) {}

bool EchelonAccumulator::add_row(const FqVector& row) {
  if (row.size() != cols_) throw std::invalid_argument("dimension mismatch");
  if (packed_) {
    std::vector<std::uint64_t> pk(words_, 0);
    for (std::size_t j = 0; j < cols_; ++j)
      if (row[j] & 1) pk[j >> 6] |= (std::uint64_t{1} << (j & 63));
    return insert_packed(std::move(pk));
  }
  std::vector<std::uint32_t> r(row);
  return insert_reduced(std::move(r));
}

bool EchelonAccumulator::add_row_sparse(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row) {
  if (packed_) {
    std::vector<std::uint64_t> pk(words_, 0);
    for (auto [c, v] : row)
      if (v & 1) pk[c >> 6] |= (std::uint64_t{1} << (c & 63));
    return insert_packed(std::move(pk));
  }
  std::vector<std::uint32_t> r(cols_, 0);
  for (auto [c, v] : row) r[c] = v % field_.q();
  return insert_reduced(std::move(r));
}

bool EchelonAccumulator::insert_reduced(std::vector<std::uint32_t>&& row) {
  const std::uint32_t q = field_.q();
  ops_ += cols_;  // baseline scan cost per row
  // Unreduced accumulation buffer; products are < 2^32 and the row meets at
  // most `cols_` pivots, so sums stay below 2^64.
  std::vector<std::uint64_t> buf(row.begin(), row.end());
  std::size_t lead = cols_;
  for (std::size_t c = 0; c < cols_; ++c) {
    std::uint32_t v = static_cast<std::uint32_t>(buf[c] % q);
    buf[c] = v;
    if (!v) continue;
    const std::size_t pi = pivot_of_col_[c];
    if (pi == static_cast<std::size_t>(-1)) {
      lead = c;
      break;
    }
    // buf -= v * basis row (pivot rows are kept reduced with leading 1).
    const auto& p = basis_[pi];
    const std::uint64_t mult = q - v;
    for (std::size_t j = c; j < cols_; ++j) buf[j] += mult * p[j];
    ops_ += cols_ - c;
  }
  if (lead == cols_) return false;
  // Normalize: reduce the tail, scale to leading 1.
  std::vector<std::uint32_t> red(cols_, 0);
  const std::uint32_t inv = field_.inv(static_cast<std::uint32_t>(buf[lead] % q));
  for (std::size_t j = lead; j < cols_; ++j)
    red[j] = field_.mul(static_cast<std::uint32_t>(buf[j] % q), inv);
  ops_ += cols_ - lead;
  pivot_of_col_[lead] = basis_.size();
  basis_.push_back(std::move(red));
  lead_.push_back(lead);
  ++rank_;
  return true;
}

bool EchelonAccumulator::insert_packed(std::vector<std::uint64_t>&& row) {
  ops_ += words_;  // baseline scan cost per row
  std::size_t lead = cols_;
  for (std::size_t w = 0; w < words_; ++w) {
    while (row[w]) {
      const std::size_t c = (w << 6) + static_cast<std::size_t>(__builtin_ctzll(row[w]));
      const std::size_t pi = pivot_of_col_[c];
      if (pi == static_cast<std::size_t>(-1)) {
        lead = c;
        break;
      }
      const auto& p = basis_packed_[pi];
      for (std::size_t j = w; j < words_; ++j) row[j] ^= p[j];
      ops_ += words_ - w;
    }
    if (lead != cols_) break;
  }
  if (lead == cols_) return false;
  pivot_of_col_[lead] = basis_packed_.size();
  basis_packed_.push_back(std::move(row));
  lead_.push_back(lead);
  ++rank_;
  return true;
}

// ----------------------------------------------------------------- sparse ---

void SparseMatrix::add_entry(std::size_t i, std::uint32_t col, std::uint32_t val) {
  if (i >= rows_ || col >= cols_) throw std::out_of_range("entry out of range");
  val %= field_.q();
  if (!val) return;
  auto& r = row_entries_[i];
  if (!r.empty() && r.back().first >= col)
    throw std::invalid_argument("columns must be strictly increasing per row");
  r.emplace_back(col, val);
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : row_entries_) n += r.size();
  return n;
}

FqVector SparseMatrix::mul_vec(const FqVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("dimension mismatch");
  FqVector out(rows_, 0);
  const std::uint32_t q = field_.q();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (auto [c, val] : row_entries_[i]) {
      acc += static_cast<std::uint64_t>(val) * v[c];
      if (acc >= (std::uint64_t{1} << 62)) acc %= q;
    }
    out[i] = static_cast<std::uint32_t>(acc % q);
  }
  return out;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(field_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto [c, v] : row_entries_[i]) d.set(i, c, v);
  return d;
}

// -------------------------------------------------------------- wiedemann ---

FqPoly berlekamp_massey(const PrimeField& f, const FqVector& seq) {
  // Standard iterative form; C is the current connection polynomial.
  FqPoly C{1}, B{1};
  std::size_t L = 0, m = 1;
  std::uint32_t b = 1;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    // Discrepancy d = s_n + sum_{i=1..L} C_i s_{n-i}.
    std::uint64_t acc = seq[n];
    for (std::size_t i = 1; i <= L && i < C.size(); ++i)
      acc += static_cast<std::uint64_t>(C[i]) * seq[n - i];
    const std::uint32_t d = static_cast<std::uint32_t>(acc % f.q());
    if (d == 0) {
      ++m;
    } else if (2 * L <= n) {
      FqPoly T = C;
      const std::uint32_t coef = f.mul(d, f.inv(b));
      if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
      for (std::size_t i = 0; i < B.size(); ++i)
        C[i + m] = f.sub(C[i + m], f.mul(coef, B[i]));
      L = n + 1 - L;
      B = std::move(T);
      b = d;
      m = 1;
    } else {
      const std::uint32_t coef = f.mul(d, f.inv(b));
      if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
      for (std::size_t i = 0; i < B.size(); ++i)
        C[i + m] = f.sub(C[i + m], f.mul(coef, B[i]));
      ++m;
    }
  }
  // C(z) = 1 + c_1 z + ... with s_n + sum c_i s_{n-i} = 0. The minimal
  // polynomial is z^L C(1/z); pad C to length L+1 first so the reversal
  // aligns (deg C may be below L), which also makes the result monic.
  C.resize(L + 1, 0);
  FqPoly minpoly(C.rbegin(), C.rend());
  return minpoly;
}

namespace {

// Random sparse projector rows: `weight` entries per row at distinct columns.
SparseMatrix random_projector(const PrimeField& f, std::size_t out_rows,
                              std::size_t in_rows, std::mt19937_64& rng) {
  SparseMatrix p(f, out_rows, in_rows);
  const std::size_t weight = std::min<std::size_t>(in_rows, 8);
  std::uniform_int_distribution<std::size_t> col_dist(0, in_rows - 1);
  std::uniform_int_distribution<std::uint32_t> val_dist(1, f.q() - 1);
  for (std::size_t i = 0; i < out_rows; ++i) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
    std::vector<std::size_t> cols;
    while (cols.size() < weight) {
      std::size_t c = col_dist(rng);
      bool dup = false;
      for (auto cc : cols) dup |= (cc == c);
      if (!dup) cols.push_back(c);
    }
    std::sort(cols.begin(), cols.end());
    for (auto c : cols)
      p.add_entry(i, static_cast<std::uint32_t>(c), val_dist(rng));
  }
  return p;
}

}  // namespace

WiedemannResult wiedemann_kernel_element(const SparseMatrix& m,
                                         std::uint64_t seed, int max_attempts) {
  const PrimeField& f = m.field();
  const std::size_t R = m.rows(), C = m.cols();
  if (R < C) throw std::invalid_argument("wiedemann expects rows >= cols");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const bool needs_projection = (R != C);
  // Square side N: C+32 with zero-column padding after projection, C if square.
  const std::size_t N = needs_projection ? C + 32 : C;

  bool all_nonzero_const = true;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::optional<SparseMatrix> proj;
    if (needs_projection) proj = random_projector(f, C + 32, R, rng);
    // One black-box application of the squared-up operator B:
    //   x (length N) -> truncate padding -> M -> P, then re-pad to length N.
    auto apply = [&](const FqVector& x) {
      FqVector head(x.begin(), x.begin() + C);
      FqVector y = m.mul_vec(head);
      if (needs_projection) y = proj->mul_vec(y);
      y.resize(N, 0);
      return y;
    };

    std::uniform_int_distribution<std::uint32_t> val_dist(0, f.q() - 1);
    FqVector u(N), v(N);
    for (auto& x : u) x = val_dist(rng);
    for (auto& x : v) x = val_dist(rng);
    // Krylov sequence s_i = u^T B^i v, enough terms for degree-N recurrences.
    const std::size_t terms = 2 * N + 2;
    FqVector seq(terms);
    FqVector cur = v;
    for (std::size_t i = 0; i < terms; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < N; ++j) {
        acc += static_cast<std::uint64_t>(u[j]) * cur[j];
        if (acc >= (std::uint64_t{1} << 62)) acc %= f.q();
      }
      seq[i] = static_cast<std::uint32_t>(acc % f.q());
      if (i + 1 < terms) cur = apply(cur);
    }
    FqPoly mp = berlekamp_massey(f, seq);
    if (mp.size() <= 1) {
      // All-zero sequence (constant minimal polynomial): u projected away the
      // whole Krylov space. v itself may happen to lie in the kernel; check
      // it, then move on. The constant term is nonzero, so this attempt is
      // not kernel evidence either way.
      FqVector head(v.begin(), v.begin() + C);
      if (!std::all_of(head.begin(), head.end(),
                       [](std::uint32_t x) { return !x; })) {
        FqVector check = m.mul_vec(head);
        if (std::all_of(check.begin(), check.end(),
                        [](std::uint32_t x) { return !x; }))
          return {WiedemannStatus::FOUND, head, attempt + 1};
      }
      continue;
    }
    // Multiplicity of the zero root: lowest nonzero coefficient index.
    std::size_t e = 0;
    while (e < mp.size() && mp[e] == 0) ++e;
    if (e == 0) {
      // Nonzero constant term: no kernel evidence from this (u, v).
      continue;
    }
    all_nonzero_const = false;
    // h = mp / z^e; kernel candidate w = h(B) B^{e-1} v.
    FqVector base = v;
    for (std::size_t i = 0; i + 1 < e; ++i) base = apply(base);
    FqVector w(N, 0);
    FqVector power = base;  // B^{e-1} v, then successively B^{e-1+i} v
    for (std::size_t i = e; i < mp.size(); ++i) {
      const std::uint32_t c = mp[i];
      if (c)
        for (std::size_t j = 0; j < N; ++j)
          w[j] = f.add(w[j], f.mul(c, power[j]));
      if (i + 1 < mp.size()) power = apply(power);
    }
    FqVector head(w.begin(), w.begin() + C);
    const bool head_nonzero = !std::all_of(
        head.begin(), head.end(), [](std::uint32_t x) { return !x; });
    if (head_nonzero) {
      FqVector check = m.mul_vec(head);
      if (std::all_of(check.begin(), check.end(),
                      [](std::uint32_t x) { return !x; }))
        return {WiedemannStatus::FOUND, head, attempt + 1};
    }
  }
  if (!needs_projection && all_nonzero_const)
    return {WiedemannStatus::TRIVIAL_KERNEL, std::nullopt, max_attempts};
  return {WiedemannStatus::RETRIES_EXHAUSTED, std::nullopt, max_attempts};
}

std::vector<FqVector> EchelonAccumulator::kernel_basis() {
  // Back-substitution: process pivots from the rightmost leading column so
  // each subtracted row is already fully reduced.
  std::vector<std::size_t> order(lead_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lead_[a] > lead_[b]; });
  if (packed_) {
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const std::size_t i = order[oi];
      const std::size_t c = lead_[i];
      const auto& src = basis_packed_[i];
      for (std::size_t j = 0; j < basis_packed_.size(); ++j) {
        if (j == i || lead_[j] >= c) continue;
        auto& row = basis_packed_[j];
        if (row[c >> 6] & (std::uint64_t{1} << (c & 63)))
          for (std::size_t w = c >> 6; w < words_; ++w) row[w] ^= src[w];
      }
    }
  } else {
    const std::uint32_t q = field_.q();
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const std::size_t i = order[oi];
      const std::size_t c = lead_[i];
      const auto& src = basis_[i];
      for (std::size_t j = 0; j < basis_.size(); ++j) {
        if (j == i || lead_[j] >= c) continue;
        auto& row = basis_[j];
        const std::uint32_t v = row[c];
        if (!v) continue;
        const std::uint64_t mult = q - v;
        for (std::size_t t = c; t < cols_; ++t)
          row[t] = static_cast<std::uint32_t>((row[t] + mult * src[t]) % q);
      }
    }
  }
  auto entry = [&](std::size_t i, std::size_t c) -> std::uint32_t {
    if (packed_)
      return (basis_packed_[i][c >> 6] >> (c & 63)) & 1;
    return basis_[i][c];
  };
  std::vector<FqVector> kernel;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (pivot_of_col_[f] != static_cast<std::size_t>(-1)) continue;
    FqVector v(cols_, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < lead_.size(); ++i)
      v[lead_[i]] = field_.neg(entry(i, f));
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// ------------------------------------------------- extension-field dense ---

std::vector<std::size_t> ext_rref(const ExtField& f,
                                  std::vector<ExtVector>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::invalid_argument("ragged ext matrix");
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (!f.is_zero(rows[i][c])) { piv = i; break; }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    ExtElt inv = f.inv(rows[rank][c]);
    for (std::size_t j = c; j < cols; ++j)
      rows[rank][j] = f.mul(rows[rank][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || f.is_zero(rows[i][c])) continue;
      ExtElt mult = f.neg(rows[i][c]);
      for (std::size_t j = c; j < cols; ++j)
        f.add_mul_inplace(rows[i][j], mult, rows[rank][j]);
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

std::size_t ext_rank(const ExtField& f, std::vector<ExtVector> rows) {
  return ext_rref(f, rows).size();
}

std::vector<ExtVector> ext_right_kernel(const ExtField& f,
                                        std::vector<ExtVector> rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows[0].size();
  std::vector<std::size_t> pivots = ext_rref(f, rows);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<ExtVector> basis;
  for (std::size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    ExtVector v(cols, f.zero());
    v[free_c] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = f.neg(rows[i][free_c]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<ExtVector> ext_left_kernel(const ExtField& f,
                                       const std::vector<ExtVector>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows[0].size();
  std::vector<ExtVector> t(cols, ExtVector(rows.size(), f.zero()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = rows[i][j];
  return ext_right_kernel(f, std::move(t));
}

std::optional<ExtVector> ext_solve(const ExtField& f,
                                   const std::vector<ExtVector>& rows,
                                   const ExtVector& b) {
  if (rows.size() != b.size()) throw std::invalid_argument("rhs length");
  if (rows.empty()) return ExtVector{};
  const std::size_t cols = rows[0].size();
  std::vector<ExtVector> aug = rows;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<std::size_t> pivots = ext_rref(f, aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  ExtVector x(cols, f.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  return x;
}

ExtElt ext_det(const ExtField& f, std::vector<ExtVector> m) {
  const std::size_t n = m.size();
  for (const auto& r : m)
    if (r.size() != n) throw std::invalid_argument("ext_det needs square input");
  if (n == 0) return f.one();
  if (n == 1) return m[0][0];
  if (n == 2)
    return f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
  if (n == 3) {
    ExtElt acc = f.zero();
    const int idx[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                           {0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
    for (int t = 0; t < 6; ++t) {
      ExtElt p = f.mul(f.mul(m[0][idx[t][0]], m[1][idx[t][1]]), m[2][idx[t][2]]);
      acc = t < 3 ? f.add(acc, p) : f.sub(acc, p);
    }
    return acc;
  }
  // Gaussian elimination with sign tracking.
  bool negate = false;
  ExtElt scale = f.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (!f.is_zero(m[i][c])) { piv = i; break; }
    if (piv == n) return f.zero();
    if (piv != c) { std::swap(m[piv], m[c]); negate = !negate; }
    scale = f.mul(scale, m[c][c]);
    ExtElt inv = f.inv(m[c][c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (f.is_zero(m[i][c])) continue;
      ExtElt mult = f.neg(f.mul(m[i][c], inv));
      for (std::size_t j = c; j < n; ++j)
        f.add_mul_inplace(m[i][j], mult, m[c][j]);
    }
  }
  return negate ? f.neg(scale) : scale;
}

}  // namespace rankforge
