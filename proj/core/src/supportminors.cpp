#include "rankforge/supportminors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rankforge {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
constexpr std::size_t kDenseColumnLimit = 20000;

std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Monomials of exact total degree d over K variables as non-decreasing
// variable lists, in lexicographic order of the lists.
std::vector<std::vector<std::uint32_t>> monomials_exact(std::size_t K,
                                                        std::size_t d) {
  std::vector<std::vector<std::uint32_t>> out;
  if (d == 0) {
    out.push_back({});
    return out;
  }
  if (K == 0) return out;
  std::vector<std::uint32_t> cur(d, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = d;
    while (i > 0 && cur[i - 1] == K - 1) --i;
    if (i == 0) break;
    std::uint32_t v = cur[i - 1] + 1;
    for (std::size_t j = i - 1; j < d; ++j) cur[j] = v;
  }
  return out;
}

// Multilinear monomials of degree lo..hi, degree-major then lexicographic.
std::vector<std::vector<std::uint32_t>> monomials_multilinear(std::size_t K,
                                                              std::size_t lo,
                                                              std::size_t hi) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::size_t d = lo; d <= hi; ++d) {
    auto layer = r_subsets(K, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

bool mono_less(const std::vector<std::uint32_t>& a,
               const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::size_t mono_index(const std::vector<std::vector<std::uint32_t>>& mons,
                       const std::vector<std::uint32_t>& m) {
  auto it = std::lower_bound(mons.begin(), mons.end(), m, mono_less);
  if (it == mons.end() || *it != m) return kNpos;
  return static_cast<std::size_t>(it - mons.begin());
}

// x-monomial lists for the degree-b column space and the equation
// multipliers in each base-field regime.
void check_regime(std::uint32_t q, std::size_t r, std::size_t b) {
  if (b < 1 || b + 1 > r + 2)
    throw std::invalid_argument(
        "linearization degree must satisfy 1 <= b < r + 2");
  if (q != 2 && q <= b)
    throw std::invalid_argument(
        "base field must either exceed the linearization degree or equal 2");
}

std::vector<std::vector<std::uint32_t>> column_xmons(std::uint32_t q,
                                                     std::size_t K,
                                                     std::size_t b) {
  return q == 2 ? monomials_multilinear(K, 1, b) : monomials_exact(K, b);
}

std::vector<std::vector<std::uint32_t>> equation_multipliers(std::uint32_t q,
                                                             std::size_t K,
                                                             std::size_t b) {
  return q == 2 ? monomials_multilinear(K, 0, b - 1)
                : monomials_exact(K, b - 1);
}

std::vector<std::vector<std::uint32_t>> parity_multipliers_for(std::uint32_t q,
                                                               std::size_t K,
                                                               std::size_t b) {
  return q == 2 ? monomials_multilinear(K, 1, b) : monomials_exact(K, b);
}

// mu * x_i as a sorted variable list; over F_2 a repeated variable collapses
// onto mu itself.
std::vector<std::uint32_t> monomial_times(const std::vector<std::uint32_t>& mu,
                                          std::uint32_t i, bool multilinear) {
  if (multilinear &&
      std::binary_search(mu.begin(), mu.end(), i))
    return mu;
  std::vector<std::uint32_t> out;
  out.reserve(mu.size() + 1);
  auto it = std::upper_bound(mu.begin(), mu.end(), i);
  out.insert(out.end(), mu.begin(), it);
  out.push_back(i);
  out.insert(out.end(), it, mu.end());
  return out;
}

SmSystem linearize_impl(const MinRankInstance& inst,
                        const std::vector<SmBilinearEq>& base, std::size_t b,
                        std::size_t n_prime, const DenseMatrix* parity,
                        bool rd_combined, std::size_t src_k) {
  const std::uint32_t q = inst.base.q();
  check_regime(q, inst.r, b);
  if (n_prime == kNpos) n_prime = inst.n;
  if (n_prime < inst.r + 1 || n_prime > inst.n)
    throw std::invalid_argument(
        "column restriction must keep between r + 1 and n columns");
  const bool multilinear = q == 2;

  std::vector<const SmBilinearEq*> eqs;
  eqs.reserve(base.size());
  for (const auto& eq : base) {
    if (eq.J.empty() || eq.J.back() < n_prime) eqs.push_back(&eq);
  }

  auto tsets = r_subsets(n_prime, inst.r);
  auto xmons = column_xmons(q, inst.K, b);
  auto mults = equation_multipliers(q, inst.K, b);
  std::vector<std::vector<std::uint32_t>> pmults;
  if (parity != nullptr) pmults = parity_multipliers_for(q, inst.K, b);

  const std::size_t n_t = tsets.size();
  const std::size_t sm_rows = mults.size() * eqs.size();
  const std::size_t parity_rows =
      parity == nullptr ? 0 : pmults.size() * parity->rows();
  const std::size_t cols = xmons.size() * n_t;

  SparseMatrix matrix(inst.base, sm_rows + parity_rows, cols);

  std::vector<std::pair<std::uint64_t, std::uint32_t>> buf;
  std::vector<std::uint32_t> tbuf;
  std::size_t row = 0;
  for (const auto& mu : mults) {
    for (const SmBilinearEq* eq : eqs) {
      buf.clear();
      for (std::size_t l = 0; l < eq->J.size(); ++l) {
        tbuf.clear();
        for (std::uint32_t c : eq->J)
          if (c != eq->J[l]) tbuf.push_back(c);
        const std::size_t t_idx = subset_rank(tbuf, n_prime);
        const FqVector& coeffs = eq->terms[l];
        for (std::uint32_t i = 0; i < coeffs.size(); ++i) {
          if (coeffs[i] == 0) continue;
          auto xm = monomial_times(mu, i, multilinear);
          const std::size_t x_idx = mono_index(xmons, xm);
          buf.emplace_back(
              static_cast<std::uint64_t>(x_idx) * n_t + t_idx, coeffs[i]);
        }
      }
      std::sort(buf.begin(), buf.end(),
                [](const auto& a, const auto& b2) { return a.first < b2.first; });
      std::size_t w = 0;
      while (w < buf.size()) {
        std::uint32_t acc = buf[w].second;
        std::size_t w2 = w + 1;
        while (w2 < buf.size() && buf[w2].first == buf[w].first) {
          acc = inst.base.add(acc, buf[w2].second);
          ++w2;
        }
        matrix.add_entry(row, static_cast<std::uint32_t>(buf[w].first), acc);
        w = w2;
      }
      ++row;
    }
  }
  if (parity != nullptr) {
    for (const auto& mu : pmults) {
      const std::size_t x_idx = mono_index(xmons, mu);
      for (std::size_t pr = 0; pr < parity->rows(); ++pr) {
        for (std::size_t t = 0; t < parity->cols(); ++t) {
          const std::uint32_t vv = parity->at(pr, t);
          if (vv != 0)
            matrix.add_entry(
                row, static_cast<std::uint32_t>(x_idx * n_t + t), vv);
        }
        ++row;
      }
    }
  }

  SmSystem sys{inst,
               std::move(matrix),
               std::move(xmons),
               std::move(tsets),
               std::move(mults),
               std::move(pmults),
               b,
               n_prime,
               sm_rows,
               parity_rows,
               rd_combined,
               src_k};
  return sys;
}

// Dense m x n value of sum_i x_i M_i.
DenseMatrix combination(const MinRankInstance& inst, const FqVector& x) {
  DenseMatrix s(inst.base, inst.m, inst.n);
  for (std::size_t i = 0; i < inst.K && i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t a = 0; a < inst.m; ++a)
      for (std::size_t c = 0; c < inst.n; ++c)
        s.set(a, c,
              inst.base.add(s.at(a, c),
                            inst.base.mul(x[i], inst.matrices[i].at(a, c))));
  }
  return s;
}

// Exact rank of a sparse matrix, feeding whichever side is narrower so the
// echelon basis stays small.
std::uint64_t sparse_rank(const SparseMatrix& m) {
  if (m.cols() <= m.rows()) {
    EchelonAccumulator acc(m.field(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) acc.add_row_sparse(m.row(i));
    return acc.rank();
  }
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> cols(
      m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& [c, v] : m.row(i))
      cols[c].emplace_back(static_cast<std::uint32_t>(i), v);
  EchelonAccumulator acc(m.field(), m.rows());
  for (const auto& col : cols) acc.add_row_sparse(col);
  return acc.rank();
}

}  // namespace

std::vector<SmBilinearEq> build_sm_base(const MinRankInstance& inst) {
  if (inst.r + 1 > inst.n)
    throw std::invalid_argument(
        "the stacked minors need at least r + 1 matrix columns");
  auto Js = r_subsets(inst.n, inst.r + 1);
  std::vector<SmBilinearEq> eqs;
  eqs.reserve(inst.m * Js.size());
  for (std::size_t j = 0; j < inst.m; ++j) {
    for (const auto& J : Js) {
      SmBilinearEq eq;
      eq.j = j;
      eq.J = J;
      eq.terms.assign(J.size(), FqVector(inst.K, 0));
      for (std::size_t l = 0; l < J.size(); ++l) {
        const bool negate = (l % 2) != 0;
        for (std::size_t i = 0; i < inst.K; ++i) {
          std::uint32_t v = inst.matrices[i].at(j, J[l]);
          eq.terms[l][i] = negate ? inst.base.neg(v) : v;
        }
      }
      eqs.push_back(std::move(eq));
    }
  }
  return eqs;
}

std::optional<std::size_t> SmSystem::column_index(
    const std::vector<std::uint32_t>& xvars,
    const std::vector<std::uint32_t>& T) const {
  const std::size_t x_idx = mono_index(xmons, xvars);
  if (x_idx == kNpos) return std::nullopt;
  if (T.size() != (tsets.empty() ? 0 : tsets[0].size())) return std::nullopt;
  if (!T.empty() && T.back() >= n_used) return std::nullopt;
  const std::size_t t_idx = subset_rank(T, n_used);
  if (t_idx >= tsets.size()) return std::nullopt;
  return x_idx * tsets.size() + t_idx;
}

SmMonomial SmSystem::column_monomial(std::size_t col) const {
  if (col >= columns()) throw std::out_of_range("column index out of range");
  SmMonomial m;
  m.xvars = xmons[col / tsets.size()];
  m.T = tsets[col % tsets.size()];
  return m;
}

SmRowOrigin SmSystem::row_origin(std::size_t row) const {
  SmRowOrigin o;
  if (row < sm_rows) {
    const std::size_t block = sm_rows / sm_multipliers.size();
    o.from_parity = false;
    o.multiplier = sm_multipliers[row / block];
    o.source_row = row % block;
    return o;
  }
  row -= sm_rows;
  if (row >= parity_rows) throw std::out_of_range("row index out of range");
  const std::size_t block = parity_rows / parity_multipliers.size();
  o.from_parity = true;
  o.multiplier = parity_multipliers[row / block];
  o.source_row = row % block;
  return o;
}

SmSystem linearize(const MinRankInstance& inst,
                   const std::vector<SmBilinearEq>& base, std::size_t b,
                   std::size_t n_prime) {
  return linearize_impl(inst, base, b, n_prime, nullptr, false, 0);
}

std::int64_t sm_expected_rank(std::uint32_t q, std::size_t m, std::size_t n,
                              std::size_t K, std::size_t r, std::size_t b) {
  check_regime(q, r, b);
  __int128 total = 0;
  auto term = [&](std::size_t i, std::size_t mult_choose) -> __int128 {
    return static_cast<__int128>(binom_u64(n, r + i)) *
           binom_u64(m + i - 1, i) * mult_choose;
  };
  if (q == 2) {
    for (std::size_t j = 1; j <= b; ++j)
      for (std::size_t i = 1; i <= j; ++i) {
        __int128 t = term(i, binom_u64(K, j - i));
        total += (i % 2 == 1) ? t : -t;
      }
  } else {
    for (std::size_t i = 1; i <= b; ++i) {
      __int128 t = term(i, binom_u64(K + b - i - 1, b - i));
      total += (i % 2 == 1) ? t : -t;
    }
  }
  if (total > std::numeric_limits<std::int64_t>::max() ||
      total < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("expected rank exceeds 64 bits");
  return static_cast<std::int64_t>(total);
}

std::uint64_t sm_monomial_count(std::uint32_t q, std::size_t n, std::size_t K,
                                std::size_t r, std::size_t b) {
  check_regime(q, r, b);
  if (q == 2) {
    std::uint64_t total = 0;
    for (std::size_t j = 1; j <= b; ++j)
      total += binom_u64(n, r) * binom_u64(K, j);
    return total;
  }
  return binom_u64(n, r) * binom_u64(K + b - 1, b);
}

std::uint64_t sm_predicted_rank(std::uint32_t q, std::size_t m, std::size_t n,
                                std::size_t K, std::size_t r, std::size_t b,
                                bool planted) {
  check_regime(q, r, b);
  const std::uint64_t plant_slack = planted ? 1 : 0;
  const std::uint64_t mon = sm_monomial_count(q, n, K, r, b);
  // A degree that already linearizes fully keeps every higher degree
  // saturated at its own full monomial count.
  for (std::size_t b2 = 1; b2 <= b; ++b2) {
    const std::int64_t raw = sm_expected_rank(q, m, n, K, r, b2);
    const std::uint64_t mon2 = sm_monomial_count(q, n, K, r, b2);
    if (raw >= 0 && static_cast<std::uint64_t>(raw) + plant_slack >= mon2)
      return mon - plant_slack;
  }
  const std::int64_t raw = sm_expected_rank(q, m, n, K, r, b);
  std::uint64_t pred = raw <= 0 ? 0 : static_cast<std::uint64_t>(raw);
  const std::uint64_t rows =
      binom_u64(n, r + 1) * m * equation_multipliers(q, K, b).size();
  pred = std::min(pred, rows);
  pred = std::min(pred, mon - plant_slack);
  return pred;
}

SmSystem build_rd_sm(const RdInstance& inst, std::size_t b,
                     std::size_t n_prime) {
  if (n_prime != kNpos && n_prime != inst.n)
    throw std::invalid_argument(
        "the combined build uses the instance's full column set (its parity "
        "rows come from the instance's own systematic form); truncate the "
        "instance to fewer columns first");
  MinRankInstance full = rd_to_minrank(inst);
  const std::size_t m = inst.field.m();
  MinRankInstance red{full.base, full.m,    full.n, full.K - (m - 1),
                      full.r,    full.seed, {},     std::nullopt};
  red.matrices.reserve(red.K);
  red.matrices.push_back(full.matrices[0]);
  for (std::size_t i = m; i < full.K; ++i)
    red.matrices.push_back(full.matrices[i]);
  if (inst.plant && !inst.field.is_zero(inst.plant->e[0])) {
    const ExtElt scale = inst.field.inv(inst.plant->e[0]);
    FqVector px;
    px.reserve(red.K);
    px.push_back(1);  // first coordinate of the rescaled first entry
    for (std::size_t j = 1; j <= inst.k; ++j) {
      const ExtElt ej = inst.field.mul(scale, inst.plant->e[j]);
      for (std::size_t t = 0; t < m; ++t) px.push_back(ej[t]);
    }
    red.plant = std::move(px);
  }
  auto base = build_sm_base(red);
  MaxMinSystem mm = build_maxmin(inst, 0);
  return linearize_impl(red, base, b, red.n, &mm.matrix, true, inst.k);
}

FqVector solve_sm(const SmSystem& sys, std::uint64_t seed,
                  SmSolverChoice solver) {
  const SparseMatrix& M = sys.matrix;
  const std::size_t R = M.rows(), C = M.cols();
  if (C == 0) throw std::invalid_argument("system has no columns");
  if (R + 1 < C) {
    std::ostringstream os;
    os << "system has " << R << " rows but needs at least " << C - 1
       << " to reach a one-dimensional solution space";
    throw SolveError(SolveFailReason::RANK_DEFICIENT, os.str());
  }
  const bool dense = solver == SmSolverChoice::DENSE ||
                     (solver == SmSolverChoice::AUTO && C < kDenseColumnLimit);
  if (dense) {
    EchelonAccumulator acc(M.field(), C);
    for (std::size_t i = 0; i < R; ++i) acc.add_row_sparse(M.row(i));
    auto kb = acc.kernel_basis();
    if (kb.empty())
      throw SolveError(SolveFailReason::NOT_FOUND,
                       "the linearized system has no nonzero solution");
    if (kb.size() > 1) {
      std::ostringstream os;
      os << "solution space has dimension " << kb.size() << " (measured rank "
         << acc.rank() << " of " << C << " columns";
      if (!sys.rd_combined) {
        try {
          os << "; predicted rank "
             << sm_predicted_rank(M.field().q(), sys.source.m, sys.n_used,
                                  sys.source.K, sys.source.r, sys.b, true);
        } catch (const std::exception&) {
        }
      }
      os << ")";
      throw SolveError(SolveFailReason::RANK_DEFICIENT, os.str());
    }
    return kb[0];
  }
  WiedemannResult res = wiedemann_kernel_element(M, seed);
  if (res.status == WiedemannStatus::FOUND) return *res.vector;
  if (res.status == WiedemannStatus::TRIVIAL_KERNEL)
    throw SolveError(SolveFailReason::NOT_FOUND,
                     "the linearized system has no nonzero solution");
  throw SolveError(SolveFailReason::NOT_FOUND,
                   "the black-box solver exhausted its retries without "
                   "finding a kernel vector");
}

SmSolution extract_solution(const FqVector& v, const SmSystem& sys) {
  if (v.size() != sys.columns())
    throw std::invalid_argument("value vector does not match the system");
  const PrimeField& F = sys.source.base;
  const bool multilinear = F.q() == 2;
  const std::size_t K = sys.source.K;
  const std::size_t b = sys.b;

  auto pivot_mono = [&](std::uint32_t i0) {
    return std::vector<std::uint32_t>(multilinear ? 1 : b, i0);
  };
  for (std::uint32_t i0 = 0; i0 < K; ++i0) {
    const auto pm = pivot_mono(i0);
    for (std::size_t t0 = 0; t0 < sys.tsets.size(); ++t0) {
      const auto pcol = sys.column_index(pm, sys.tsets[t0]);
      if (!pcol || v[*pcol] == 0) continue;
      const std::uint32_t pinv = F.inv(v[*pcol]);
      SmSolution sol;
      sol.x.assign(K, 0);
      sol.x[i0] = 1;
      for (std::uint32_t i = 0; i < K; ++i) {
        if (i == i0) continue;
        std::vector<std::uint32_t> num;
        if (multilinear) {
          if (b == 1)
            num = {i};
          else
            num = i < i0 ? std::vector<std::uint32_t>{i, i0}
                         : std::vector<std::uint32_t>{i0, i};
        } else {
          num.assign(b - 1, i0);
          num.insert(std::upper_bound(num.begin(), num.end(), i), i);
        }
        const auto ncol = sys.column_index(num, sys.tsets[t0]);
        if (!ncol)
          throw std::logic_error(
              "quotient monomial missing from the column space");
        sol.x[i] = F.mul(v[*ncol], pinv);
      }
      sol.minors.assign(sys.tsets.size(), 0);
      for (std::size_t t = 0; t < sys.tsets.size(); ++t) {
        const auto mcol = sys.column_index(pm, sys.tsets[t]);
        sol.minors[t] = F.mul(v[*mcol], pinv);
      }
      const DenseMatrix s = combination(sys.source, sol.x);
      const std::size_t rank = rref(s).rank;
      if (rank > sys.source.r) {
        std::ostringstream os;
        os << "extracted combination has rank " << rank << " above the target "
           << sys.source.r;
        throw SolveError(SolveFailReason::VERIFICATION_FAILED, os.str());
      }
      return sol;
    }
  }
  throw SolveError(SolveFailReason::NOT_FOUND,
                   "every candidate pivot monomial has value zero");
}

ExtVector recover_rd_error(const RdInstance& inst, const FqVector& x_reduced) {
  const ExtField& f = inst.field;
  const std::size_t m = f.m();
  const std::size_t k = inst.k;
  const std::size_t n = inst.n;
  if (x_reduced.size() != m * k + 1)
    throw std::invalid_argument(
        "reduced variable vector must have length m*k + 1");
  std::vector<ExtElt> esys(k + 1, f.zero());
  esys[0][0] = x_reduced[0];
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t t = 0; t < m; ++t)
      esys[j][t] = x_reduced[1 + (j - 1) * m + t];

  ExtVector etil(n, f.zero());
  for (std::size_t j = 0; j <= k; ++j) {
    if (f.is_zero(esys[j])) continue;
    for (std::size_t c = 0; c < n; ++c)
      f.add_mul_inplace(etil[c], esys[j], inst.gtilde[j][c]);
  }
  bool all_zero = true;
  for (const auto& e : etil)
    if (!f.is_zero(e)) {
      all_zero = false;
      break;
    }
  if (all_zero)
    throw SolveError(SolveFailReason::NOT_FOUND,
                     "the extracted solution expands to the zero word");

  // Scale the candidate direction so the received word minus the error is a
  // codeword: solve y = sum_i mu_i code_i + nu * candidate.
  std::vector<ExtVector> rows(n, ExtVector(k + 1, f.zero()));
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < k; ++i) rows[c][i] = inst.code[i][c];
    rows[c][k] = etil[c];
  }
  auto sol = ext_solve(f, rows, inst.y);
  if (!sol)
    throw SolveError(SolveFailReason::NOT_FOUND,
                     "the candidate error direction cannot express the "
                     "received word");
  const ExtElt nu = (*sol)[k];
  if (f.is_zero(nu))
    throw SolveError(SolveFailReason::NOT_FOUND,
                     "the received word already lies in the code");
  ExtVector e(n, f.zero());
  for (std::size_t c = 0; c < n; ++c) e[c] = f.mul(nu, etil[c]);
  if (rank_weight(f, e) > static_cast<int>(inst.r))
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "recovered error exceeds the target rank weight");
  ExtVector diff(n, f.zero());
  for (std::size_t c = 0; c < n; ++c) diff[c] = f.sub(inst.y[c], e[c]);
  if (!in_code(inst, diff))
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "the corrected word is not a codeword");
  return e;
}

std::size_t symmetric_minor_defects(const MinRankInstance& inst,
                                    std::size_t order, std::size_t trials,
                                    std::uint64_t seed) {
  if (order < 2) throw std::invalid_argument("tensor order must be at least 2");
  if (inst.r + order > inst.n)
    throw std::invalid_argument(
        "need r + order matrix columns for the stacked minors");
  const PrimeField& F = inst.base;
  const std::uint32_t q = F.q();
  std::mt19937_64 rng(seed ^ 0x53d9f3a1c779b0e4ULL);
  auto rand_elt = [&]() { return static_cast<std::uint32_t>(rng() % q); };

  const auto tuples = monomials_exact(inst.m, order);  // sorted index tuples
  std::size_t bad = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    FqVector x(inst.K);
    for (auto& xi : x) xi = rand_elt();
    const DenseMatrix rsum = combination(inst, x);

    DenseMatrix C(F, inst.r, inst.n);
    while (true) {
      for (std::size_t i = 0; i < inst.r; ++i)
        for (std::size_t j = 0; j < inst.n; ++j) C.set(i, j, rand_elt());
      if (rref(C).rank == inst.r) break;
    }

    // Symmetric tensor: one value per sorted index tuple.
    FqVector svals(tuples.size());
    for (auto& s : svals) s = rand_elt();

    // Random (r + order)-subset of the columns.
    std::vector<std::uint32_t> all(inst.n);
    for (std::uint32_t i = 0; i < inst.n; ++i) all[i] = i;
    for (std::size_t i = 0; i < all.size(); ++i)
      std::swap(all[i], all[rng() % (i + 1)]);
    std::vector<std::uint32_t> J(all.begin(), all.begin() + inst.r + order);
    std::sort(J.begin(), J.end());

    // Sum over all ordered row tuples, weighting by the symmetric tensor.
    std::uint32_t total = 0;
    std::vector<std::uint32_t> idx(order, 0);
    while (true) {
      std::vector<std::uint32_t> sorted(idx);
      std::sort(sorted.begin(), sorted.end());
      const std::uint32_t w = svals[mono_index(tuples, sorted)];
      if (w != 0) {
        DenseMatrix stacked(F, order + inst.r, J.size());
        for (std::size_t a = 0; a < order; ++a)
          for (std::size_t c = 0; c < J.size(); ++c)
            stacked.set(a, c, rsum.at(idx[a], J[c]));
        for (std::size_t a = 0; a < inst.r; ++a)
          for (std::size_t c = 0; c < J.size(); ++c)
            stacked.set(order + a, c, C.at(a, J[c]));
        total = F.add(total, F.mul(w, det(stacked)));
      }
      std::size_t p = order;
      while (p > 0 && idx[p - 1] + 1 == inst.m) --p;
      if (p == 0) break;
      ++idx[p - 1];
      for (std::size_t p2 = p; p2 < order; ++p2) idx[p2] = 0;
    }
    if (total != 0) ++bad;
  }
  return bad;
}

SmRankReport survey_sm_rank(const SmRankGrid& grid, std::size_t trials,
                            std::uint64_t seed, std::uint64_t work_cap,
                            std::size_t threads) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  struct Job {
    std::size_t m, n, K, r, b;
  };
  std::vector<Job> jobs;
  for (std::size_t m : grid.ms)
    for (std::size_t r : grid.rs)
      for (std::size_t off : grid.n_offsets)
        for (std::size_t K : grid.Ks)
          for (std::size_t b : grid.bs) {
            if (b >= r + 2) continue;
            jobs.push_back({m, r + off, K, r, b});
          }

  SmRankReport report;
  report.cells.resize(jobs.size());
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t ji = next.fetch_add(1);
      if (ji >= jobs.size()) break;
      const Job& job = jobs[ji];
      SmRankCell cell;
      cell.q = grid.q;
      cell.m = job.m;
      cell.n = job.n;
      cell.K = job.K;
      cell.r = job.r;
      cell.b = job.b;
      cell.predicted = sm_predicted_rank(grid.q, job.m, job.n, job.K, job.r,
                                         job.b, grid.planted);
      cell.cols = sm_monomial_count(grid.q, job.n, job.K, job.r, job.b);
      cell.rows = binom_u64(job.n, job.r + 1) * job.m *
                  equation_multipliers(grid.q, job.K, job.b).size();
      // Elimination work estimate: feeds * final rank * basis width, in
      // words (packed 64-fold over F_2).
      const std::uint64_t width = std::min(cell.rows, cell.cols);
      const std::uint64_t feeds = std::max(cell.rows, cell.cols);
      unsigned __int128 est = static_cast<unsigned __int128>(feeds) *
                              (cell.predicted ? cell.predicted : 1) * width;
      if (grid.q == 2) est /= 64;
      if (est > work_cap) {
        cell.skipped = true;
        std::ostringstream os;
        os << "skipped: estimated " << static_cast<double>(est)
           << " word operations exceed the cap";
        cell.note = os.str();
        report.cells[ji] = std::move(cell);
        continue;
      }
      bool all_match = true;
      for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t cell_seed =
            splitmix64(seed ^ splitmix64(ji * 1000003ULL + t));
        MinRankInstance inst = gen_minrank(grid.q, job.m, job.n, job.K, job.r,
                                           grid.planted, cell_seed);
        auto base = build_sm_base(inst);
        SmSystem sys = linearize(inst, base, job.b, job.n);
        const std::uint64_t rank = sparse_rank(sys.matrix);
        if (t == 0) cell.measured = rank;
        if (rank != cell.predicted) {
          all_match = false;
          std::ostringstream os;
          if (!cell.note.empty()) cell.note += "; ";
          os << "trial " << t << " measured " << rank << " vs predicted "
             << cell.predicted;
          cell.note += os.str();
        }
      }
      cell.match = all_match;
      report.cells[ji] = std::move(cell);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& cell : report.cells) {
    if (cell.skipped) {
      ++report.skipped_cells;
    } else {
      ++report.measured_cells;
      if (cell.match) ++report.matched;
    }
  }
  return report;
}

}  // namespace rankforge
