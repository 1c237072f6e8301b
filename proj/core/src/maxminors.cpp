#include "rankforge/maxminors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

namespace rankforge {

namespace {

std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

// Support matrix [I_r | C'] reconstructed from a minor vector normalized at
// the leading subset: the entry at row i, column j is read off the minor on
// columns {0..r-1} \ {i} u {j}, with a sign alternating in i. Minors are
// ranked over the first n_red coordinates; columns past n_red stay zero.
DenseMatrix support_from_minors(const PrimeField& base, const FqVector& minors,
                                std::size_t n_total, std::size_t n_red,
                                std::size_t r) {
  DenseMatrix cstar(base, r, n_total);
  for (std::size_t i = 0; i < r; ++i) cstar.set(i, i, 1);
  std::vector<std::uint32_t> t(r);
  for (std::size_t j = r; j < n_red; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t w = 0;
      for (std::size_t u = 0; u < r; ++u)
        if (u != i) t[w++] = static_cast<std::uint32_t>(u);
      t[w] = static_cast<std::uint32_t>(j);
      std::uint32_t c = minors[subset_rank(t, n_red)];
      bool flip = (r + i + 1) % 2 != 0;
      cstar.set(i, j, flip ? base.neg(c) : c);
    }
  }
  return cstar;
}

// Inverse of subset_rank over the same lexicographic order.
std::vector<std::uint32_t> subset_unrank(std::size_t rank, std::size_t n,
                                         std::size_t r) {
  std::vector<std::uint32_t> t(r);
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < r; ++i) {
    for (;; ++v) {
      std::uint64_t block = binom_u64(n - 1 - v, r - 1 - i);
      if (rank < block) break;
      rank -= static_cast<std::size_t>(block);
    }
    t[i] = v++;
  }
  return t;
}

// Reconstructs a reduced support matrix from a kernel vector of minors in an
// arbitrary scale. The vector's first nonzero entry names an invertible
// column subset; coordinates are reordered so that subset leads, the minor
// vector is carried across the reordering (a column permutation permutes the
// minors up to the sign of each index sequence), and the systematic
// reconstruction at the new leading subset is mapped back to the original
// column order. Columns at or past n_red in the result are left zero.
DenseMatrix support_from_minor_vector(const PrimeField& base, const FqVector& v,
                                      std::size_t n_total, std::size_t n_red,
                                      std::size_t r) {
  std::size_t nz = v.size();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) {
      nz = i;
      break;
    }
  if (nz == v.size())
    throw SolveError(SolveFailReason::RANK_DEFICIENT,
                     "minor vector is identically zero");
  if (nz == 0) {
    FqVector w(v);
    std::uint32_t scale = base.inv(w[0]);
    for (auto& x : w) x = base.mul(x, scale);
    return support_from_minors(base, w, n_total, n_red, r);
  }
  std::vector<std::uint32_t> to_old = subset_unrank(nz, n_red, r);
  {
    std::vector<bool> used(n_red, false);
    for (auto c : to_old) used[c] = true;
    for (std::uint32_t c = 0; c < n_red; ++c)
      if (!used[c]) to_old.push_back(c);
  }
  FqVector w(v.size(), 0);
  std::vector<std::uint32_t> mapped(r), sorted(r);
  for (const auto& T : r_subsets(n_red, r)) {
    for (std::size_t i = 0; i < r; ++i) mapped[i] = to_old[T[i]];
    sorted = mapped;
    std::sort(sorted.begin(), sorted.end());
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        inversions += mapped[i] > mapped[j] ? 1 : 0;
    std::uint32_t c = v[subset_rank(sorted, n_red)];
    w[subset_rank(T, n_red)] = inversions % 2 != 0 ? base.neg(c) : c;
  }
  std::uint32_t scale = base.inv(w[0]);
  for (auto& x : w) x = base.mul(x, scale);
  DenseMatrix tmp = support_from_minors(base, w, n_red, n_red, r);
  DenseMatrix out(base, r, n_total);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n_red; ++j)
      out.set(i, to_old[j], tmp.at(i, j));
  return out;
}

// Given a candidate support matrix covering the first n_red coordinates,
// recovers the extension-field coefficient row together with the error
// values at the remaining coordinates (treated as free unknowns), rescales
// the resulting word so that it differs from y by a codeword, and verifies
// the weight bound. Throws SolveError on any failure.
ExtVector recover_from_support(const RdInstance& inst,
                               const DenseMatrix& cstar, std::size_t n_red) {
  const ExtField& f = inst.field;
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  const std::size_t npar = n - k - 1;
  const std::size_t nfree = n - n_red;

  std::vector<ExtVector> prod(r + nfree, ExtVector(npar, f.zero()));
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t j = 0; j < n_red; ++j) {
      std::uint32_t c = cstar.at(t, j);
      if (!c) continue;
      for (std::size_t l = 0; l < npar; ++l)
        prod[t][l] = f.add(prod[t][l], f.scalar_mul(c, inst.htilde[l][j]));
    }
  for (std::size_t g = 0; g < nfree; ++g)
    for (std::size_t l = 0; l < npar; ++l)
      prod[r + g][l] = inst.htilde[l][n_red + g];

  auto lk = ext_left_kernel(f, prod);
  if (lk.size() != 1)
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "coefficient space of the candidate support has dimension " +
                         std::to_string(lk.size()));
  const ExtVector& s = lk[0];

  ExtVector ehat(n, f.zero());
  for (std::size_t j = 0; j < n_red; ++j)
    for (std::size_t t = 0; t < r; ++t) {
      std::uint32_t c = cstar.at(t, j);
      if (!c) continue;
      ehat[j] = f.add(ehat[j], f.scalar_mul(c, s[t]));
    }
  for (std::size_t g = 0; g < nfree; ++g) ehat[n_red + g] = s[r + g];

  // Express the candidate over (code basis, y); the y-coefficient is the
  // scale factor relating it to the actual error.
  std::vector<ExtVector> stacked_t(n, ExtVector(k + 1, f.zero()));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) stacked_t[j][i] = inst.code[i][j];
  for (std::size_t j = 0; j < n; ++j) stacked_t[j][k] = inst.y[j];
  auto lam = ext_solve(f, stacked_t, ehat);
  if (!lam)
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "candidate word left the extended code");
  ExtElt nu = (*lam)[k];
  if (f.is_zero(nu))
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "candidate word lies in the code itself");
  ExtElt nui = f.inv(nu);
  ExtVector e(n);
  for (std::size_t j = 0; j < n; ++j) e[j] = f.mul(nui, ehat[j]);

  if (rank_weight(f, e) > r)
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "recovered error exceeds the weight bound");
  ExtVector diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = f.sub(inst.y[j], e[j]);
  if (!in_code(inst, diff))
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "residual is not a codeword");
  return e;
}

// One direct attempt with no puncturing: build, solve for the unique minor
// direction, read off the support, recover and verify.
ExtVector attempt_plain(const RdInstance& inst) {
  const ExtField& f = inst.field;
  const PrimeField& base = f.base();
  MaxMinSystem sys = build_maxmin(inst, 0);
  const std::size_t cols = sys.matrix.cols();
  EchelonAccumulator acc(base, cols);
  for (std::size_t i = 0; i < sys.matrix.rows(); ++i)
    acc.add_row(FqVector(sys.matrix.row(i), sys.matrix.row(i) + cols));
  auto kb = acc.kernel_basis();
  if (kb.size() != 1)
    throw SolveError(SolveFailReason::RANK_DEFICIENT,
                     "solution space has dimension " +
                         std::to_string(kb.size()));
  DenseMatrix cstar =
      support_from_minor_vector(base, kb[0], inst.n, inst.n, inst.r);
  return recover_from_support(inst, cstar, inst.n);
}

// One attempt through the punctured route: solve the instance restricted to
// its first n-p coordinates, lift the recovered support, and re-solve the
// full instance on that support.
ExtVector attempt_punctured(const RdInstance& inst, std::size_t p) {
  const ExtField& f = inst.field;
  const std::size_t np = inst.n - p;
  const std::size_t m = f.m();

  std::vector<ExtVector> code(inst.k);
  for (std::size_t i = 0; i < inst.k; ++i)
    code[i] = ExtVector(inst.code[i].begin(), inst.code[i].begin() + np);
  ExtVector y(inst.y.begin(), inst.y.begin() + np);
  std::optional<RdInstance> sub;
  try {
    sub = make_rd_instance(f, inst.r, std::move(code), std::move(y),
                           std::nullopt, inst.seed);
  } catch (const std::runtime_error&) {
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "punctured instance lost the systematic form");
  }
  ExtVector esub = attempt_plain(*sub);

  // Basis of the subspace spanned by the punctured error's entries.
  DenseMatrix coords(f.base(), np, m);
  for (std::size_t j = 0; j < np; ++j)
    for (std::size_t i = 0; i < m; ++i) coords.set(j, i, esub[j][i]);
  auto rr = rref(coords);
  ExtVector basis;
  for (std::size_t i = 0; i < rr.rank; ++i)
    basis.push_back(ExtElt(rr.reduced.row(i), rr.reduced.row(i) + m));

  auto e = solve_with_support(inst, basis);
  if (!e)
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "support did not extend to the full instance");
  if (rank_weight(f, *e) > inst.r)
    throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                     "lifted error exceeds the weight bound");
  return *e;
}

void check_build_dims(const RdInstance& inst, std::size_t p) {
  if (p > inst.n || inst.n - p < inst.k + 2 ||
      inst.n - p - inst.k - 1 < inst.r)
    throw std::invalid_argument(
        "puncturing leaves fewer parity rows than the weight");
}

}  // namespace

std::vector<std::vector<std::uint32_t>> r_subsets(std::size_t n,
                                                  std::size_t r) {
  std::vector<std::vector<std::uint32_t>> out;
  if (r > n) return out;
  std::vector<std::uint32_t> cur(r);
  std::iota(cur.begin(), cur.end(), 0u);
  while (true) {
    out.push_back(cur);
    std::size_t i = r;
    while (i > 0 && cur[i - 1] == n - r + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::size_t subset_rank(const std::vector<std::uint32_t>& t, std::size_t n) {
  const std::size_t r = t.size();
  std::uint64_t rank = 0;
  std::uint32_t start = 0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::uint32_t v = start; v < t[i]; ++v)
      rank += binom_u64(n - 1 - v, r - 1 - i);
    start = t[i] + 1;
  }
  return static_cast<std::size_t>(rank);
}

ExtElt maxmin_coefficient(const RdInstance& inst,
                          const std::vector<std::uint32_t>& t,
                          const std::vector<std::uint32_t>& j) {
  const ExtField& f = inst.field;
  if (t.size() != j.size())
    throw std::invalid_argument("subset sizes differ");
  const std::size_t d = t.size();
  for (auto v : t)
    if (v >= inst.n) throw std::invalid_argument("coordinate out of range");
  for (auto v : j)
    if (v >= inst.n - inst.k - 1)
      throw std::invalid_argument("parity index out of range");
  std::vector<ExtVector> sub(d, ExtVector(d));
  for (std::size_t ti = 0; ti < d; ++ti)
    for (std::size_t ji = 0; ji < d; ++ji)
      sub[ti][ji] = inst.htilde[j[ji]][t[ti]];
  return ext_det(f, std::move(sub));
}

MaxMinSystem build_maxmin(const RdInstance& inst, std::size_t p) {
  const ExtField& f = inst.field;
  const PrimeField& base = f.base();
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  const std::size_t m = f.m();
  check_build_dims(inst, p);
  const std::size_t npar = n - p - k - 1;
  auto columns = r_subsets(n - p, r);
  auto jsets = r_subsets(npar, r);
  DenseMatrix mat(base, m * jsets.size(), columns.size());

  // Coordinate subsets T with a nonzero coefficient split into a head inside
  // the systematic block {0..k} and a tail matched against J (the parity
  // rows are unit vectors past position k). Enumerate them as (head, subset
  // of J) pairs instead of filtering all of columns.
  std::vector<std::vector<std::vector<std::uint32_t>>> heads(r + 1),
      jpos(r + 1);
  for (std::size_t s = 0; s <= r; ++s) {
    heads[s] = r_subsets(k + 1, r - s);
    jpos[s] = r_subsets(r, s);
  }

  std::vector<std::uint32_t> t(r);
  for (std::size_t jd = 0; jd < jsets.size(); ++jd) {
    const auto& J = jsets[jd];
    for (std::size_t s = 0; s <= r; ++s) {
      for (const auto& pos : jpos[s]) {
        for (const auto& head : heads[s]) {
          for (std::size_t i = 0; i + s < r; ++i) t[i] = head[i];
          for (std::size_t i = 0; i < s; ++i)
            t[r - s + i] = static_cast<std::uint32_t>(k + 1 + J[pos[i]]);
          std::vector<ExtVector> sub(r, ExtVector(r));
          for (std::size_t ti = 0; ti < r; ++ti)
            for (std::size_t ji = 0; ji < r; ++ji)
              sub[ti][ji] = inst.htilde[J[ji]][t[ti]];
          ExtElt h = ext_det(f, std::move(sub));
          if (f.is_zero(h)) continue;
          std::size_t col = subset_rank(t, n - p);
          for (std::size_t i = 0; i < m; ++i)
            if (h[i]) mat.set(jd * m + i, col, h[i]);
        }
      }
    }
  }
  return {std::move(mat), std::move(columns), p, 0, {}};
}

ExtVector solve_overdetermined(const RdInstance& inst, std::size_t p) {
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  const std::size_t m = inst.field.m();
  check_build_dims(inst, p);
  if (m * binom_u64(n - p - k - 1, r) + 1 < binom_u64(n - p, r))
    throw std::invalid_argument("system is underdetermined at this puncturing");

  std::mt19937_64 rng(inst.seed ^ 0x9e3779b97f4a7c15ULL);
  std::optional<SolveError> last;
  for (std::size_t attempt = 0; attempt <= n; ++attempt) {
    try {
      if (attempt == 0)
        return p == 0 ? attempt_plain(inst) : attempt_punctured(inst, p);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng() % (i + 1)]);
      std::vector<ExtVector> code(k, ExtVector(n));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t jc = 0; jc < n; ++jc)
          code[i][jc] = inst.code[i][perm[jc]];
      ExtVector y(n);
      for (std::size_t jc = 0; jc < n; ++jc) y[jc] = inst.y[perm[jc]];
      RdInstance per =
          make_rd_instance(inst.field, r, std::move(code), std::move(y),
                           std::nullopt, inst.seed + attempt);
      ExtVector ep = p == 0 ? attempt_plain(per) : attempt_punctured(per, p);
      ExtVector e(n, inst.field.zero());
      for (std::size_t jc = 0; jc < n; ++jc) e[perm[jc]] = ep[jc];
      return e;
    } catch (const SolveError& err) {
      last = err;
    } catch (const std::runtime_error&) {
      // The permuted leading block was singular; draw another permutation.
    }
  }
  if (last) throw *last;
  throw SolveError(SolveFailReason::VERIFICATION_FAILED,
                   "no permutation produced a systematic instance");
}

namespace {

// One hybrid pass over the instance as given: specializes the trailing a
// support columns and enumerates every assignment, accepting a guess when
// the substituted system's kernel is one-dimensional and the reconstructed
// reduced support extends to a verified error. The public wrapper retries
// under coordinate permutations when every guess fails.
ExtVector hybrid_attempt(const RdInstance& inst, std::size_t a,
                         std::size_t threads) {
  const ExtField& f = inst.field;
  const PrimeField& base = f.base();
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  const std::size_t m = f.m();
  const std::uint32_t q = base.q();
  check_build_dims(inst, 0);
  if (a > n - r)
    throw std::invalid_argument("specializing that many columns leaves no "
                                "unknown support block");
  if (m * binom_u64(n - k - 1, r) + 1 < binom_u64(n - a, r))
    throw std::invalid_argument(
        "system is underdetermined even after specialization");

  unsigned __int128 tot128 = 1;
  for (std::size_t i = 0; i < a * r; ++i) {
    tot128 *= q;
    if (tot128 > (static_cast<unsigned __int128>(1) << 62))
      throw std::invalid_argument("specialization space exceeds 2^62 guesses");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(tot128);

  MaxMinSystem full = build_maxmin(inst, 0);
  const std::size_t nred = binom_u64(n - a, r);
  const std::size_t rows = full.matrix.rows();

  // gamma-independent expansion of each minor over the specialized columns:
  // c_T = sum over row subsets R of +-det(gamma_{R, tail}) * c_{head u R},
  // where tail collects T's specialized columns and terms whose R collides
  // with the head vanish. Signs come from the two cofactor expansions (of T
  // along its specialized positions and of head u R along R's positions).
  static constexpr std::uint32_t kUnitTerm =
      std::numeric_limits<std::uint32_t>::max();
  struct Term {
    std::uint32_t redcol;
    std::uint32_t detid;  // kUnitTerm: coefficient is exactly 1
    bool negate;
  };
  std::vector<std::vector<Term>> expansion(full.columns.size());
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>,
           std::uint32_t>
      detids;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>
      detkeys;
  for (std::size_t ci = 0; ci < full.columns.size(); ++ci) {
    const auto& T = full.columns[ci];
    std::vector<std::uint32_t> head, tail, pos;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (T[i] >= n - a) {
        tail.push_back(T[i] - static_cast<std::uint32_t>(n - a));
        pos.push_back(static_cast<std::uint32_t>(i));
      } else {
        head.push_back(T[i]);
      }
    }
    if (tail.empty()) {
      expansion[ci].push_back(
          {static_cast<std::uint32_t>(subset_rank(T, n - a)), kUnitTerm,
           false});
      continue;
    }
    std::size_t sum_pos = std::accumulate(pos.begin(), pos.end(), 0u);
    for (const auto& rset : r_subsets(r, tail.size())) {
      bool collide = false;
      for (auto v : rset)
        collide |= std::binary_search(head.begin(), head.end(), v);
      if (collide) continue;
      std::vector<std::uint32_t> that(head);
      that.insert(that.end(), rset.begin(), rset.end());
      std::sort(that.begin(), that.end());
      std::size_t sum_rows = std::accumulate(rset.begin(), rset.end(), 0u);
      std::size_t sum_phat = 0;
      for (auto v : rset)
        sum_phat += std::lower_bound(that.begin(), that.end(), v) -
                    that.begin();
      bool s1 = (sum_rows + sum_pos) % 2 != 0;
      bool s2 = (sum_rows + sum_phat) % 2 != 0;
      auto key = std::make_pair(rset, tail);
      auto it = detids.find(key);
      std::uint32_t id;
      if (it == detids.end()) {
        id = static_cast<std::uint32_t>(detkeys.size());
        detids.emplace(key, id);
        detkeys.push_back(key);
      } else {
        id = it->second;
      }
      expansion[ci].push_back(
          {static_cast<std::uint32_t>(subset_rank(that, n - a)), id,
           s1 != s2});
    }
  }

  auto try_guess = [&](std::uint64_t gi) -> std::optional<ExtVector> {
    std::vector<FqVector> gamma(a, FqVector(r));
    std::uint64_t d = gi;
    for (std::size_t col = 0; col < a; ++col)
      for (std::size_t row = 0; row < r; ++row) {
        gamma[col][row] = static_cast<std::uint32_t>(d % q);
        d /= q;
      }
    std::vector<std::uint32_t> dets(detkeys.size());
    for (std::size_t id = 0; id < detkeys.size(); ++id) {
      const auto& [rset, tcols] = detkeys[id];
      DenseMatrix g(base, rset.size(), rset.size());
      for (std::size_t u = 0; u < rset.size(); ++u)
        for (std::size_t v = 0; v < rset.size(); ++v)
          g.set(u, v, gamma[tcols[v]][rset[u]]);
      dets[id] = det(g);
    }
    DenseMatrix red(base, rows, nred);
    for (std::size_t row = 0; row < rows; ++row)
      for (std::size_t ci = 0; ci < full.columns.size(); ++ci) {
        std::uint32_t coeff = full.matrix.at(row, ci);
        if (!coeff) continue;
        for (const Term& term : expansion[ci]) {
          std::uint32_t w =
              term.detid == kUnitTerm ? 1u : dets[term.detid];
          if (!w) continue;
          if (term.negate) w = base.neg(w);
          red.set(row, term.redcol,
                  base.add(red.at(row, term.redcol), base.mul(coeff, w)));
        }
      }
    auto kb = right_kernel(red);
    if (kb.size() != 1) return std::nullopt;
    try {
      DenseMatrix cstar = support_from_minor_vector(base, kb[0], n, n - a, r);
      return recover_from_support(inst, cstar, n - a);
    } catch (const SolveError&) {
      return std::nullopt;
    }
  };

  if (threads <= 1) {
    for (std::uint64_t gi = 0; gi < total; ++gi)
      if (auto e = try_guess(gi)) return *e;
    throw SolveError(SolveFailReason::NOT_FOUND,
                     "every specialization guess failed");
  }

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  std::optional<ExtVector> best_e;
  std::mutex best_mu;
  std::exception_ptr fail;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      try {
        while (true) {
          std::uint64_t gi = next.fetch_add(1);
          if (gi >= total || gi > best.load()) break;
          auto e = try_guess(gi);
          if (!e) continue;
          std::lock_guard<std::mutex> lock(best_mu);
          if (gi < best.load()) {
            best.store(gi);
            best_e = std::move(*e);
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(best_mu);
        if (!fail) fail = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (fail) std::rethrow_exception(fail);
  if (best_e) return *best_e;
  throw SolveError(SolveFailReason::NOT_FOUND,
                   "every specialization guess failed");
}

}  // namespace

ExtVector solve_hybrid(const RdInstance& inst, std::size_t a,
                       std::size_t threads) {
  if (a == 0) return solve_overdetermined(inst, 0);
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  std::mt19937_64 rng(inst.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::optional<SolveError> last;
  for (std::size_t attempt = 0; attempt <= n; ++attempt) {
    try {
      if (attempt == 0) return hybrid_attempt(inst, a, threads);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng() % (i + 1)]);
      std::vector<ExtVector> code(k, ExtVector(n));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t jc = 0; jc < n; ++jc)
          code[i][jc] = inst.code[i][perm[jc]];
      ExtVector y(n);
      for (std::size_t jc = 0; jc < n; ++jc) y[jc] = inst.y[perm[jc]];
      RdInstance per =
          make_rd_instance(inst.field, r, std::move(code), std::move(y),
                           std::nullopt, inst.seed + attempt);
      ExtVector ep = hybrid_attempt(per, a, threads);
      ExtVector e(n, inst.field.zero());
      for (std::size_t jc = 0; jc < n; ++jc) e[perm[jc]] = ep[jc];
      return e;
    } catch (const SolveError& err) {
      last = err;
    } catch (const std::runtime_error&) {
      // Permuted code has a singular systematic block; draw another.
    }
  }
  if (last) throw *last;
  throw SolveError(SolveFailReason::NOT_FOUND,
                   "no coordinate permutation produced a solvable instance");
}

RankHeuristicResult verify_rank_heuristic(std::uint32_t q, std::uint32_t m,
                                          std::size_t n, std::size_t k,
                                          std::size_t r, std::size_t p,
                                          std::size_t trials,
                                          std::uint64_t seed) {
  if (n < k + 2 + p || n - p - k - 1 < r)
    throw std::invalid_argument("parameters leave no parity subsets");
  if (static_cast<std::uint64_t>(m) * binom_u64(n - p - k - 1, r) + 1 <
      binom_u64(n - p, r))
    throw std::invalid_argument("parameters are not overdetermined");
  RankHeuristicResult res;
  res.trials = trials;
  res.expected_rank = binom_u64(n - p, r) - 1;
  for (std::size_t t = 0; t < trials; ++t) {
    RdInstance inst = gen_rd(q, m, n, k, r, seed + t);
    MaxMinSystem sys = build_maxmin(inst, p);
    EchelonAccumulator acc(inst.field.base(), sys.matrix.cols());
    for (std::size_t i = 0; i < sys.matrix.rows(); ++i)
      acc.add_row(FqVector(sys.matrix.row(i),
                           sys.matrix.row(i) + sys.matrix.cols()));
    if (acc.rank() == res.expected_rank) ++res.hits;
  }
  return res;
}

}  // namespace rankforge
