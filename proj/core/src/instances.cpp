#include "rankforge/instances.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace rankforge {

namespace {

using nlohmann::ordered_json;

ExtVector random_ext_vector(const ExtField& f, std::size_t n,
                            std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, f.q() - 1);
  ExtVector v(n, f.zero());
  for (auto& e : v)
    for (auto& c : e) c = d(rng);
  return v;
}

DenseMatrix random_full_rank(const PrimeField& f, std::size_t rows,
                             std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, f.q() - 1);
  for (;;) {
    DenseMatrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d(rng));
    if (rref(m).rank == std::min(rows, cols)) return m;
  }
}

// Column t of the m x r matrix S, read as an element of F_{q^m}.
ExtElt s_column(const ExtField& f, const DenseMatrix& s, std::size_t t) {
  ExtElt e = f.zero();
  for (std::size_t i = 0; i < f.m(); ++i) e[i] = s.at(i, t);
  return e;
}

ExtVector plant_error(const ExtField& f, const DenseMatrix& s,
                      const DenseMatrix& c) {
  const std::size_t r = s.cols(), n = c.cols();
  ExtVector e(n, f.zero());
  for (std::size_t t = 0; t < r; ++t) {
    ExtElt beta = s_column(f, s, t);
    for (std::size_t j = 0; j < n; ++j) {
      ExtElt term = f.scalar_mul(c.at(t, j), beta);
      e[j] = f.add(e[j], term);
    }
  }
  return e;
}

// Dual basis of the instance's original code (right kernel of the k x n
// basis matrix).
std::vector<ExtVector> code_parity(const RdInstance& inst) {
  return ext_right_kernel(inst.field, inst.code);
}

std::optional<ExtVector> solve_with_support_parity(
    const RdInstance& inst, const ExtVector& basis,
    const std::vector<ExtVector>& parity) {
  const ExtField& f = inst.field;
  const std::size_t n = inst.n, rr = basis.size(), mm = f.m();
  const PrimeField& base = f.base();
  // Unknowns C[t][j] over F_q at flat index t*n + j; one ext equation per
  // parity vector h: sum_{t,j} (beta_t h_j) C[t][j] = sum_j y_j h_j.
  DenseMatrix a(base, mm * parity.size(), rr * n);
  FqVector rhs(mm * parity.size(), 0);
  for (std::size_t hi = 0; hi < parity.size(); ++hi) {
    const ExtVector& h = parity[hi];
    ExtElt syn = f.zero();
    for (std::size_t j = 0; j < n; ++j)
      f.add_mul_inplace(syn, inst.y[j], h[j]);
    for (std::size_t i = 0; i < mm; ++i) rhs[hi * mm + i] = syn[i];
    for (std::size_t t = 0; t < rr; ++t)
      for (std::size_t j = 0; j < n; ++j) {
        ExtElt coef = f.mul(basis[t], h[j]);
        for (std::size_t i = 0; i < mm; ++i)
          a.set(hi * mm + i, t * n + j, coef[i]);
      }
  }
  auto x = solve(a, rhs);
  if (!x) return std::nullopt;
  ExtVector e(n, f.zero());
  for (std::size_t t = 0; t < rr; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      ExtElt term = f.scalar_mul((*x)[t * n + j], basis[t]);
      e[j] = f.add(e[j], term);
    }
  return e;
}

bool is_zero_fq(const FqVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return !x; });
}

ordered_json ext_vector_json(const ExtVector& v) {
  ordered_json a = ordered_json::array();
  for (const auto& e : v) a.push_back(e);
  return a;
}

ordered_json dense_json(const DenseMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ExtVector ext_vector_from_json(const ExtField& f, const ordered_json& a) {
  ExtVector v;
  for (const auto& ej : a) {
    ExtElt e = ej.get<ExtElt>();
    if (e.size() != f.m()) throw std::runtime_error("bad field element length");
    for (auto c : e)
      if (c >= f.q()) throw std::runtime_error("coefficient out of range");
    v.push_back(std::move(e));
  }
  return v;
}

DenseMatrix dense_from_json(const PrimeField& f, const ordered_json& a,
                            std::size_t rows, std::size_t cols) {
  if (a.size() != rows) throw std::runtime_error("bad matrix row count");
  DenseMatrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = a[i];
    if (row.size() != cols) throw std::runtime_error("bad matrix column count");
    for (std::size_t j = 0; j < cols; ++j) {
      std::uint32_t v = row[j].get<std::uint32_t>();
      if (v >= f.q()) throw std::runtime_error("entry out of range");
      m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace

RdInstance make_rd_instance(ExtField field, std::size_t r,
                            std::vector<ExtVector> code, ExtVector y,
                            std::optional<RdPlant> plant, std::uint64_t seed) {
  const std::size_t k = code.size();
  const std::size_t n = y.size();
  if (k + 1 >= n) throw std::invalid_argument("need k + 1 < n");
  if (r == 0 || r > field.m() || r > n)
    throw std::invalid_argument("need 0 < r <= min(m, n)");
  for (const auto& row : code)
    if (row.size() != n) throw std::invalid_argument("ragged code basis");

  // Systematic form of the extended code: stack the basis and y, reduce, and
  // require pivots in the first k+1 columns.
  std::vector<ExtVector> g = code;
  g.push_back(y);
  std::vector<std::size_t> pivots = ext_rref(field, g);
  bool systematic = pivots.size() == k + 1;
  for (std::size_t i = 0; systematic && i < pivots.size(); ++i)
    systematic = pivots[i] == i;
  if (!systematic)
    throw std::runtime_error("leading block of extended generator is singular");

  // Parity check (-R^T | I) from the systematic rows (I | R).
  std::vector<ExtVector> h(n - k - 1, ExtVector(n, field.zero()));
  for (std::size_t l = 0; l + k + 1 < n; ++l) {
    for (std::size_t i = 0; i < k + 1; ++i) h[l][i] = field.neg(g[i][k + 1 + l]);
    h[l][k + 1 + l] = field.one();
  }

  RdInstance inst{std::move(field), n,           k,
                  r,                seed,        std::move(code),
                  std::move(y),     std::move(g), std::move(h),
                  std::move(plant)};
  return inst;
}

RdInstance gen_rd(std::uint32_t q, std::uint32_t m, std::size_t n,
                  std::size_t k, std::size_t r, std::uint64_t seed) {
  if (r == 0) throw std::invalid_argument("r must be positive");
  if (k + 1 >= n) throw std::invalid_argument("need k + 1 < n");
  if (r > m || r > n) throw std::invalid_argument("need r <= min(m, n)");
  ExtField field(PrimeField(q), m);
  std::mt19937_64 rng(seed);
  for (;;) {
    std::vector<ExtVector> code;
    for (std::size_t i = 0; i < k; ++i)
      code.push_back(random_ext_vector(field, n, rng));
    DenseMatrix s = random_full_rank(field.base(), m, r, rng);
    DenseMatrix c = random_full_rank(field.base(), r, n, rng);
    ExtVector e = plant_error(field, s, c);
    // y = (random codeword) + e.
    ExtVector lambda = random_ext_vector(field, k, rng);
    ExtVector y(n, field.zero());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j)
        field.add_mul_inplace(y[j], lambda[i], code[i][j]);
    for (std::size_t j = 0; j < n; ++j) y[j] = field.add(y[j], e[j]);
    try {
      return make_rd_instance(field, r, std::move(code), std::move(y),
                              RdPlant{std::move(e), std::move(s), std::move(c)},
                              seed);
    } catch (const std::runtime_error&) {
      // Singular leading block: resample the whole draw.
    }
  }
}

MinRankInstance gen_minrank(std::uint32_t q, std::size_t m, std::size_t n,
                            std::size_t K, std::size_t r, bool planted,
                            std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (m == 0 || n == 0 || r == 0)
    throw std::invalid_argument("dimensions must be positive");
  PrimeField base(q);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> d(0, q - 1);
  std::vector<DenseMatrix> mats;
  for (std::size_t i = 0; i < K; ++i) {
    DenseMatrix mm(base, m, n);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < n; ++b) mm.set(a, b, d(rng));
    mats.push_back(std::move(mm));
  }
  std::optional<FqVector> plant;
  if (planted) {
    FqVector x(K);
    do {
      for (auto& v : x) v = d(rng);
    } while (x[K - 1] == 0);
    // Random target of rank <= r, as a product of full-size factors.
    DenseMatrix a(base, m, r), b(base, r, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < r; ++j) a.set(i, j, d(rng));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) b.set(i, j, d(rng));
    const std::uint32_t xk_inv = base.inv(x[K - 1]);
    DenseMatrix& last = mats[K - 1];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t low = 0;
        for (std::size_t t = 0; t < r; ++t)
          low += static_cast<std::uint64_t>(a.at(i, t)) * b.at(t, j);
        std::uint32_t want = static_cast<std::uint32_t>(low % q);
        std::uint64_t rest = 0;
        for (std::size_t idx = 0; idx + 1 < K; ++idx)
          rest += static_cast<std::uint64_t>(x[idx]) * mats[idx].at(i, j);
        std::uint32_t diff =
            base.sub(want, static_cast<std::uint32_t>(rest % q));
        last.set(i, j, base.mul(xk_inv, diff));
      }
    plant = std::move(x);
  }
  return MinRankInstance{base, m, n, K, r, seed, std::move(mats),
                         std::move(plant)};
}

bool minrank_uniqueness_ok(std::size_t m, std::size_t n, std::size_t K,
                           std::size_t r) {
  if (r >= m || r >= n) return false;
  return K <= (m - r) * (n - r);
}

MinRankInstance rd_to_minrank(const RdInstance& inst) {
  const ExtField& f = inst.field;
  const std::size_t m = f.m(), k1 = inst.k + 1;
  std::vector<DenseMatrix> mats;
  ExtElt alpha = f.gen();
  for (std::size_t j = 0; j < k1; ++j) {
    ExtElt power = f.one();
    for (std::size_t i = 0; i < m; ++i) {
      ExtVector scaled(inst.n, f.zero());
      for (std::size_t c = 0; c < inst.n; ++c)
        scaled[c] = f.mul(power, inst.gtilde[j][c]);
      auto coords = unfold(f, scaled);
      DenseMatrix mm(f.base(), m, inst.n);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < inst.n; ++b) mm.set(a, b, coords[a][b]);
      mats.push_back(std::move(mm));
      if (i + 1 < m) power = f.mul(power, alpha);
    }
  }
  std::optional<FqVector> plant;
  if (inst.plant) {
    // e is in the extended code; with a systematic generator its combination
    // coefficients are its first k+1 entries, whose F_q-coordinates give x.
    FqVector x;
    for (std::size_t j = 0; j < k1; ++j)
      for (std::size_t i = 0; i < m; ++i) x.push_back(inst.plant->e[j][i]);
    plant = std::move(x);
  }
  return MinRankInstance{f.base(),  m,        inst.n,          m * k1, inst.r,
                         inst.seed, std::move(mats), std::move(plant)};
}

bool in_code(const RdInstance& inst, const ExtVector& v) {
  std::vector<ExtVector> rows = inst.code;
  std::size_t base_rank = ext_rank(inst.field, rows);
  rows.push_back(v);
  return ext_rank(inst.field, rows) == base_rank;
}

std::optional<ExtVector> solve_with_support(const RdInstance& inst,
                                            const ExtVector& support_basis) {
  return solve_with_support_parity(inst, support_basis, code_parity(inst));
}

std::optional<ExtVector> brute_force_rd(const RdInstance& inst,
                                        std::uint64_t max_supports) {
  const ExtField& f = inst.field;
  const std::size_t m = f.m(), r = inst.r;
  if (in_code(inst, inst.y)) return ExtVector(inst.n, f.zero());

  // Count r-dimensional subspaces of F_q^m: sum over reduced-echelon shapes.
  const std::uint64_t q = f.q();
  std::uint64_t total = 0;
  std::vector<std::size_t> piv(r);
  for (std::size_t i = 0; i < r; ++i) piv[i] = i;
  auto free_cells = [&](const std::vector<std::size_t>& p) {
    std::size_t cells = 0;
    for (std::size_t i = 0; i < r; ++i)
      cells += (m - 1 - p[i]) - (r - 1 - i);
    return cells;
  };
  auto next_combo = [&](std::vector<std::size_t>& p) {
    std::size_t i = r;
    while (i-- > 0) {
      if (p[i] + 1 <= m - (r - i)) {
        ++p[i];
        for (std::size_t j = i + 1; j < r; ++j) p[j] = p[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    std::size_t cells = free_cells(piv);
    std::uint64_t cnt = 1;
    for (std::size_t i = 0; i < cells; ++i) {
      if (cnt > max_supports) break;
      cnt *= q;
    }
    total = total > max_supports ? total : total + cnt;
    if (total > max_supports)
      throw FeasibilityError("support enumeration exceeds the budget");
  } while (next_combo(piv));

  auto parity = code_parity(inst);

  // Enumerate supports: pivot sets lexicographically, free entries as an
  // odometer (lowest cell fastest).
  for (std::size_t i = 0; i < r; ++i) piv[i] = i;
  do {
    std::vector<bool> is_piv(m, false);
    for (std::size_t c : piv) is_piv[c] = true;
    // Free coordinate positions (row, col), col > pivot of the row.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = piv[i] + 1; c < m; ++c)
        if (!is_piv[c]) cells.emplace_back(i, c);
    std::vector<std::uint32_t> vals(cells.size(), 0);
    for (;;) {
      ExtVector basis(r, f.zero());
      for (std::size_t i = 0; i < r; ++i) basis[i][piv[i]] = 1;
      for (std::size_t t = 0; t < cells.size(); ++t)
        basis[cells[t].first][cells[t].second] = vals[t];
      auto e = solve_with_support_parity(inst, basis, parity);
      if (e) return e;
      std::size_t pos = 0;
      while (pos < vals.size() && vals[pos] == q - 1) vals[pos++] = 0;
      if (pos == vals.size()) break;
      ++vals[pos];
    }
  } while (next_combo(piv));
  return std::nullopt;
}

std::optional<FqVector> brute_force_minrank(const MinRankInstance& inst,
                                            std::uint64_t max_candidates) {
  const PrimeField& base = inst.base;
  const std::uint64_t q = base.q();
  const std::size_t K = inst.K;
  // Projective count (q^K - 1) / (q - 1), saturating at the budget.
  std::uint64_t total = 0, power = 1;
  for (std::size_t i = 0; i < K; ++i) {
    total += power;
    if (total > max_candidates)
      throw FeasibilityError("projective enumeration exceeds the budget");
    if (power > max_candidates) break;
    power *= q;
  }

  DenseMatrix acc(base, inst.m, inst.n);
  for (std::size_t first = 0; first < K; ++first) {
    FqVector x(K, 0);
    x[first] = 1;
    for (;;) {
      for (std::size_t i = 0; i < inst.m; ++i)
        for (std::size_t j = 0; j < inst.n; ++j) {
          std::uint64_t v = 0;
          for (std::size_t t = first; t < K; ++t)
            v += static_cast<std::uint64_t>(x[t]) * inst.matrices[t].at(i, j);
          acc.set(i, j, static_cast<std::uint32_t>(v % q));
        }
      if (rref(acc).rank <= inst.r) return x;
      std::size_t pos = first + 1;
      while (pos < K && x[pos] == q - 1) x[pos++] = 0;
      if (pos == K) break;
      ++x[pos];
    }
  }
  return std::nullopt;
}

void validate(const RdInstance& inst) {
  const ExtField& f = inst.field;
  const std::size_t n = inst.n, k = inst.k, r = inst.r;
  auto fail = [](const std::string& what) {
    throw std::runtime_error("rd instance invariant violated: " + what);
  };
  if (k + 1 >= n || r == 0) fail("dimension preconditions");
  if (inst.code.size() != k || inst.y.size() != n) fail("code/y shape");
  for (const auto& row : inst.code)
    if (row.size() != n) fail("code row length");
  if (inst.gtilde.size() != k + 1 || inst.htilde.size() != n - k - 1)
    fail("derived matrix shape");
  for (const auto& row : inst.gtilde)
    if (row.size() != n) fail("gtilde row length");
  for (const auto& row : inst.htilde)
    if (row.size() != n) fail("htilde row length");
  // Systematic shapes.
  for (std::size_t i = 0; i < k + 1; ++i)
    for (std::size_t j = 0; j < k + 1; ++j)
      if (inst.gtilde[i][j] != (i == j ? f.one() : f.zero()))
        fail("gtilde not systematic");
  for (std::size_t l = 0; l < n - k - 1; ++l) {
    for (std::size_t j = 0; j < n - k - 1; ++j)
      if (inst.htilde[l][k + 1 + j] != (l == j ? f.one() : f.zero()))
        fail("htilde not systematic");
    for (std::size_t i = 0; i < k + 1; ++i)
      if (inst.htilde[l][i] != f.neg(inst.gtilde[i][k + 1 + l]))
        fail("htilde does not mirror gtilde");
  }
  // Orthogonality gtilde * htilde^T = 0.
  for (const auto& g : inst.gtilde)
    for (const auto& h : inst.htilde) {
      ExtElt dot = f.zero();
      for (std::size_t j = 0; j < n; ++j) f.add_mul_inplace(dot, g[j], h[j]);
      if (!f.is_zero(dot)) fail("generator/parity orthogonality");
    }
  // Span agreement: code + y spans exactly the row space of gtilde.
  {
    std::vector<ExtVector> stack = inst.code;
    stack.push_back(inst.y);
    if (ext_rank(f, stack) != k + 1) fail("code + y rank");
    for (const auto& row : inst.gtilde) stack.push_back(row);
    if (ext_rank(f, stack) != k + 1) fail("extended code span mismatch");
  }
  if (inst.plant) {
    const RdPlant& p = *inst.plant;
    if (p.e.size() != n) fail("plant error length");
    if (p.s.rows() != f.m() || p.s.cols() != r) fail("plant S shape");
    if (p.c.rows() != r || p.c.cols() != n) fail("plant C shape");
    if (rref(p.s).rank != r) fail("plant S rank");
    if (rref(p.c).rank != r) fail("plant C rank");
    if (plant_error(f, p.s, p.c) != p.e) fail("plant factorization");
    if (rank_weight(f, p.e) != static_cast<int>(r)) fail("plant error weight");
    ExtVector diff(n, f.zero());
    for (std::size_t j = 0; j < n; ++j) diff[j] = f.sub(inst.y[j], p.e[j]);
    if (!in_code(inst, diff)) fail("y - e not in the code");
  }
}

void validate(const MinRankInstance& inst) {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("minrank instance invariant violated: " + what);
  };
  if (inst.matrices.size() != inst.K) fail("matrix count");
  for (const auto& m : inst.matrices)
    if (m.rows() != inst.m || m.cols() != inst.n) fail("matrix shape");
  if (inst.plant) {
    const FqVector& x = *inst.plant;
    if (x.size() != inst.K) fail("plant length");
    if (is_zero_fq(x)) fail("plant is zero");
    DenseMatrix acc(inst.base, inst.m, inst.n);
    for (std::size_t i = 0; i < inst.m; ++i)
      for (std::size_t j = 0; j < inst.n; ++j) {
        std::uint64_t v = 0;
        for (std::size_t t = 0; t < inst.K; ++t)
          v += static_cast<std::uint64_t>(x[t]) * inst.matrices[t].at(i, j);
        acc.set(i, j, static_cast<std::uint32_t>(v % inst.base.q()));
      }
    if (rref(acc).rank > inst.r) fail("planted combination rank");
  }
}

std::string serialize(const RdInstance& inst) {
  ordered_json j;
  j["format"] = 1;
  j["type"] = "rd";
  j["q"] = inst.field.q();
  j["m"] = inst.field.m();
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["r"] = inst.r;
  j["seed"] = inst.seed;
  j["modulus"] = inst.field.modulus();
  ordered_json code = ordered_json::array();
  for (const auto& row : inst.code) code.push_back(ext_vector_json(row));
  j["code"] = std::move(code);
  j["y"] = ext_vector_json(inst.y);
  if (inst.plant) {
    ordered_json p;
    p["e"] = ext_vector_json(inst.plant->e);
    p["s"] = dense_json(inst.plant->s);
    p["c"] = dense_json(inst.plant->c);
    j["plant"] = std::move(p);
  }
  return j.dump();
}

std::string serialize(const MinRankInstance& inst) {
  ordered_json j;
  j["format"] = 1;
  j["type"] = "minrank";
  j["q"] = inst.base.q();
  j["m"] = inst.m;
  j["n"] = inst.n;
  j["K"] = inst.K;
  j["r"] = inst.r;
  j["seed"] = inst.seed;
  ordered_json mats = ordered_json::array();
  for (const auto& m : inst.matrices) mats.push_back(dense_json(m));
  j["matrices"] = std::move(mats);
  if (inst.plant) {
    ordered_json p;
    p["x"] = *inst.plant;
    j["plant"] = std::move(p);
  }
  return j.dump();
}

LoadedInstance parse_instance(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  if (!j.contains("format") || j["format"].get<int>() != 1)
    throw std::runtime_error("unsupported instance format version");
  const std::string type = j.at("type").get<std::string>();
  LoadedInstance out;
  if (type == "rd") {
    std::uint32_t q = j.at("q").get<std::uint32_t>();
    std::uint32_t m = j.at("m").get<std::uint32_t>();
    FqPoly modulus = j.at("modulus").get<FqPoly>();
    ExtField field(PrimeField(q), m, modulus);
    std::size_t n = j.at("n").get<std::size_t>();
    std::size_t k = j.at("k").get<std::size_t>();
    std::size_t r = j.at("r").get<std::size_t>();
    std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    std::vector<ExtVector> code;
    for (const auto& row : j.at("code"))
      code.push_back(ext_vector_from_json(field, row));
    ExtVector y = ext_vector_from_json(field, j.at("y"));
    if (y.size() != n) throw std::runtime_error("y length mismatch");
    if (code.size() != k) throw std::runtime_error("code row count mismatch");
    for (const auto& row : code)
      if (row.size() != n) throw std::runtime_error("code row length mismatch");
    std::optional<RdPlant> plant;
    if (j.contains("plant")) {
      const auto& p = j.at("plant");
      RdPlant pl{ext_vector_from_json(field, p.at("e")),
                 dense_from_json(field.base(), p.at("s"), m, r),
                 dense_from_json(field.base(), p.at("c"), r, n)};
      if (pl.e.size() != n) throw std::runtime_error("plant length mismatch");
      plant = std::move(pl);
    }
    out.rd = make_rd_instance(std::move(field), r, std::move(code),
                              std::move(y), std::move(plant), seed);
  } else if (type == "minrank") {
    std::uint32_t q = j.at("q").get<std::uint32_t>();
    PrimeField base(q);
    std::size_t m = j.at("m").get<std::size_t>();
    std::size_t n = j.at("n").get<std::size_t>();
    std::size_t K = j.at("K").get<std::size_t>();
    std::size_t r = j.at("r").get<std::size_t>();
    std::uint64_t seed = j.at("seed").get<std::uint64_t>();
    std::vector<DenseMatrix> mats;
    for (const auto& mj : j.at("matrices"))
      mats.push_back(dense_from_json(base, mj, m, n));
    if (mats.size() != K) throw std::runtime_error("matrix count mismatch");
    std::optional<FqVector> plant;
    if (j.contains("plant")) {
      FqVector x = j.at("plant").at("x").get<FqVector>();
      if (x.size() != K) throw std::runtime_error("plant length mismatch");
      for (auto v : x)
        if (v >= q) throw std::runtime_error("plant entry out of range");
      plant = std::move(x);
    }
    out.minrank = MinRankInstance{base, m, n, K, r, seed, std::move(mats),
                                  std::move(plant)};
  } else {
    throw std::runtime_error("unknown instance type: " + type);
  }
  return out;
}

}  // namespace rankforge
