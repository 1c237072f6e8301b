#include "rankforge/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rankforge {

namespace {

void check_rd_shape(const RdShape& s) {
  if (s.q < 2 || s.m == 0 || s.r == 0 || s.k == 0 || s.k + 1 >= s.n ||
      s.r > s.n) {
    throw std::invalid_argument("degenerate rank-decoding shape");
  }
}

void check_minrank_shape(const MinRankShape& s) {
  if (s.q < 2 || s.m == 0 || s.n == 0 || s.K == 0 || s.r == 0 ||
      s.r >= std::min(s.m, s.n)) {
    throw std::invalid_argument("degenerate matrix-rank shape");
  }
}

// True when the degree regime of the linearization is modeled: exact degree
// b for q > b, multilinear degrees up to b for q = 2.
bool regime_ok(std::uint32_t q, std::size_t b, std::size_t r) {
  return b >= 1 && b < r + 2 && (static_cast<std::size_t>(q) > b || q == 2);
}

// Monomial count of the support-minors linearization at degree b with K
// linear variables and binom(n, r) minor variables. The field-aware count
// collapses repeated variables over F_2 (multilinear monomials of degree 1
// through b); the generic count treats the field as large.
BigInt sm_columns_generic(std::size_t n, std::size_t K, std::size_t r,
                          std::size_t b) {
  return big_binom(n, r) * big_binom(K + b - 1, b);
}

BigInt sm_columns_field(std::uint32_t q, std::size_t n, std::size_t K,
                        std::size_t r, std::size_t b) {
  if (q != 2) return sm_columns_generic(n, K, r, b);
  BigInt mult = 0;
  for (std::size_t j = 1; j <= b; ++j) mult += big_binom(K, j);
  return big_binom(n, r) * mult;
}

// Expected number of independent rows contributed by the bilinear equations
// multiplied up to degree b (inclusion-exclusion over syzygies).
BigInt sm_expected_generic(std::size_t m, std::size_t n, std::size_t K,
                           std::size_t r, std::size_t b) {
  BigInt total = 0;
  for (std::size_t i = 1; i <= b; ++i) {
    const BigInt term = big_binom(n, r + i) * big_binom(m + i - 1, i) *
                        big_binom(K + b - i - 1, b - i);
    if (i % 2 == 1) total += term; else total -= term;
  }
  return total;
}

BigInt sm_expected_field(std::uint32_t q, std::size_t m, std::size_t n,
                         std::size_t K, std::size_t r, std::size_t b) {
  if (q != 2) return sm_expected_generic(m, n, K, r, b);
  BigInt total = 0;
  for (std::size_t j = 1; j <= b; ++j) {
    for (std::size_t i = 1; i <= j; ++i) {
      const BigInt term =
          big_binom(n, r + i) * big_binom(m + i - 1, i) * big_binom(K, j - i);
      if (i % 2 == 1) total += term; else total -= term;
    }
  }
  return total;
}

double log2_q(std::uint32_t q) { return std::log2(static_cast<double>(q)); }

bool plan_better(const AttackPlan& x, const AttackPlan& y) {
  if (x.log2_cost != y.log2_cost) return x.log2_cost < y.log2_cost;
  const auto key = [](const AttackPlan& t) {
    return std::make_tuple(static_cast<int>(t.variant), t.a, t.p, t.b,
                           t.n_prime, static_cast<int>(t.solver));
  };
  return key(x) < key(y);
}

void keep_best(std::optional<AttackPlan>& best, const AttackPlan& cand) {
  if (!best || plan_better(cand, *best)) best = cand;
}

bool is_prime(std::size_t v) {
  if (v < 2) return false;
  for (std::size_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

// Best support-minors plan for a matrix problem: for each degree b, the
// smallest retained column count n' that keeps the solution unique and the
// linearization determined; then the cheapest such pair.
std::optional<AttackPlan> best_sm_plan(const MinRankShape& s,
                                       const OptimizeLimits& lim,
                                       const std::string& note) {
  if (s.m <= s.r) return std::nullopt;
  std::optional<AttackPlan> best;
  for (std::size_t b = 1; b <= std::min(lim.b_max, s.r + 1); ++b) {
    for (std::size_t np = s.r + 1; np <= s.n; ++np) {
      if (BigInt(s.K) > BigInt(s.m - s.r) * BigInt(np - s.r)) continue;
      if (!sm_ok(s, b, np)) continue;
      AttackPlan plan;
      plan.variant = AttackVariant::SM_MINRANK;
      plan.b = b;
      plan.n_prime = np;
      plan.solver = CostSolver::WIEDEMANN;
      plan.log2_cost = cost_sm(s, b, np);
      plan.note = note;
      keep_best(best, plan);
      break;  // at fixed degree, the fewest columns is the cheapest
    }
  }
  return best;
}

std::string format_params(const SchemeEntry& e) {
  char buf[128];
  if (e.rd) {
    std::snprintf(buf, sizeof(buf), "q=%u;m=%zu;n=%zu;k=%zu;r=%zu", e.rd->q,
                  e.rd->m, e.rd->n, e.rd->k, e.rd->r);
  } else {
    std::snprintf(buf, sizeof(buf), "q=%u;m=%zu;n=%zu;K=%zu;r=%zu",
                  e.minrank->q, e.minrank->m, e.minrank->n, e.minrank->K,
                  e.minrank->r);
  }
  return buf;
}

std::string formula_id(const AttackPlan& p) {
  std::string id = variant_name(p.variant);
  if (p.variant == AttackVariant::SM_RD_COMBINED) {
    id += (p.solver == CostSolver::WIEDEMANN) ? "/wiedemann" : "/dense";
  }
  return id;
}

}  // namespace

BigInt big_binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log2 of a non-positive value");
  const std::size_t bits = boost::multiprecision::msb(v);
  if (bits < 64) return std::log2(v.convert_to<double>());
  const std::size_t shift = bits - 52;
  const BigInt top = v >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

const char* variant_name(AttackVariant v) {
  switch (v) {
    case AttackVariant::OVERDETERMINED: return "overdetermined";
    case AttackVariant::PUNCTURED: return "punctured";
    case AttackVariant::HYBRID: return "hybrid";
    case AttackVariant::SM_MINRANK: return "sm-minrank";
    case AttackVariant::SM_RD_COMBINED: return "sm-rd-combined";
    case AttackVariant::COMBINATORIAL: return "combinatorial";
  }
  return "unknown";
}

bool overdetermined_ok(const RdShape& s, std::size_t p) {
  check_rd_shape(s);
  if (p + s.k + 1 >= s.n || s.n - p < s.r) return false;
  const BigInt rows = BigInt(s.m) * big_binom(s.n - p - s.k - 1, s.r);
  return rows >= big_binom(s.n - p, s.r) - 1;
}

bool hybrid_ok(const RdShape& s, std::size_t a) {
  check_rd_shape(s);
  if (a + s.r > s.n) return false;
  const BigInt rows = BigInt(s.m) * big_binom(s.n - s.k - 1, s.r);
  return rows >= big_binom(s.n - a, s.r) - 1;
}

bool sm_ok(const MinRankShape& s, std::size_t b, std::size_t n_prime) {
  check_minrank_shape(s);
  if (b < 1 || b >= s.r + 2) return false;
  if (n_prime <= s.r || n_prime > s.n) return false;
  const BigInt cols = sm_columns_generic(n_prime, s.K, s.r, b);
  return cols - 1 <= sm_expected_generic(s.m, n_prime, s.K, s.r, b);
}

RdCombinedCounts rd_combined_counts(const RdShape& s, std::size_t b,
                                    std::size_t a) {
  check_rd_shape(s);
  if (a >= s.k) throw std::invalid_argument("cannot shorten past the code dimension");
  if (!regime_ok(s.q, b, s.r)) {
    throw std::invalid_argument("linearization degree outside the modeled regime");
  }
  const std::size_t nh = s.n - a;
  const std::size_t kh = s.k - a;
  const std::size_t Klin = s.m * kh + 1;
  RdCombinedCounts out;
  out.columns = sm_columns_field(s.q, nh, Klin, s.r, b);
  const BigInt parity_base = BigInt(s.m) * big_binom(nh - kh - 1, s.r);
  if (s.q == 2) {
    BigInt mult = 0;
    for (std::size_t j = 1; j <= b; ++j) mult += big_binom(Klin, j);
    out.parity_rows = parity_base * mult;
  } else {
    out.parity_rows = parity_base * big_binom(Klin + b - 1, b);
  }
  out.expected_sm = sm_expected_field(s.q, s.m, nh, Klin, s.r, b);
  return out;
}

bool rd_combined_ok(const RdShape& s, std::size_t b, std::size_t a) {
  check_rd_shape(s);
  if (a >= s.k || !regime_ok(s.q, b, s.r)) return false;
  const RdCombinedCounts c = rd_combined_counts(s, b, a);
  return c.columns - 1 <= c.parity_rows + c.expected_sm;
}

std::optional<std::size_t> min_b_rd_combined(const RdShape& s, std::size_t a,
                                             std::size_t b_max) {
  for (std::size_t b = 1; b <= std::min(b_max, s.r + 1); ++b) {
    if (!regime_ok(s.q, b, s.r)) break;
    if (rd_combined_ok(s, b, a)) return b;
  }
  return std::nullopt;
}

std::optional<std::size_t> min_b_sm(const MinRankShape& s, std::size_t n_prime,
                                    std::size_t b_max) {
  for (std::size_t b = 1; b <= std::min(b_max, s.r + 1); ++b) {
    if (sm_ok(s, b, n_prime)) return b;
  }
  return std::nullopt;
}

double cost_overdetermined(const RdShape& s, std::size_t p, double omega) {
  if (!overdetermined_ok(s, p)) {
    throw std::invalid_argument(
        "not enough independent equations after puncturing " +
        std::to_string(p) + " positions");
  }
  const BigInt rows = BigInt(s.m) * big_binom(s.n - p - s.k - 1, s.r);
  return log2_big(rows) + (omega - 1) * log2_big(big_binom(s.n - p, s.r));
}

double cost_hybrid(const RdShape& s, std::size_t a, double omega) {
  if (!hybrid_ok(s, a)) {
    throw std::invalid_argument("guessing " + std::to_string(a) +
                                " columns leaves the system underdetermined");
  }
  const BigInt rows = BigInt(s.m) * big_binom(s.n - s.k - 1, s.r);
  return static_cast<double>(a) * static_cast<double>(s.r) * log2_q(s.q) +
         log2_big(rows) + (omega - 1) * log2_big(big_binom(s.n - a, s.r));
}

double cost_sm(const MinRankShape& s, std::size_t b, std::size_t n_prime) {
  if (!sm_ok(s, b, n_prime)) {
    throw std::invalid_argument(
        "support-minors linearization is underdetermined at this degree");
  }
  const BigInt cols = sm_columns_generic(n_prime, s.K, s.r, b);
  return log2_big(BigInt(s.K) * BigInt(s.r + 1)) + 2.0 * log2_big(cols);
}

double cost_rd_combined(const RdShape& s, std::size_t b, std::size_t a,
                        CostSolver solver, double omega) {
  if (!rd_combined_ok(s, b, a)) {
    throw std::invalid_argument(
        "combined system is underdetermined at this degree");
  }
  const RdCombinedCounts c = rd_combined_counts(s, b, a);
  const BigInt rows = c.parity_rows + c.expected_sm;
  const double guess =
      static_cast<double>(a) * static_cast<double>(s.r) * log2_q(s.q);
  if (solver == CostSolver::DENSE) {
    return guess + log2_big(rows) + (omega - 1) * log2_big(c.columns);
  }
  // Average row weight: parity rows touch binom(k-a+r+1, r) monomials, the
  // bilinear rows (m(k-a)+1)(r+1).
  const std::size_t kh = s.k - a;
  const BigInt weight_num =
      c.parity_rows * big_binom(kh + s.r + 1, s.r) +
      c.expected_sm * (BigInt(s.m) * kh + 1) * BigInt(s.r + 1);
  if (weight_num <= 0) {
    throw std::invalid_argument("combined system has no usable rows");
  }
  const double log2_weight = log2_big(weight_num) - log2_big(rows);
  return guess + log2_weight + 2.0 * log2_big(c.columns);
}

double cost_combinatorial(const RdShape& s) {
  check_rd_shape(s);
  const std::uint64_t ceil_term =
      (static_cast<std::uint64_t>(s.m) * (s.k + 1) + s.n - 1) / s.n;
  const double exponent =
      static_cast<double>(s.r) * static_cast<double>(ceil_term) -
      static_cast<double>(s.m);
  return 2.0 * std::log2(static_cast<double>(s.n) * static_cast<double>(s.m)) +
         exponent * log2_q(s.q);
}

const AttackPlan* ComplexityReport::find(AttackVariant v) const {
  for (const auto& p : plans) {
    if (p.variant == v) return &p;
  }
  return nullptr;
}

ComplexityReport optimize_rd(const RdShape& s, double omega,
                             const OptimizeLimits& lim) {
  check_rd_shape(s);
  ComplexityReport report;
  {
    const BigInt num = BigInt(s.m) * big_binom(s.n - s.k - 1, s.r);
    const BigInt den = big_binom(s.n, s.r) - 1;
    report.ratio = std::exp2(log2_big(num) - log2_big(den));
  }

  if (overdetermined_ok(s, 0)) {
    AttackPlan plan;
    plan.variant = AttackVariant::OVERDETERMINED;
    plan.omega = omega;
    plan.log2_cost = cost_overdetermined(s, 0, omega);
    report.plans.push_back(plan);
  }

  {
    std::optional<AttackPlan> best;
    for (std::size_t p = 1; p + s.k + 1 < s.n && s.n - p >= s.r; ++p) {
      if (!overdetermined_ok(s, p)) continue;
      AttackPlan plan;
      plan.variant = AttackVariant::PUNCTURED;
      plan.p = p;
      plan.omega = omega;
      plan.log2_cost = cost_overdetermined(s, p, omega);
      keep_best(best, plan);
    }
    if (best) report.plans.push_back(*best);
  }

  {
    std::optional<AttackPlan> best;
    for (std::size_t a = 0; a + s.r <= s.n; ++a) {
      if (!hybrid_ok(s, a)) continue;
      AttackPlan plan;
      plan.variant = AttackVariant::HYBRID;
      plan.a = a;
      plan.omega = omega;
      plan.log2_cost = cost_hybrid(s, a, omega);
      keep_best(best, plan);
    }
    if (best) report.plans.push_back(*best);
  }

  if (lim.include_derived_sm) {
    MinRankShape derived;
    derived.q = s.q;
    derived.m = s.m;
    derived.n = s.n;
    derived.K = s.m * (s.k + 1);
    derived.r = s.r;
    const auto best =
        best_sm_plan(derived, lim, "on the derived matrix problem");
    if (best) report.plans.push_back(*best);
  }

  {
    std::optional<AttackPlan> best;
    for (std::size_t a = 0; a < s.k; ++a) {
      for (std::size_t b = 1; b <= std::min(lim.b_max, s.r + 1); ++b) {
        if (!regime_ok(s.q, b, s.r)) break;
        if (!rd_combined_ok(s, b, a)) continue;
        for (const CostSolver solver :
             {CostSolver::DENSE, CostSolver::WIEDEMANN}) {
          AttackPlan plan;
          plan.variant = AttackVariant::SM_RD_COMBINED;
          plan.a = a;
          plan.b = b;
          plan.omega = omega;
          plan.solver = solver;
          plan.log2_cost = cost_rd_combined(s, b, a, solver, omega);
          keep_best(best, plan);
        }
        break;  // at fixed a, the smallest valid degree is the cheapest
      }
    }
    if (best) report.plans.push_back(*best);
  }

  {
    AttackPlan plan;
    plan.variant = AttackVariant::COMBINATORIAL;
    plan.log2_cost = cost_combinatorial(s);
    report.plans.push_back(plan);
  }

  for (const auto& p : report.plans) {
    if (!report.minimum || plan_better(p, *report.minimum)) report.minimum = p;
  }
  return report;
}

ComplexityReport optimize_minrank(const MinRankShape& s, double omega,
                                  const OptimizeLimits& lim) {
  check_minrank_shape(s);
  (void)omega;
  ComplexityReport report;
  const auto best = best_sm_plan(s, lim, "");
  if (best) {
    report.plans.push_back(*best);
    report.minimum = *best;
  }
  return report;
}

std::vector<SchemeEntry> preset(const std::string& name) {
  const auto rd_entry = [](std::string id, std::uint32_t q, std::size_t m,
                           std::size_t n, std::size_t k, std::size_t r) {
    SchemeEntry e;
    e.name = std::move(id);
    e.rd = RdShape{q, m, n, k, r};
    return e;
  };
  const auto mr_entry = [](std::string id, std::uint32_t q, std::size_t m,
                           std::size_t n, std::size_t K, std::size_t r) {
    SchemeEntry e;
    e.name = std::move(id);
    e.minrank = MinRankShape{q, m, n, K, r};
    return e;
  };
  if (name == "rollo-rqc") {
    return {
        rd_entry("Loidreau", 2, 128, 120, 80, 4),
        rd_entry("ROLLO-I-128", 2, 79, 94, 47, 5),
        rd_entry("ROLLO-I-192", 2, 89, 106, 53, 6),
        rd_entry("ROLLO-I-256", 2, 113, 134, 67, 7),
        rd_entry("ROLLO-II-128", 2, 83, 298, 149, 5),
        rd_entry("ROLLO-II-192", 2, 107, 302, 151, 6),
        rd_entry("ROLLO-II-256", 2, 127, 314, 157, 7),
        rd_entry("ROLLO-III-128", 2, 101, 94, 47, 5),
        rd_entry("ROLLO-III-192", 2, 107, 118, 59, 6),
        rd_entry("ROLLO-III-256", 2, 131, 134, 67, 7),
        rd_entry("RQC-I", 2, 97, 134, 67, 5),
        rd_entry("RQC-II", 2, 107, 202, 101, 6),
        rd_entry("RQC-III", 2, 137, 262, 131, 7),
    };
  }
  if (name == "gemss-rainbow") {
    return {
        mr_entry("GeMSS-128", 2, 174, 174, 162, 34),
        mr_entry("GeMSS-192", 2, 265, 265, 243, 52),
        mr_entry("GeMSS-256", 2, 354, 354, 324, 73),
        mr_entry("RedGeMSS-128", 2, 177, 177, 162, 35),
        mr_entry("RedGeMSS-192", 2, 266, 266, 243, 53),
        mr_entry("RedGeMSS-256", 2, 358, 358, 324, 74),
        mr_entry("BlueGeMSS-128", 2, 175, 175, 162, 35),
        mr_entry("BlueGeMSS-192", 2, 265, 265, 243, 53),
        mr_entry("BlueGeMSS-256", 2, 358, 358, 324, 74),
        mr_entry("Rainbow-Ia", 16, 96, 96, 33, 64),
        mr_entry("Rainbow-IIIc", 256, 140, 140, 37, 104),
        mr_entry("Rainbow-Vc", 256, 188, 188, 49, 140),
    };
  }
  if (name == "new-params") {
    auto e1 = rd_entry("new2ROLLO-I-128", 2, 73, 166, 83, 7);
    auto e2 = rd_entry("new2ROLLO-I-192", 2, 89, 194, 97, 8);
    auto e3 = rd_entry("new2ROLLO-I-256", 2, 103, 226, 113, 9);
    auto e4 = rd_entry("newRQC-I", 2, 127, 226, 113, 7);
    e4.comb = RdShape{2, 127, 339, 113, 7};
    e4.hyb3n = true;
    auto e5 = rd_entry("newRQC-II", 2, 151, 298, 149, 8);
    e5.comb = RdShape{2, 151, 447, 149, 8};
    e5.hyb3n = true;
    auto e6 = rd_entry("newRQC-III", 2, 181, 358, 179, 9);
    e6.comb = RdShape{2, 181, 537, 179, 9};
    e6.hyb3n = true;
    return {e1, e2, e3, e4, e5, e6};
  }
  throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"rollo-rqc", "gemss-rainbow", "new-params"};
}

std::vector<SchemeReport> evaluate_preset(const std::vector<SchemeEntry>& in,
                                          double omega) {
  std::vector<SchemeReport> out;
  out.reserve(in.size());
  for (const auto& entry : in) {
    SchemeReport sr;
    sr.scheme = entry;
    if (entry.rd) {
      sr.report = optimize_rd(*entry.rd, omega);
      if (entry.comb) {
        for (auto& plan : sr.report.plans) {
          if (plan.variant == AttackVariant::COMBINATORIAL) {
            plan.log2_cost = cost_combinatorial(*entry.comb);
            plan.note = "on the three-block embedding";
          }
        }
        sr.report.minimum.reset();
        for (const auto& p : sr.report.plans) {
          if (!sr.report.minimum || plan_better(p, *sr.report.minimum)) {
            sr.report.minimum = p;
          }
        }
      }
    } else if (entry.minrank) {
      sr.report = optimize_minrank(*entry.minrank, omega);
    } else {
      throw std::invalid_argument("preset entry without a problem shape");
    }
    out.push_back(std::move(sr));
  }
  return out;
}

std::size_t largest_prime_less_than(double x) {
  if (!(x > 2.0)) throw std::invalid_argument("no prime below " + std::to_string(x));
  std::size_t v = static_cast<std::size_t>(std::ceil(x)) - 1;
  while (v >= 2) {
    if (static_cast<double>(v) < x && is_prime(v)) return v;
    --v;
  }
  throw std::invalid_argument("no prime below " + std::to_string(x));
}

std::vector<SweepPoint> sweep_rd_family(std::size_t r, std::size_t n_min,
                                        std::size_t n_max, std::size_t step,
                                        double omega, double m_ratio) {
  if (step == 0) throw std::invalid_argument("sweep step must be positive");
  std::vector<SweepPoint> out;
  for (std::size_t n = n_min; n <= n_max; n += step) {
    if (n % 2 != 0) continue;
    SweepPoint pt;
    pt.n = n;
    pt.k = n / 2;
    pt.r = r;
    try {
      pt.m = largest_prime_less_than(static_cast<double>(n) / m_ratio);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const RdShape shape{2, pt.m, pt.n, pt.k, pt.r};
    if (shape.k + 1 >= shape.n || shape.r > shape.n) continue;
    std::optional<AttackPlan> best;
    for (std::size_t p = 0; p + shape.k + 1 < shape.n && shape.n - p >= shape.r;
         ++p) {
      if (!overdetermined_ok(shape, p)) continue;
      AttackPlan plan;
      plan.variant = p == 0 ? AttackVariant::OVERDETERMINED
                            : AttackVariant::PUNCTURED;
      plan.p = p;
      plan.omega = omega;
      plan.log2_cost = cost_overdetermined(shape, p, omega);
      keep_best(best, plan);
    }
    for (std::size_t a = 0; a + shape.r <= shape.n; ++a) {
      if (!hybrid_ok(shape, a)) continue;
      AttackPlan plan;
      plan.variant = AttackVariant::HYBRID;
      plan.a = a;
      plan.omega = omega;
      plan.log2_cost = cost_hybrid(shape, a, omega);
      keep_best(best, plan);
    }
    if (!best) continue;
    pt.best = *best;
    out.push_back(pt);
  }
  return out;
}

std::string format_reports_text(const std::vector<SchemeReport>& reports) {
  std::ostringstream os;
  char buf[256];
  for (const auto& sr : reports) {
    os << sr.scheme.name << "  [" << format_params(sr.scheme) << "]";
    if (sr.report.ratio) {
      std::snprintf(buf, sizeof(buf), "  ratio=%.4f", *sr.report.ratio);
      os << buf;
    }
    os << "\n";
    for (const auto& plan : sr.report.plans) {
      std::snprintf(buf, sizeof(buf),
                    "  %-16s a=%-3zu p=%-3zu b=%-2zu n'=%-4zu %-9s %8.2f",
                    formula_id(plan).c_str(), plan.a, plan.p, plan.b,
                    plan.n_prime,
                    plan.solver == CostSolver::WIEDEMANN ? "wiedemann"
                                                        : "dense",
                    plan.log2_cost);
      os << buf;
      const bool is_min = sr.report.minimum &&
                          !plan_better(*sr.report.minimum, plan) &&
                          !plan_better(plan, *sr.report.minimum);
      if (is_min) os << "  <- minimum";
      if (!plan.note.empty()) os << "  (" << plan.note << ")";
      os << "\n";
    }
    if (sr.scheme.hyb3n) {
      os << "  three-block hybrid: not modeled\n";
    }
    os << "\n";
  }
  return os.str();
}

std::string format_reports_csv(const std::vector<SchemeReport>& reports) {
  std::ostringstream os;
  os << "scheme,params,ratio,a,p,b,n_prime,log2_cost,formula\n";
  char buf[64];
  for (const auto& sr : reports) {
    for (const auto& plan : sr.report.plans) {
      os << sr.scheme.name << "," << format_params(sr.scheme) << ",";
      if (sr.report.ratio) {
        std::snprintf(buf, sizeof(buf), "%.6f", *sr.report.ratio);
        os << buf;
      }
      std::snprintf(buf, sizeof(buf), ",%zu,%zu,%zu,%zu,%.2f,", plan.a,
                    plan.p, plan.b, plan.n_prime, plan.log2_cost);
      os << buf << formula_id(plan) << "\n";
    }
  }
  return os.str();
}

std::string format_sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "n,log2_cost,m,k,r,variant,a,p\n";
  char buf[160];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof(buf), "%zu,%.4f,%zu,%zu,%zu,%s,%zu,%zu", pt.n,
                  pt.best.log2_cost, pt.m, pt.k, pt.r,
                  variant_name(pt.best.variant), pt.best.a, pt.best.p);
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace rankforge
