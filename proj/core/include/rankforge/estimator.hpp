#pragma once

// Closed-form bit-complexity estimation for the attacks in this toolkit:
// linearized minor solving for rank decoding (plain, punctured, hybrid with
// column guessing), support-minors linearization for MinRank (with column
// reduction), the combined support-minors-plus-parity-minors attack on rank
// decoding, and the combinatorial baseline. Validity conditions are exact
// big-integer inequalities; costs are returned as log2 of base-field
// operation counts. Includes per-cryptosystem parameter presets, a
// knob optimizer, a theoretical sweep over code-family curves, and text/CSV
// report formatting.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rankforge {

using BigInt = boost::multiprecision::cpp_int;

// Exact binomial coefficient.
BigInt big_binom(std::uint64_t n, std::uint64_t k);

// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& v);

inline constexpr double kDefaultOmega = 2.81;

// Rank-decoding problem shape over F_{q^m}: length n, dimension k, target
// rank r.
struct RdShape {
  std::uint32_t q = 2;
  std::size_t m = 0, n = 0, k = 0, r = 0;
};

// MinRank problem shape: K matrices of size m x n over F_q, target rank r.
struct MinRankShape {
  std::uint32_t q = 2;
  std::size_t m = 0, n = 0, K = 0, r = 0;
};

enum class AttackVariant {
  OVERDETERMINED,   // linearized parity minors, all columns
  PUNCTURED,        // same, on the code punctured by the last p positions
  HYBRID,           // q^{ar} guesses of a support columns, then linearize
  SM_MINRANK,       // support-minors linearization at degree b on n' columns
  SM_RD_COMBINED,   // support minors plus parity minors, variables reduced
  COMBINATORIAL     // support-enumeration baseline
};
const char* variant_name(AttackVariant v);

enum class CostSolver { DENSE, WIEDEMANN };

struct AttackPlan {
  AttackVariant variant = AttackVariant::OVERDETERMINED;
  std::size_t a = 0;        // guessed support columns
  std::size_t p = 0;        // punctured positions
  std::size_t b = 0;        // linearization degree (0 = not applicable)
  std::size_t n_prime = 0;  // retained matrix columns (0 = not applicable)
  double omega = kDefaultOmega;
  CostSolver solver = CostSolver::DENSE;
  double log2_cost = 0.0;
  std::string note;
};

// --- validity conditions (exact integer inequalities) ---

// m*binom(n-p-k-1, r) >= binom(n-p, r) - 1.
bool overdetermined_ok(const RdShape& s, std::size_t p);

// m*binom(n-k-1, r) >= binom(n-a, r) - 1.
bool hybrid_ok(const RdShape& s, std::size_t a);

// The degree-b linearization over the first n_prime columns has at least as
// many expected independent equations as monomials minus one, counting
// monomials and equations in the large-field (exact-degree) model for every
// q; requires 1 <= b < r+2. Over F_2 the solver actually works with the
// slightly smaller multilinear system, so this estimate is marginally
// conservative there.
bool sm_ok(const MinRankShape& s, std::size_t b, std::size_t n_prime);

// Combined system after shortening by a positions (n-a, k-a) and reducing
// the linear variables to m(k-a)+1: columns - 1 <= parity rows + expected
// independent bilinear rows at degree b.
bool rd_combined_ok(const RdShape& s, std::size_t b, std::size_t a);

// Smallest degree b in [1, b_max] that makes the condition hold.
std::optional<std::size_t> min_b_rd_combined(const RdShape& s, std::size_t a,
                                             std::size_t b_max = 10);
std::optional<std::size_t> min_b_sm(const MinRankShape& s,
                                    std::size_t n_prime,
                                    std::size_t b_max = 10);

// Exact sizes of the combined system (after shortening by a): monomial
// columns, parity row count, and the expected rank of the bilinear block
// (may be negative only in degenerate shapes; reported as-is).
struct RdCombinedCounts {
  BigInt columns;       // monomials x^alpha c_T
  BigInt parity_rows;   // parity-minor rows times multipliers
  BigInt expected_sm;   // expected independent bilinear rows
};
RdCombinedCounts rd_combined_counts(const RdShape& s, std::size_t b,
                                    std::size_t a = 0);

// --- cost formulas (log2 of base-field operation counts) ---
// Each throws std::invalid_argument when its validity condition fails.

// m*binom(n-p-k-1,r) * binom(n-p,r)^(omega-1).
double cost_overdetermined(const RdShape& s, std::size_t p,
                           double omega = kDefaultOmega);

// q^{ar} * m*binom(n-k-1,r) * binom(n-a,r)^(omega-1).
double cost_hybrid(const RdShape& s, std::size_t a,
                   double omega = kDefaultOmega);

// K(r+1) * (monomials at degree b over n_prime columns)^2.
double cost_sm(const MinRankShape& s, std::size_t b, std::size_t n_prime);

// Dense: q^{ar} * (rows) * (columns)^(omega-1); Wiedemann: q^{ar} *
// (average row density) * (columns)^2, with rows and columns those of the
// combined system after shortening by a.
double cost_rd_combined(const RdShape& s, std::size_t b, std::size_t a,
                        CostSolver solver, double omega = kDefaultOmega);

// (nm)^2 * q^(r*ceil(m(k+1)/n) - m).
double cost_combinatorial(const RdShape& s);

// --- optimization ---

struct ComplexityReport {
  std::vector<AttackPlan> plans;  // best valid plan per variant, in variant
                                  // declaration order; invalid variants are
                                  // omitted
  std::optional<AttackPlan> minimum;
  // m*binom(n-k-1,r) / (binom(n,r)-1); absent for MinRank problems.
  std::optional<double> ratio;

  const AttackPlan* find(AttackVariant v) const;
};

struct OptimizeLimits {
  std::size_t b_max = 10;
  // Include the direct support-minors attack on the matrix problem derived
  // from a rank-decoding instance (K = m(k+1)); never competitive at
  // cryptographic sizes but listed for completeness.
  bool include_derived_sm = true;
};

// Exhaustive search over valid p (punctured), a (hybrid), (n_prime, b)
// (support minors on the derived matrix problem), (a, b, solver) (combined),
// plus the combinatorial baseline. Ties break lexicographically on
// (variant, a, p, b, n_prime).
ComplexityReport optimize_rd(const RdShape& s, double omega = kDefaultOmega,
                             const OptimizeLimits& lim = {});

// Search over (b, n_prime): for each degree, the smallest retained column
// count that keeps the solution unique (K <= (m-r)(n_prime-r)) and the
// system determined; returns the cheapest pair.
ComplexityReport optimize_minrank(const MinRankShape& s,
                                  double omega = kDefaultOmega,
                                  const OptimizeLimits& lim = {});

// --- presets ---

struct SchemeEntry {
  std::string name;
  std::optional<RdShape> rd;
  std::optional<MinRankShape> minrank;
  // Shape used for the combinatorial column when it differs from `rd` (the
  // three-block ciphertext embedding of the newer RQC parameter sets).
  std::optional<RdShape> comb;
  // The scheme also admits a three-block algebraic attack; its cost model
  // is not implemented and reports are marked "not modeled".
  bool hyb3n = false;
};

// "rollo-rqc" (13 rank-decoding rows), "gemss-rainbow" (12 MinRank rows),
// "new-params" (6 updated rank-decoding rows). Throws on unknown names.
std::vector<SchemeEntry> preset(const std::string& name);
std::vector<std::string> preset_names();

struct SchemeReport {
  SchemeEntry scheme;
  ComplexityReport report;
};

// Runs the optimizer on every entry; when a separate combinatorial shape is
// present the combinatorial plan is recomputed from it.
std::vector<SchemeReport> evaluate_preset(const std::vector<SchemeEntry>& in,
                                          double omega = kDefaultOmega);

// --- theoretical sweep over a code family ---

// Largest prime strictly below x; throws when none exists.
std::size_t largest_prime_less_than(double x);

struct SweepPoint {
  std::size_t n = 0, m = 0, k = 0, r = 0;
  AttackPlan best;  // cheapest of the plain/punctured/hybrid linearizations
};

// Family n = 2k, m = largest prime below n / m_ratio, fixed r; n runs over
// [n_min, n_max] in the given step. Points whose shape admits no valid plan
// are skipped.
std::vector<SweepPoint> sweep_rd_family(std::size_t r, std::size_t n_min,
                                        std::size_t n_max,
                                        std::size_t step = 2,
                                        double omega = kDefaultOmega,
                                        double m_ratio = 1.18);

// --- report formatting ---

std::string format_reports_text(const std::vector<SchemeReport>& reports);
std::string format_reports_csv(const std::vector<SchemeReport>& reports);
std::string format_sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace rankforge
