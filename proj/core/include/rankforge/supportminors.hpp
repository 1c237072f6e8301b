#pragma once

// The support-minors attack: bilinear equations asserting that every row of
// sum_i x_i M_i lies in the row space of an unknown full-rank coefficient
// matrix C, linearized over products of x-monomials with the maximal minors
// c_T of C. For rank-decoding instances the system is augmented with the
// unfolded parity-minor rows and the linear variables are reduced by fixing
// the first error coordinate to the base field. Systems are solved by dense
// or black-box sparse elimination and the x variables are read off the
// one-dimensional solution space by quotients of monomial values.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankforge/instances.hpp"
#include "rankforge/linalg.hpp"
#include "rankforge/maxminors.hpp"

namespace rankforge {

// One bilinear equation: for matrix-row index j and an (r+1)-subset J of
// column indices, the cofactor expansion along the first row of the matrix
// formed by stacking row j of sum_i x_i M_i on top of C, restricted to the
// columns J. terms[l] holds the K coefficients over x_1..x_K multiplying the
// minor variable c_{J minus J[l]}, with the cofactor sign folded in.
struct SmBilinearEq {
  std::size_t j = 0;
  std::vector<std::uint32_t> J;
  std::vector<FqVector> terms;  // (r+1) entries, each of length K
};

// All m * binom(n, r+1) bilinear equations of the instance.
// Requires r + 1 <= n.
std::vector<SmBilinearEq> build_sm_base(const MinRankInstance& inst);

// A column monomial x^alpha * c_T. xvars lists the variable indices of the
// x-part in ascending order, repeated entries meaning higher powers; over
// F_2 the x-part is multilinear (x_i^2 = x_i is applied at construction),
// so xvars never repeats an index there.
struct SmMonomial {
  std::vector<std::uint32_t> xvars;
  std::vector<std::uint32_t> T;
};

// Where a row of a linearized system came from.
struct SmRowOrigin {
  bool from_parity = false;       // true: a parity-minor row; false: bilinear
  std::size_t source_row = 0;     // index into the base equations, or the
                                  // parity row index
  std::vector<std::uint32_t> multiplier;  // x-monomial the row was scaled by
};

// A linearized system over the monomials x^alpha * c_T.
//
// Column order: x-monomials sorted by total degree then lexicographically by
// their ascending variable lists, crossed with the r-subsets T in
// lexicographic order; column = x-index * (number of subsets) + T-index.
// For base field size q > b the x-parts have total degree exactly b; over
// F_2 they are multilinear of degree 1..b. Row order: bilinear-equation rows
// first (multiplier-major, base equations in construction order within each
// multiplier), then any parity-minor rows (again multiplier-major).
struct SmSystem {
  MinRankInstance source;  // the matrix instance the rows were built from
  SparseMatrix matrix;
  std::vector<std::vector<std::uint32_t>> xmons;  // column x-parts
  std::vector<std::vector<std::uint32_t>> tsets;  // minor subsets, |T| = r
  // Multiplier monomials, in the order the row blocks were emitted.
  std::vector<std::vector<std::uint32_t>> sm_multipliers;
  std::vector<std::vector<std::uint32_t>> parity_multipliers;
  std::size_t b = 1;
  std::size_t n_used = 0;      // how many leading matrix columns are in play
  std::size_t sm_rows = 0;     // rows coming from bilinear equations
  std::size_t parity_rows = 0; // appended parity-minor rows
  bool rd_combined = false;    // built from a rank-decoding instance
  std::size_t src_k = 0;       // code dimension when rd_combined

  std::size_t columns() const { return xmons.size() * tsets.size(); }
  // Column of x^alpha * c_T; xvars must be sorted ascending. Returns nullopt
  // when the monomial is not part of the system's column space.
  std::optional<std::size_t> column_index(
      const std::vector<std::uint32_t>& xvars,
      const std::vector<std::uint32_t>& T) const;
  SmMonomial column_monomial(std::size_t col) const;
  SmRowOrigin row_origin(std::size_t row) const;
};

// Linearizes the base equations at degree b over the first n_prime matrix
// columns (n_prime = npos means all columns): each bilinear equation is
// multiplied by every x-monomial of degree b-1 (base field size q > b), or
// of degree 0..b-1 with multilinear reduction (q = 2); equations whose
// column subset J reaches beyond the first n_prime columns are dropped.
// Throws std::invalid_argument when b is outside 1 <= b < r+2, when the
// base field satisfies neither q > b nor q = 2, or when n_prime is not in
// [r+1, n].
SmSystem linearize(const MinRankInstance& inst,
                   const std::vector<SmBilinearEq>& base, std::size_t b,
                   std::size_t n_prime = static_cast<std::size_t>(-1));

// Predicted number of linearly independent rows of the degree-b
// linearization before any solution or saturation cap: the alternating sum
// over relation orders for q > b, its cumulative variant for q = 2. May be
// negative for extreme parameters; callers clamp. Intended for
// experiment-scale parameters (intermediate products must fit 64 bits);
// throws std::invalid_argument on regime violations as in linearize, or
// std::overflow_error when the terms do not fit.
std::int64_t sm_expected_rank(std::uint32_t q, std::size_t m, std::size_t n,
                              std::size_t K, std::size_t r, std::size_t b);

// Number of columns of the degree-b linearization over n columns and K
// linear variables (field size q > b or q = 2).
std::uint64_t sm_monomial_count(std::uint32_t q, std::size_t n, std::size_t K,
                                std::size_t r, std::size_t b);

// The rank actually expected on a measurement, folding in the two caps the
// raw prediction is subject to: once some degree b' <= b already linearizes
// fully, every higher degree saturates at the full monomial count; a planted
// solution reserves one kernel dimension. Also clamps at the row count and
// at zero.
std::uint64_t sm_predicted_rank(std::uint32_t q, std::size_t m, std::size_t n,
                                std::size_t K, std::size_t r, std::size_t b,
                                bool planted);

// Builds the combined system for a rank-decoding instance: the bilinear
// equations of the derived matrix instance with the linear variables reduced
// from m(k+1) to mk+1 by rescaling the error so its first coordinate lies in
// the base field (the m-1 higher coordinates of the first entry vanish and
// their variables are dropped), plus the unfolded parity-minor rows
// multiplied by x-monomials of degree exactly b (q > b) or 1..b (q = 2).
// The stored source instance carries the rescaled plant when the original
// plant's first error coordinate is nonzero. Only the full column set is
// supported: to work on fewer columns, truncate the instance first (the
// parity rows are derived from the instance's own systematic form).
SmSystem build_rd_sm(const RdInstance& inst, std::size_t b,
                     std::size_t n_prime = static_cast<std::size_t>(-1));

enum class SmSolverChoice { AUTO, DENSE, BLACK_BOX };

// Returns a nonzero kernel vector of the linearized system, expected to span
// a one-dimensional solution space. Dense elimination below 20,000 columns
// (or when forced), otherwise the black-box sparse solver seeded by `seed`.
// Throws SolveError: NOT_FOUND when the kernel is trivial (no solution) or
// the black-box retries are exhausted, RANK_DEFICIENT when the kernel
// dimension exceeds 1 (the message reports measured rank against the
// prediction) or the system cannot reach corank 1 at all.
FqVector solve_sm(const SmSystem& sys, std::uint64_t seed = 0,
                  SmSolverChoice solver = SmSolverChoice::AUTO);

struct SmSolution {
  FqVector x;       // length = number of linear variables; pivot entry = 1
  FqVector minors;  // values of c_T aligned with tsets; pivot minor = 1
};

// Reads the linear variables off a kernel vector by quotients of monomial
// values: locates a pivot column x_{i0}^d * c_{T0} with nonzero value (d = b
// for q > b, d = 1 over F_2), then x_i = value(x_i * x_{i0}^{d-1} * c_{T0})
// divided by the pivot value. Verifies rank(sum_i x_i M_i) <= r against the
// system's source matrices before returning. Throws SolveError: NOT_FOUND
// when every candidate pivot value is zero, VERIFICATION_FAILED when the
// rank check fails.
SmSolution extract_solution(const FqVector& v, const SmSystem& sys);

// Completes a rank-decoding solve from the reduced linear variables returned
// by extract_solution on a combined system: expands them to the systematic
// coordinates of a codeword of the extended code, rescales it so that the
// received word minus the error lies in the code, and verifies the rank
// weight. Throws SolveError (NOT_FOUND / VERIFICATION_FAILED) as in the
// other solvers.
ExtVector recover_rd_error(const RdInstance& inst, const FqVector& x_reduced);

// Evaluates the symmetric-tensor defect underlying the rank prediction: for
// `trials` random points (an instance-compatible x-assignment, a random
// full-rank C, a random symmetric tensor S of the given order over the
// matrix-row index, and a random (r+order)-subset of columns), computes the
// S-weighted sum of the determinants of the stacked matrices and counts the
// evaluations that are nonzero. The sum is an identity, so the expected
// count is zero. order >= 2; requires r + order <= n.
std::size_t symmetric_minor_defects(const MinRankInstance& inst,
                                    std::size_t order, std::size_t trials,
                                    std::uint64_t seed);

// One cell of a rank-prediction survey.
struct SmRankCell {
  std::uint32_t q = 0;
  std::size_t m = 0, n = 0, K = 0, r = 0, b = 0;
  std::uint64_t rows = 0, cols = 0;
  std::uint64_t predicted = 0;
  std::optional<std::uint64_t> measured;  // empty when skipped
  bool match = false;
  bool skipped = false;  // estimated work exceeded the cap
  std::string note;
};

struct SmRankReport {
  std::vector<SmRankCell> cells;
  std::size_t measured_cells = 0;
  std::size_t matched = 0;
  std::size_t skipped_cells = 0;
  double match_fraction() const {
    return measured_cells == 0
               ? 1.0
               : static_cast<double>(matched) / measured_cells;
  }
};

// Grid for the survey; the default constructor covers the full validation
// grid at the given field size: m in {7,8}, r in {2,3}, n in r+3..r+5,
// K in 3..20, b in 1..3 (with b < r+2).
struct SmRankGrid {
  std::uint32_t q = 13;
  std::vector<std::size_t> ms{7, 8};
  std::vector<std::size_t> rs{2, 3};
  std::vector<std::size_t> n_offsets{3, 4, 5};  // n = r + offset
  std::vector<std::size_t> Ks;                  // default 3..20
  std::vector<std::size_t> bs{1, 2, 3};
  bool planted = true;

  SmRankGrid() {
    for (std::size_t K = 3; K <= 20; ++K) Ks.push_back(K);
  }
};

// Measures the rank of one planted (or unplanted) linearized system per grid
// cell and compares it with sm_predicted_rank. Cells whose estimated
// elimination work exceeds work_cap word-operations are skipped and reported
// as such, keeping the survey at desk scale. Deterministic for a fixed seed;
// cells are processed in parallel (threads = 0 means hardware concurrency).
SmRankReport survey_sm_rank(const SmRankGrid& grid, std::size_t trials,
                            std::uint64_t seed, std::uint64_t work_cap,
                            std::size_t threads = 1);

}  // namespace rankforge
