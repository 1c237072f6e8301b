#pragma once

// Problem instances for rank-metric decoding (RD) and MinRank: seeded
// generation with planted solutions, JSON serialization, the embedding of an
// RD instance into MinRank, and small exhaustive oracles used to cross-check
// the algebraic solvers.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankforge/ffield.hpp"
#include "rankforge/linalg.hpp"

namespace rankforge {

// Thrown when an exhaustive oracle or solver would exceed its configured
// enumeration budget.
struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A planted error for an RD instance, in factored form:
//   e = (1, a, ..., a^{m-1}) * S * C
// with S an m x r matrix of full column rank and C an r x n matrix of full
// row rank, both over F_q. This forces rank weight exactly r.
struct RdPlant {
  ExtVector e;    // length n over F_{q^m}
  DenseMatrix s;  // m x r over F_q
  DenseMatrix c;  // r x n over F_q
};

// Rank-metric decoding instance: a random [n, k] code over F_{q^m} given by a
// basis, and a received word y = c + e with rank_weight(e) = r. Derived data:
// the extended code spanned by the basis plus y, in systematic form
// gtilde = (I_{k+1} | R), with parity check htilde = (-R^T | I_{n-k-1}).
struct RdInstance {
  ExtField field;
  std::size_t n = 0, k = 0, r = 0;
  std::uint64_t seed = 0;
  std::vector<ExtVector> code;    // k rows of length n: basis of the code
  ExtVector y;                    // received word, length n
  std::vector<ExtVector> gtilde;  // (k+1) x n, systematic
  std::vector<ExtVector> htilde;  // (n-k-1) x n
  std::optional<RdPlant> plant;
};

// MinRank instance: K matrices of size m x n over F_q; the task is a nonzero
// x in F_q^K with rank(sum_i x_i M_i) <= r.
struct MinRankInstance {
  PrimeField base;
  std::size_t m = 0, n = 0, K = 0, r = 0;
  std::uint64_t seed = 0;
  std::vector<DenseMatrix> matrices;  // K entries, each m x n
  std::optional<FqVector> plant;      // x, length K
};

// Derives the systematic extended-code data from a code basis and y.
// Throws std::runtime_error if the leading (k+1) x (k+1) block of the stacked
// generator is singular (generation resamples instead of permuting columns).
RdInstance make_rd_instance(ExtField field, std::size_t r,
                            std::vector<ExtVector> code, ExtVector y,
                            std::optional<RdPlant> plant, std::uint64_t seed);

// Seeded random instance with a planted weight-r error. Resamples internally
// until the systematic form exists.
RdInstance gen_rd(std::uint32_t q, std::uint32_t m, std::size_t n,
                  std::size_t k, std::size_t r, std::uint64_t seed);

// Seeded random MinRank instance; with planted=true the last matrix is
// adjusted so a sampled x (with x_K != 0) reaches rank <= r.
MinRankInstance gen_minrank(std::uint32_t q, std::size_t m, std::size_t n,
                            std::size_t K, std::size_t r, bool planted,
                            std::uint64_t seed);

// Expected-uniqueness bound K <= (m-r)(n-r) for planted instances; callers
// may warn when it fails.
bool minrank_uniqueness_ok(std::size_t m, std::size_t n, std::size_t K,
                           std::size_t r);

// Embedding: K = m(k+1) matrices, entry (j*m + i) = Mat(a^i * gtilde_j),
// taking coordinates over F_q. A weight-<=r vector of the extended code
// corresponds one-to-one to a MinRank solution. The plant (when present)
// carries over: x is the coordinate list of the first k+1 entries of e.
MinRankInstance rd_to_minrank(const RdInstance& inst);

// Is v a member of the span of the instance's code basis?
bool in_code(const RdInstance& inst, const ExtVector& v);

// Solves for an error supported on the given rank-support basis: writes
// e = sum_t beta_t * C_t with C in F_q^{r' x n} unknown and requires
// y - e to lie in the code. Returns e (weight <= |basis| by construction)
// or nullopt when inconsistent.
std::optional<ExtVector> solve_with_support(const RdInstance& inst,
                                            const ExtVector& support_basis);

// Exhaustive RD oracle: tries every r-dimensional F_q-subspace of F_{q^m} as
// the error support (canonical reduced-echelon enumeration) and returns the
// first error found with y - e in the code, or nullopt. The degenerate e = 0
// is checked first. Throws FeasibilityError when the subspace count exceeds
// max_supports.
std::optional<ExtVector> brute_force_rd(const RdInstance& inst,
                                        std::uint64_t max_supports = 1u << 22);

// Exhaustive MinRank oracle: enumerates projective representatives (first
// nonzero coordinate = 1, lexicographic) and returns the first x with
// rank(sum x_i M_i) <= r, or nullopt. Throws FeasibilityError when the
// candidate count exceeds max_candidates.
std::optional<FqVector> brute_force_minrank(
    const MinRankInstance& inst, std::uint64_t max_candidates = 1u << 22);

// Throw std::runtime_error describing the first violated structural
// invariant, if any (systematic shapes, orthogonality, plant consistency).
void validate(const RdInstance& inst);
void validate(const MinRankInstance& inst);

// JSON text (format version 1); field names are documented in docs/FORMAT.md.
std::string serialize(const RdInstance& inst);
std::string serialize(const MinRankInstance& inst);

struct LoadedInstance {
  std::optional<RdInstance> rd;
  std::optional<MinRankInstance> minrank;
};

// Parses either instance kind; throws std::runtime_error on malformed input
// or unsupported format version.
LoadedInstance parse_instance(const std::string& text);

}  // namespace rankforge
