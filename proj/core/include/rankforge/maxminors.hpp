#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankforge/instances.hpp"
#include "rankforge/linalg.hpp"

namespace rankforge {

// Why a rank-decoding solve attempt failed. RANK_DEFICIENT and
// VERIFICATION_FAILED trigger the coordinate-permutation retry policy inside
// solve_overdetermined; NOT_FOUND means a guess enumeration was exhausted and
// the caller should re-randomize the instance itself.
enum class SolveFailReason { RANK_DEFICIENT, VERIFICATION_FAILED, NOT_FOUND };

class SolveError : public std::runtime_error {
 public:
  SolveError(SolveFailReason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  SolveFailReason reason() const { return reason_; }

 private:
  SolveFailReason reason_;
};

// Linearized system over the minor variables c_T. Columns are indexed by the
// r-subsets T of the first n-p coordinates in lexicographic order, so column 0
// is always T = {0..r-1}: the variable the solver pins to 1, i.e. the affine
// part of the otherwise homogeneous system. When a > 0 the trailing a
// coordinates of the support matrix were specialized to the stored guess and
// the columns only range over subsets of the first n-a coordinates.
struct MaxMinSystem {
  DenseMatrix matrix;  // m*binom(n-p-k-1, r) rows, binom(n-p-a, r) columns
  std::vector<std::vector<std::uint32_t>> columns;  // column -> subset T
  std::size_t p = 0;             // trailing coordinates punctured away
  std::size_t a = 0;             // trailing support columns specialized
  std::vector<FqVector> guess;   // a columns of length r (empty when a == 0)
};

// All r-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::uint32_t>> r_subsets(std::size_t n,
                                                  std::size_t r);

// Position of a sorted r-subset within r_subsets(n, r).
std::size_t subset_rank(const std::vector<std::uint32_t>& t, std::size_t n);

// Coefficient of the minor variable c_T in the equation for parity subset J:
// the determinant of htilde-transpose restricted to coordinate rows T and
// parity columns J. Zero unless every coordinate of T beyond position k
// matches a member of J (the parity rows are systematic on the tail).
ExtElt maxmin_coefficient(const RdInstance& inst,
                          const std::vector<std::uint32_t>& t,
                          const std::vector<std::uint32_t>& j);

// Builds the linearized system for the instance punctured to its first n-p
// coordinates: one equation per r-subset J of the first n-p-k-1 parity rows,
// expanded over the minor variables and unfolded into m base-field rows.
// Every row vanishes on the minor vector of any valid support matrix.
MaxMinSystem build_maxmin(const RdInstance& inst, std::size_t p);

// Full linearization attack for the overdetermined regime, optionally
// puncturing p trailing coordinates first: solves the linear system for the
// support minors, reads off the support matrix, recovers the error
// coefficients over the extension field, and verifies the result. Retries
// under random coordinate permutations (up to n extra attempts) when an
// attempt fails; throws SolveError after the last retry and
// std::invalid_argument when m*binom(n-p-k-1,r) < binom(n-p,r) - 1.
ExtVector solve_overdetermined(const RdInstance& inst, std::size_t p);

// Hybrid variant: enumerates all q^(a*r) specializations of the last a
// support columns, solving the reduced system over binom(n-a, r) minor
// variables for each guess until one yields a verified error. a = 0 is
// exactly solve_overdetermined(inst, 0). Like the overdetermined solver,
// a failed enumeration is retried under up to n random coordinate
// permutations, and the recovered error is mapped back to the original
// coordinates. Throws
// SolveError(NOT_FOUND) when every permutation fails and
// std::invalid_argument when even the reduced system is underdetermined.
// `threads` workers split the guess range; the lowest successful guess
// index wins regardless of thread timing.
ExtVector solve_hybrid(const RdInstance& inst, std::size_t a,
                       std::size_t threads = 1);

// Measured frequency of the expected rank binom(n-p, r) - 1 over freshly
// generated planted instances (trial t uses seed + t).
struct RankHeuristicResult {
  std::size_t trials = 0;
  std::size_t hits = 0;           // trials reaching the expected rank
  std::size_t expected_rank = 0;  // binom(n-p, r) - 1
  double fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(hits) / trials;
  }
};

RankHeuristicResult verify_rank_heuristic(std::uint32_t q, std::uint32_t m,
                                          std::size_t n, std::size_t k,
                                          std::size_t r, std::size_t p,
                                          std::size_t trials,
                                          std::uint64_t seed);

}  // namespace rankforge
