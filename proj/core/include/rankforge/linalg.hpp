#pragma once

// Dense and sparse exact linear algebra over F_q: reduced row echelon form,
// rank, right kernel, dense solve, an incremental rank accumulator, and a
// black-box sparse kernel-element solver (Wiedemann with Berlekamp-Massey).

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rankforge/ffield.hpp"

namespace rankforge {

using FqVector = std::vector<std::uint32_t>;

class DenseMatrix {
public:
  DenseMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t at(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, std::uint32_t v) {
    data_[i * cols_ + j] = v;
  }
  std::uint32_t* row(std::size_t i) { return data_.data() + i * cols_; }
  const std::uint32_t* row(std::size_t i) const {
    return data_.data() + i * cols_;
  }

  FqVector mul_vec(const FqVector& v) const;

  bool operator==(const DenseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<std::uint32_t> data_;
};

struct RrefResult {
  DenseMatrix reduced;
  std::size_t rank;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form; deterministic (first nonzero entry in column
// order is the pivot). Row space is preserved.
RrefResult rref(const DenseMatrix& m);

// Basis of { v : M v = 0 }; dimension = cols - rank.
std::vector<FqVector> right_kernel(const DenseMatrix& m);

// Any x with M x = b, or nullopt iff the system is inconsistent.
std::optional<FqVector> solve(const DenseMatrix& m, const FqVector& b);

// Determinant of a square matrix (Gaussian elimination with sign tracking).
std::uint32_t det(const DenseMatrix& m);

// Incremental row-echelon accumulator: feed rows one at a time, track the
// rank, and optionally stop early once a caller-known rank cap is reached.
// Uses lazy modular reduction on odd q and bit-packed words on q = 2, which
// makes large rank measurements affordable.
class EchelonAccumulator {
public:
  EchelonAccumulator(PrimeField field, std::size_t cols);

  // Returns true if the row added a new pivot.
  bool add_row(const FqVector& row);
  bool add_row_sparse(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row);

  std::size_t rank() const { return rank_; }
  std::size_t cols() const { return cols_; }

  // Approximate count of word operations performed so far.
  std::uint64_t ops() const { return ops_; }

  // Fully back-reduces the accumulated rows and returns a right-kernel basis
  // of their row space (one vector per non-pivot column, unit at that
  // column). The accumulator remains usable afterwards.
  std::vector<FqVector> kernel_basis();

private:
  bool insert_reduced(std::vector<std::uint32_t>&& dense_row);
  bool insert_packed(std::vector<std::uint64_t>&& packed_row);

  PrimeField field_;
  std::size_t cols_;
  std::size_t rank_ = 0;
  std::uint64_t ops_ = 0;
  bool packed_;                 // q == 2 path
  std::size_t words_;           // packed row length
  // pivot_of_col_[c] = index into basis_ of the row with leading column c,
  // or SIZE_MAX.
  std::vector<std::size_t> pivot_of_col_;
  std::vector<std::vector<std::uint32_t>> basis_;         // odd q, reduced rows
  std::vector<std::vector<std::uint64_t>> basis_packed_;  // q = 2
  std::vector<std::size_t> lead_;                         // leading column per basis row
};

class SparseMatrix {
public:
  SparseMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), row_entries_(rows) {}

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Entries must be added with strictly increasing column index per row;
  // zero values are dropped.
  void add_entry(std::size_t i, std::uint32_t col, std::uint32_t val);
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row(
      std::size_t i) const {
    return row_entries_[i];
  }
  std::size_t nonzeros() const;

  FqVector mul_vec(const FqVector& v) const;
  DenseMatrix to_dense() const;

private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> row_entries_;
};

enum class WiedemannStatus {
  FOUND,             // nonzero v with M v = 0 returned
  TRIVIAL_KERNEL,    // kernel shown trivial (square path, all attempts)
  RETRIES_EXHAUSTED  // no kernel vector found within the retry limit
};

struct WiedemannResult {
  WiedemannStatus status;
  std::optional<FqVector> vector;
  int attempts = 0;
};

// Black-box sparse kernel element. Rectangular R x C inputs with R >= C are
// multiplied by a random sparse (C+32) x R projector and squared up by
// zero-column padding; every candidate is verified against the original
// matrix, with fresh randomness on retry.
WiedemannResult wiedemann_kernel_element(const SparseMatrix& m,
                                         std::uint64_t seed,
                                         int max_attempts = 8);

// Minimal polynomial of a linearly recurrent sequence (Berlekamp-Massey).
// Returned ascending; leading coefficient normalized to 1.
FqPoly berlekamp_massey(const PrimeField& f, const FqVector& seq);

// --- dense linear algebra over the extension field F_{q^m} ---

using ExtVector = std::vector<ExtElt>;

// In-place reduced row echelon form; returns the pivot columns. Rows must
// share a common length.
std::vector<std::size_t> ext_rref(const ExtField& f, std::vector<ExtVector>& rows);

std::size_t ext_rank(const ExtField& f, std::vector<ExtVector> rows);

// Basis of { v : M v = 0 } for the matrix with the given rows.
std::vector<ExtVector> ext_right_kernel(const ExtField& f,
                                        std::vector<ExtVector> rows);

// Basis of { s : s M = 0 }.
std::vector<ExtVector> ext_left_kernel(const ExtField& f,
                                       const std::vector<ExtVector>& rows);

// Any x with M x = b over F_{q^m}, or nullopt iff inconsistent.
std::optional<ExtVector> ext_solve(const ExtField& f,
                                   const std::vector<ExtVector>& rows,
                                   const ExtVector& b);

// Determinant of a square matrix over F_{q^m}; cofactor expansion for
// order <= 3, elimination above that.
ExtElt ext_det(const ExtField& f, std::vector<ExtVector> m);

}  // namespace rankforge
