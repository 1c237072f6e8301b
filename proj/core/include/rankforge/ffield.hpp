#pragma once

// Exact arithmetic in the prime field F_q and the extension field F_{q^m},
// plus the coordinate unfolding of F_{q^m}-linear data into m-fold F_q data
// and the rank weight of vectors over F_{q^m}.

#include <cstdint>
#include <vector>

namespace rankforge {

// F_q with q prime; elements are canonical representatives in [0, q).
class PrimeField {
public:
  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * b) % q_);
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<std::uint32_t>(r < 0 ? r + q_ : r);
  }

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }

private:
  std::uint32_t q_;
};

// Polynomial over F_q as an ascending coefficient list (index = degree).
using FqPoly = std::vector<std::uint32_t>;

// An element of F_{q^m}: its m coordinates over the basis (1, a, ..., a^{m-1}),
// where a is the residue class of x modulo the field's defining polynomial.
using ExtElt = std::vector<std::uint32_t>;

// F_{q^m} = F_q[x]/(modulus) with a monic irreducible modulus of degree m.
// When no modulus is supplied, the first irreducible monic polynomial of
// degree m is used, "first" meaning smallest value of the coefficient list
// read as a base-q integer (constant coefficient least significant); the
// chosen modulus is recorded in every serialized artifact.
class ExtField {
public:
  ExtField(PrimeField base, std::uint32_t m);
  ExtField(PrimeField base, std::uint32_t m, FqPoly modulus);

  const PrimeField& base() const { return base_; }
  std::uint32_t q() const { return base_.q(); }
  std::uint32_t m() const { return m_; }
  const FqPoly& modulus() const { return modulus_; }

  ExtElt zero() const { return ExtElt(m_, 0); }
  ExtElt one() const;
  ExtElt gen() const;  // the residue class of x
  ExtElt from_base(std::uint32_t c) const;
  bool is_zero(const ExtElt& a) const;

  ExtElt add(const ExtElt& a, const ExtElt& b) const;
  ExtElt sub(const ExtElt& a, const ExtElt& b) const;
  ExtElt neg(const ExtElt& a) const;
  ExtElt mul(const ExtElt& a, const ExtElt& b) const;
  ExtElt inv(const ExtElt& a) const;  // throws on zero
  ExtElt pow(const ExtElt& a, std::uint64_t e) const;
  // a + b*c in one pass; the workhorse of elimination loops.
  void add_mul_inplace(ExtElt& a, const ExtElt& b, const ExtElt& c) const;
  ExtElt scalar_mul(std::uint32_t c, const ExtElt& a) const;

  // Bit-packed fast path for q = 2, m <= 64: an element is the integer whose
  // bit i is coordinate i. Used by determinant-heavy inner loops.
  bool packable() const { return base_.q() == 2 && m_ <= 64; }
  std::uint64_t pack(const ExtElt& a) const;
  ExtElt unpack(std::uint64_t v) const;
  std::uint64_t mul_packed(std::uint64_t a, std::uint64_t b) const;

  bool operator==(const ExtField& o) const {
    return base_ == o.base_ && m_ == o.m_ && modulus_ == o.modulus_;
  }

private:
  PrimeField base_;
  std::uint32_t m_;
  FqPoly modulus_;
  std::uint64_t packed_modulus_ = 0;  // valid when packable()
};

// True if f (ascending coefficients, monic) is irreducible over the base field.
bool poly_irreducible(const PrimeField& f, const FqPoly& poly);

// Coordinate matrix of a vector over F_{q^m}: m rows (one per coordinate
// index), one column per vector entry.
std::vector<std::vector<std::uint32_t>> unfold(const ExtField& f,
                                               const std::vector<ExtElt>& v);

// Rank over F_q of the coordinate matrix of v; the dimension of the support.
int rank_weight(const ExtField& f, const std::vector<ExtElt>& v);

}  // namespace rankforge
