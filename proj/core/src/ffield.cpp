#include "rankforge/ffield.hpp"

#include <stdexcept>
#include <string>

namespace rankforge {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// --- polynomial helpers over F_q, ascending coefficient lists ---

void poly_trim(FqPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int poly_deg(const FqPoly& p) { return static_cast<int>(p.size()) - 1; }

FqPoly poly_mul(const PrimeField& f, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  poly_trim(out);
  return out;
}

// a mod b, b nonzero (not necessarily monic).
FqPoly poly_mod(const PrimeField& f, FqPoly a, const FqPoly& b) {
  poly_trim(a);
  const int db = poly_deg(b);
  if (db < 0) throw std::invalid_argument("polynomial division by zero");
  const std::uint32_t lead_inv = f.inv(b[db]);
  while (poly_deg(a) >= db) {
    const int da = poly_deg(a);
    const std::uint32_t c = f.mul(a[da], lead_inv);
    for (int i = 0; i <= db; ++i)
      a[da - db + i] = f.sub(a[da - db + i], f.mul(c, b[i]));
    poly_trim(a);
  }
  return a;
}

FqPoly poly_gcd(const PrimeField& f, FqPoly a, FqPoly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    FqPoly r = poly_mod(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    const std::uint32_t c = f.inv(a.back());
    for (auto& v : a) v = f.mul(v, c);
  }
  return a;
}

// x^(q^e) mod modp, by repeated q-th powering of x.
FqPoly poly_frobenius_power(const PrimeField& f, const FqPoly& modp,
                            std::uint32_t e) {
  FqPoly x = {0, 1};
  FqPoly acc = poly_mod(f, x, modp);
  for (std::uint32_t round = 0; round < e; ++round) {
    // acc <- acc^q mod modp, via square-and-multiply on the exponent q.
    FqPoly result = {1};
    FqPoly base = acc;
    std::uint32_t exp = f.q();
    while (exp) {
      if (exp & 1) result = poly_mod(f, poly_mul(f, result, base), modp);
      base = poly_mod(f, poly_mul(f, base, base), modp);
      exp >>= 1;
    }
    acc = std::move(result);
  }
  return acc;
}

FqPoly poly_sub(const PrimeField& f, FqPoly a, const FqPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  poly_trim(a);
  return a;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (!is_prime(q))
    throw std::invalid_argument("field order must be prime, got " +
                                std::to_string(q));
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  // Extended Euclid on (a, q).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += q_;
  return static_cast<std::uint32_t>(t);
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t result = 1 % q_;
  std::uint32_t base = a % q_;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool poly_irreducible(const PrimeField& f, const FqPoly& poly) {
  FqPoly p = poly;
  poly_trim(p);
  const int m = poly_deg(p);
  if (m < 1) return false;
  if (m == 1) return true;
  // f of degree m is irreducible iff x^(q^m) = x mod f and, for every prime
  // divisor d of m, gcd(x^(q^(m/d)) - x, f) = 1.
  const FqPoly x = {0, 1};
  FqPoly top = poly_frobenius_power(f, p, static_cast<std::uint32_t>(m));
  if (!poly_sub(f, top, x).empty()) return false;
  std::uint32_t rest = static_cast<std::uint32_t>(m);
  for (std::uint32_t d = 2; d * d <= rest; ++d) {
    if (rest % d != 0) continue;
    while (rest % d == 0) rest /= d;
    FqPoly fr = poly_frobenius_power(f, p, static_cast<std::uint32_t>(m) / d);
    FqPoly g = poly_gcd(f, poly_sub(f, fr, x), p);
    if (poly_deg(g) != 0) return false;
  }
  if (rest > 1) {
    FqPoly fr =
        poly_frobenius_power(f, p, static_cast<std::uint32_t>(m) / rest);
    FqPoly g = poly_gcd(f, poly_sub(f, fr, x), p);
    if (poly_deg(g) != 0) return false;
  }
  return true;
}

namespace {

FqPoly first_irreducible(const PrimeField& f, std::uint32_t m) {
  // Scan lower-coefficient vectors in ascending base-q integer order
  // (constant coefficient = least significant digit).
  FqPoly p(m + 1, 0);
  p[m] = 1;
  while (true) {
    if (poly_irreducible(f, p)) return p;
    // Increment the digit vector (a_0, ..., a_{m-1}).
    std::uint32_t i = 0;
    for (; i < m; ++i) {
      if (++p[i] < f.q()) break;
      p[i] = 0;
    }
    if (i == m)
      throw std::logic_error("no irreducible polynomial found");  // unreachable
  }
}

}  // namespace

ExtField::ExtField(PrimeField base, std::uint32_t m)
    : ExtField(base, m, first_irreducible(base, m)) {}

ExtField::ExtField(PrimeField base, std::uint32_t m, FqPoly modulus)
    : base_(base), m_(m), modulus_(std::move(modulus)) {
  if (m_ == 0) throw std::invalid_argument("extension degree must be >= 1");
  if (modulus_.size() != m_ + 1 || modulus_[m_] != 1)
    throw std::invalid_argument("modulus must be monic of degree m");
  for (auto c : modulus_)
    if (c >= base_.q()) throw std::invalid_argument("modulus coefficient out of range");
  if (!poly_irreducible(base_, modulus_))
    throw std::invalid_argument("modulus is reducible");
  if (packable()) {
    for (std::uint32_t i = 0; i <= m_ && i < 64; ++i)
      if (modulus_[i]) packed_modulus_ |= (std::uint64_t{1} << i);
    // For m = 64 the leading bit falls outside the word; reduction handles
    // it implicitly since the modulus is monic.
  }
}

ExtElt ExtField::one() const {
  ExtElt e(m_, 0);
  e[0] = 1;
  return e;
}

ExtElt ExtField::gen() const {
  ExtElt e(m_, 0);
  if (m_ == 1) {
    // Degree-1 extension: x = -modulus[0].
    e[0] = base_.neg(modulus_[0]);
  } else {
    e[1] = 1;
  }
  return e;
}

ExtElt ExtField::from_base(std::uint32_t c) const {
  ExtElt e(m_, 0);
  e[0] = c % base_.q();
  return e;
}

bool ExtField::is_zero(const ExtElt& a) const {
  for (auto c : a)
    if (c) return false;
  return true;
}

ExtElt ExtField::add(const ExtElt& a, const ExtElt& b) const {
  if (a.size() != m_ || b.size() != m_)
    throw std::invalid_argument("element size mismatch");
  ExtElt out(m_);
  for (std::uint32_t i = 0; i < m_; ++i) out[i] = base_.add(a[i], b[i]);
  return out;
}

ExtElt ExtField::sub(const ExtElt& a, const ExtElt& b) const {
  if (a.size() != m_ || b.size() != m_)
    throw std::invalid_argument("element size mismatch");
  ExtElt out(m_);
  for (std::uint32_t i = 0; i < m_; ++i) out[i] = base_.sub(a[i], b[i]);
  return out;
}

ExtElt ExtField::neg(const ExtElt& a) const {
  ExtElt out(m_);
  for (std::uint32_t i = 0; i < m_; ++i) out[i] = base_.neg(a[i]);
  return out;
}

ExtElt ExtField::mul(const ExtElt& a, const ExtElt& b) const {
  if (a.size() != m_ || b.size() != m_)
    throw std::invalid_argument("element size mismatch");
  if (packable()) return unpack(mul_packed(pack(a), pack(b)));
  // Schoolbook product, then reduce from the top by the monic modulus.
  std::vector<std::uint32_t> prod(2 * m_ - 1, 0);
  for (std::uint32_t i = 0; i < m_; ++i) {
    if (a[i] == 0) continue;
    for (std::uint32_t j = 0; j < m_; ++j)
      prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
  }
  for (std::uint32_t d = 2 * m_ - 2; d >= m_; --d) {
    const std::uint32_t c = prod[d];
    if (c) {
      prod[d] = 0;
      for (std::uint32_t i = 0; i < m_; ++i)
        prod[d - m_ + i] = base_.sub(prod[d - m_ + i], base_.mul(c, modulus_[i]));
    }
  }
  prod.resize(m_);
  return prod;
}

void ExtField::add_mul_inplace(ExtElt& a, const ExtElt& b,
                               const ExtElt& c) const {
  ExtElt p = mul(b, c);
  for (std::uint32_t i = 0; i < m_; ++i) a[i] = base_.add(a[i], p[i]);
}

ExtElt ExtField::scalar_mul(std::uint32_t c, const ExtElt& a) const {
  ExtElt out(m_);
  for (std::uint32_t i = 0; i < m_; ++i) out[i] = base_.mul(c, a[i]);
  return out;
}

ExtElt ExtField::inv(const ExtElt& a) const {
  if (is_zero(a)) throw std::domain_error("inverse of zero");
  // Extended Euclid in F_q[x] on (a, modulus): t*a = gcd = const.
  FqPoly r = modulus_;
  FqPoly new_r(a);
  poly_trim(new_r);
  FqPoly t{}, new_t{1};
  while (!new_r.empty()) {
    // r = quot * new_r + rem
    FqPoly rem = r;
    const int db = poly_deg(new_r);
    FqPoly quot(std::max(poly_deg(rem) - db + 1, 0), 0);
    const std::uint32_t lead_inv = base_.inv(new_r[db]);
    while (poly_deg(rem) >= db) {
      const int da = poly_deg(rem);
      const std::uint32_t c = base_.mul(rem[da], lead_inv);
      quot[da - db] = c;  // each degree position is visited at most once
      for (int i = 0; i <= db; ++i)
        rem[da - db + i] = base_.sub(rem[da - db + i], base_.mul(c, new_r[i]));
      poly_trim(rem);
    }
    FqPoly next_t = poly_sub(base_, t, poly_mul(base_, quot, new_t));
    r = std::move(new_r);
    new_r = std::move(rem);
    t = std::move(new_t);
    new_t = std::move(next_t);
  }
  // r is the gcd, a nonzero constant; scale t by its inverse.
  const std::uint32_t scale = base_.inv(r[0]);
  ExtElt out(m_, 0);
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = base_.mul(t[i], scale);
  return out;
}

ExtElt ExtField::pow(const ExtElt& a, std::uint64_t e) const {
  ExtElt result = one();
  ExtElt base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint64_t ExtField::pack(const ExtElt& a) const {
  std::uint64_t v = 0;
  for (std::uint32_t i = 0; i < m_; ++i)
    if (a[i]) v |= (std::uint64_t{1} << i);
  return v;
}

ExtElt ExtField::unpack(std::uint64_t v) const {
  ExtElt e(m_, 0);
  for (std::uint32_t i = 0; i < m_; ++i) e[i] = (v >> i) & 1;
  return e;
}

std::uint64_t ExtField::mul_packed(std::uint64_t a, std::uint64_t b) const {
  // Carry-less multiply then reduce; the product has < 2m-1 bits.
  unsigned __int128 prod = 0;
  std::uint64_t aa = a;
  int shift = 0;
  while (aa) {
    if (aa & 1) prod ^= (static_cast<unsigned __int128>(b) << shift);
    aa >>= 1;
    ++shift;
  }
  const unsigned __int128 mod128 =
      (static_cast<unsigned __int128>(1) << m_) ^ packed_modulus_;
  for (int d = 2 * static_cast<int>(m_) - 2; d >= static_cast<int>(m_); --d) {
    if ((prod >> d) & 1) prod ^= (mod128 << (d - static_cast<int>(m_)));
  }
  return static_cast<std::uint64_t>(prod &
                                    ((static_cast<unsigned __int128>(1) << m_) - 1));
}

std::vector<std::vector<std::uint32_t>> unfold(const ExtField& f,
                                               const std::vector<ExtElt>& v) {
  std::vector<std::vector<std::uint32_t>> rows(
      f.m(), std::vector<std::uint32_t>(v.size(), 0));
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].size() != f.m()) throw std::invalid_argument("element size mismatch");
    for (std::uint32_t i = 0; i < f.m(); ++i) rows[i][j] = v[j][i];
  }
  return rows;
}

int rank_weight(const ExtField& f, const std::vector<ExtElt>& v) {
  // Small self-contained elimination over F_q on the coordinate matrix.
  auto mat = unfold(f, v);
  const PrimeField& fq = f.base();
  const std::size_t nrows = mat.size(), ncols = v.size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < nrows; ++col) {
    std::size_t piv = row;
    while (piv < nrows && mat[piv][col] == 0) ++piv;
    if (piv == nrows) continue;
    std::swap(mat[piv], mat[row]);
    const std::uint32_t pinv = fq.inv(mat[row][col]);
    for (std::size_t j = col; j < ncols; ++j) mat[row][j] = fq.mul(mat[row][j], pinv);
    for (std::size_t i = 0; i < nrows; ++i) {
      if (i == row || mat[i][col] == 0) continue;
      const std::uint32_t c = mat[i][col];
      for (std::size_t j = col; j < ncols; ++j)
        mat[i][j] = fq.sub(mat[i][j], fq.mul(c, mat[row][j]));
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace rankforge
