#include "doctest.h"
#include "rankforge/ffield.hpp"

#include <random>

using namespace rankforge;

TEST_CASE("prime field rejects composite and accepts prime orders") {
  CHECK_THROWS(PrimeField(1));
  CHECK_THROWS(PrimeField(4));
  CHECK_THROWS(PrimeField(15));
  CHECK_NOTHROW(PrimeField(2));
  CHECK_NOTHROW(PrimeField(13));
  CHECK_NOTHROW(PrimeField(65537));
}

TEST_CASE("prime field axioms hold exhaustively for small q") {
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u, 17u}) {
    PrimeField f(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      CHECK(f.add(a, 0) == a);
      CHECK(f.mul(a, 1) == a);
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (std::uint32_t c = 0; c < q; ++c) {
          CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("default modulus is the first irreducible in base-q integer order") {
  // F_8 = F_2[x]/(x^3+x+1): x^3, x^3+1, x^3+x are reducible, x^3+x+1 is not.
  ExtField f8(PrimeField(2), 3);
  CHECK(f8.modulus() == FqPoly{1, 1, 0, 1});
  // F_256: the first irreducible octic is x^8+x^4+x^3+x+1.
  ExtField f256(PrimeField(2), 8);
  CHECK(f256.modulus() == FqPoly{1, 1, 0, 1, 1, 0, 0, 0, 1});
  // Determinism: constructing twice gives the same modulus.
  ExtField g(PrimeField(13), 4);
  ExtField h(PrimeField(13), 4);
  CHECK(g.modulus() == h.modulus());
  CHECK(poly_irreducible(PrimeField(13), g.modulus()));
}

TEST_CASE("reducible modulus is rejected") {
  // x^2 + 1 = (x+1)^2 over F_2.
  CHECK_THROWS(ExtField(PrimeField(2), 2, FqPoly{1, 0, 1}));
  CHECK_NOTHROW(ExtField(PrimeField(2), 2, FqPoly{1, 1, 1}));
}

TEST_CASE("extension multiplication: identity and forced reduction") {
  ExtField f(PrimeField(2), 3);  // x^3 + x + 1
  auto a = f.gen();
  // a * 1 = a
  CHECK(f.mul(a, f.one()) == a);
  // a * a^2 = a^3 = a + 1, coordinates (1,1,0).
  auto a2 = f.mul(a, a);
  CHECK(f.mul(a, a2) == ExtElt{1, 1, 0});
}

namespace {

// Independent schoolbook-then-reduce oracle, structured differently from the
// library path (full product vector, long division by the modulus).
ExtElt oracle_mul(const ExtField& f, const ExtElt& x, const ExtElt& y) {
  const PrimeField& fq = f.base();
  std::vector<std::uint32_t> prod(2 * f.m(), 0);
  for (std::uint32_t i = 0; i < f.m(); ++i)
    for (std::uint32_t j = 0; j < f.m(); ++j)
      prod[i + j] = fq.add(prod[i + j], fq.mul(x[i], y[j]));
  // long division by the monic modulus
  for (int d = static_cast<int>(prod.size()) - 1; d >= static_cast<int>(f.m()); --d) {
    std::uint32_t c = prod[d];
    if (!c) continue;
    for (std::uint32_t i = 0; i <= f.m(); ++i)
      prod[d - f.m() + i] =
          fq.sub(prod[d - f.m() + i], fq.mul(c, f.modulus()[i]));
  }
  prod.resize(f.m());
  return prod;
}

ExtElt random_elt(const ExtField& f, std::mt19937_64& rng) {
  ExtElt e(f.m());
  for (auto& c : e) c = static_cast<std::uint32_t>(rng() % f.q());
  return e;
}

}  // namespace

TEST_CASE("extension multiplication matches schoolbook oracle in F_13^4") {
  ExtField f(PrimeField(13), 4);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    auto a = random_elt(f, rng), b = random_elt(f, rng);
    CHECK(f.mul(a, b) == oracle_mul(f, a, b));
  }
}

TEST_CASE("packed q=2 path agrees with generic multiplication") {
  ExtField f(PrimeField(2), 23);
  REQUIRE(f.packable());
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto a = random_elt(f, rng), b = random_elt(f, rng);
    auto via_packed = f.unpack(f.mul_packed(f.pack(a), f.pack(b)));
    CHECK(via_packed == oracle_mul(f, a, b));
    CHECK(f.pack(f.unpack(f.pack(a))) == f.pack(a));
  }
}

TEST_CASE("extension inverse and power") {
  for (std::uint32_t q : {2u, 13u}) {
    ExtField f(PrimeField(q), 5);
    std::mt19937_64 rng(q);
    CHECK_THROWS(f.inv(f.zero()));
    for (int t = 0; t < 100; ++t) {
      auto a = random_elt(f, rng);
      if (f.is_zero(a)) continue;
      CHECK(f.mul(a, f.inv(a)) == f.one());
    }
    // a^(q^m - 1) = 1 for nonzero a (multiplicative group order).
    std::uint64_t order = 1;
    for (std::uint32_t i = 0; i < f.m(); ++i) order *= q;
    auto a = random_elt(f, rng);
    if (!f.is_zero(a)) CHECK(f.pow(a, order - 1) == f.one());
  }
}

TEST_CASE("unfold basis coordinates and linearity") {
  ExtField f(PrimeField(2), 3);
  auto rows = unfold(f, {f.one(), f.gen()});
  CHECK(rows == std::vector<std::vector<std::uint32_t>>{
                    {1, 0}, {0, 1}, {0, 0}});
  auto zrows = unfold(f, {f.zero(), f.zero(), f.zero()});
  for (auto& r : zrows)
    for (auto v : r) CHECK(v == 0);

  // F_q-linearity: unfold(c*s + t) = c*unfold(s) + unfold(t).
  ExtField g(PrimeField(13), 4);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<ExtElt> s, u;
    for (int j = 0; j < 5; ++j) {
      s.push_back(random_elt(g, rng));
      u.push_back(random_elt(g, rng));
    }
    std::uint32_t c = static_cast<std::uint32_t>(rng() % 13);
    std::vector<ExtElt> comb;
    for (int j = 0; j < 5; ++j)
      comb.push_back(g.add(g.scalar_mul(c, s[j]), u[j]));
    auto lhs = unfold(g, comb);
    auto rs = unfold(g, s), ru = unfold(g, u);
    for (std::uint32_t i = 0; i < g.m(); ++i)
      for (int j = 0; j < 5; ++j)
        CHECK(lhs[i][j] == g.base().add(g.base().mul(c, rs[i][j]), ru[i][j]));
  }
}

TEST_CASE("unfolding preserves F_q solution sets of ext-linear systems") {
  // One linear equation sum a_j t_j = 0 over F_{q^m} with unknowns t_j in F_q:
  // enumerate all F_q assignments; the ext equation holds iff all m unfolded
  // rows hold.
  for (std::uint32_t q : {2u, 3u}) {
    ExtField f(PrimeField(q), 3);
    std::mt19937_64 rng(q * 17);
    const int nvars = 4;
    int systems = 0;
    while (systems < 100) {
      ++systems;
      std::vector<ExtElt> coef;
      for (int j = 0; j < nvars; ++j) coef.push_back(random_elt(f, rng));
      auto rows = unfold(f, coef);
      std::vector<std::uint32_t> assign(nvars, 0);
      std::uint64_t total = 1;
      for (int j = 0; j < nvars; ++j) total *= q;
      for (std::uint64_t v = 0; v < total; ++v) {
        std::uint64_t tmp = v;
        for (int j = 0; j < nvars; ++j) {
          assign[j] = static_cast<std::uint32_t>(tmp % q);
          tmp /= q;
        }
        ExtElt acc = f.zero();
        for (int j = 0; j < nvars; ++j)
          acc = f.add(acc, f.scalar_mul(assign[j], coef[j]));
        bool ext_zero = f.is_zero(acc);
        bool unfold_zero = true;
        for (std::uint32_t i = 0; i < f.m(); ++i) {
          std::uint32_t s = 0;
          for (int j = 0; j < nvars; ++j)
            s = f.base().add(s, f.base().mul(assign[j], rows[i][j]));
          if (s != 0) unfold_zero = false;
        }
        CHECK(ext_zero == unfold_zero);
      }
    }
  }
}

TEST_CASE("rank weight: zero, basis powers, planted factorization") {
  ExtField f(PrimeField(2), 7);
  CHECK(rank_weight(f, {f.zero(), f.zero()}) == 0);
  std::vector<ExtElt> basis;
  auto a = f.one();
  for (int i = 0; i < 5; ++i) {
    basis.push_back(a);
    a = f.mul(a, f.gen());
  }
  CHECK(rank_weight(f, basis) == 5);

  // v = (1, a, ..., a^{m-1}) * S * C with S full column rank r, C full row
  // rank r has rank weight exactly r.
  std::mt19937_64 rng(5);
  const int r = 2, n = 8;
  const PrimeField& fq = f.base();
  // S: m x r over F_q with independent columns (pick identity-like + noise).
  std::vector<std::vector<std::uint32_t>> S(f.m(), std::vector<std::uint32_t>(r, 0));
  S[0][0] = 1;
  S[3][1] = 1;
  for (std::uint32_t i = 0; i < f.m(); ++i)
    for (int j = 0; j < r; ++j)
      if (!((i == 0 && j == 0) || (i == 3 && j == 1)))
        S[i][j] = static_cast<std::uint32_t>(rng() % 2);
  // C: r x n over F_q with an identity block in front.
  std::vector<std::vector<std::uint32_t>> C(r, std::vector<std::uint32_t>(n, 0));
  for (int i = 0; i < r; ++i) {
    C[i][i] = 1;
    for (int j = r; j < n; ++j) C[i][j] = static_cast<std::uint32_t>(rng() % 2);
  }
  // u_i = sum_t a^t S[t][i]; e_j = sum_i u_i C[i][j].
  std::vector<ExtElt> u(r, f.zero());
  for (int i = 0; i < r; ++i) {
    ExtElt p = f.one();
    for (std::uint32_t t = 0; t < f.m(); ++t) {
      u[i] = f.add(u[i], f.scalar_mul(S[t][i], p));
      p = f.mul(p, f.gen());
    }
  }
  std::vector<ExtElt> e(n, f.zero());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < r; ++i)
      e[j] = f.add(e[j], f.scalar_mul(C[i][j], u[i]));
  (void)fq;
  CHECK(rank_weight(f, e) == r);
}
