#include <cmath>
#include <random>

#include "cuspfield/cyclotomic.hpp"
#include "cuspfield/error.hpp"
#include "doctest.h"

using namespace cuspfield;

namespace {

CycNumber random_element(std::mt19937& rng, i64 m) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<mpq_class> c;
  for (i64 i = 0; i < cyclo_data(m).degree; ++i) {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    c.push_back(q);
  }
  return CycNumber(m, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclo_data(1).poly == std::vector<i64>{-1, 1});
  CHECK(cyclo_data(4).poly == std::vector<i64>{1, 0, 1});
  CHECK(cyclo_data(6).poly == std::vector<i64>{1, -1, 1});
  CHECK(cyclo_data(12).poly == std::vector<i64>{1, 0, -1, 0, 1});
  CHECK(cyclo_data(36).degree == 12);
}

TEST_CASE("basic arithmetic") {
  CHECK(CycNumber::zeta(4) * CycNumber::zeta(4) == CycNumber::from_int(-1));
  CHECK(CycNumber::zeta(3) + CycNumber::zeta(3, 2) == CycNumber::from_int(-1));
  CycNumber x = CycNumber::one(5) + CycNumber::zeta(5);
  CHECK(x * x.inv() == CycNumber::one());
  CHECK_THROWS_AS(CycNumber::zero(7).inv(), Error);
  // mixed moduli unify through lcm
  CHECK(CycNumber::zeta(3) * CycNumber::zeta(4) == CycNumber::zeta(12, 7));
}

TEST_CASE("embed and descend") {
  CHECK(CycNumber::zeta(3).embed(6).coords().size() == 2);
  CHECK(CycNumber::zeta(3).embed(6) == CycNumber::zeta(6, 2));
  CHECK(CycNumber::one().embed(12) == CycNumber::one(12));
  CycNumber y = (CycNumber::zeta(4) + CycNumber::one(4)).embed(8).galois(1);
  auto expect = std::polar(1.0, M_PI / 2) + 1.0;
  CHECK(std::abs(y.to_complex() - expect) < 1e-12);
  CHECK(y == CycNumber::zeta(8, 2) + CycNumber::one(8));
  CHECK(y.descend(4) == CycNumber::zeta(4) + CycNumber::one(4));
  CHECK_THROWS_AS(CycNumber::zeta(8).descend(4), Error);
  CHECK_THROWS_AS(CycNumber::zeta(8).embed(12), Error);
  CHECK(CycNumber::zeta(6).embed(18).minimal().modulus() == 3);
  CHECK(CycNumber::rational(mpq_class(3, 7), 20).minimal().modulus() == 1);

  std::mt19937 rng(5);
  for (i64 m : {3, 4, 5, 9, 12}) {
    CycNumber v = random_element(rng, m);
    CHECK(v.embed(m * 6).descend(m) == v);
  }
}

TEST_CASE("galois action") {
  CHECK(CycNumber::zeta(9).galois(2) == CycNumber::zeta(9, 2));
  CycNumber x = CycNumber::zeta(3) + CycNumber::from_int(2, 3);
  CHECK(x.galois(2) == CycNumber::zeta(3, 2) + CycNumber::from_int(2, 3));
  CHECK_THROWS_AS(CycNumber::zeta(9).galois(3), Error);

  std::mt19937 rng(7);
  for (i64 m : {5, 8, 9, 12, 15}) {
    for (int rep = 0; rep < 4; ++rep) {
      CycNumber a = random_element(rng, m), b = random_element(rng, m);
      for (i64 l : units(m)) {
        CHECK((a * b).galois(l) == a.galois(l) * b.galois(l));
        CHECK((a + b).galois(l) == a.galois(l) + b.galois(l));
        for (i64 mu : units(m)) CHECK(a.galois(l).galois(mu) == a.galois(mod(l * mu, m)));
      }
      CHECK(a.galois(1) == a);
    }
  }
}

TEST_CASE("field axioms on random samples") {
  std::mt19937 rng(11);
  for (i64 m : {7, 12, 16, 20}) {
    for (int rep = 0; rep < 5; ++rep) {
      CycNumber a = random_element(rng, m), b = random_element(rng, m), c = random_element(rng, m);
      CHECK(a * b == b * a);
      CHECK(a + b == b + a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      if (!a.is_zero()) CHECK(a * a.inv() == CycNumber::one(m));
      auto z = (a * b).to_complex() - a.to_complex() * b.to_complex();
      CHECK(std::abs(z) < 1e-9);
    }
  }
}

TEST_CASE("textual round trip") {
  std::mt19937 rng(3);
  for (i64 m : {1, 2, 9, 36}) {
    CycNumber a = random_element(rng, m);
    std::string s = a.to_string();
    CHECK(CycNumber::parse(s) == a);
    CHECK(CycNumber::parse(s).to_string() == s);
  }
  CHECK(CycNumber::parse("3:[1/2,-4/6]").to_string() == "3:[1/2,-2/3]");
  CHECK_THROWS_AS(CycNumber::parse("3:[1]"), Error);
  CHECK_THROWS_AS(CycNumber::parse("x:[1]"), Error);
  CHECK_THROWS_AS(CycNumber::parse("1:[1/0]"), Error);
}

TEST_CASE("unit subgroups") {
  auto h = UnitSubgroup::generated(9, {4});
  CHECK(std::vector<i64>(h.elements().begin(), h.elements().end()) == std::vector<i64>{1, 4, 7});
  CHECK(h.is_subgroup_of(UnitSubgroup::full(9)));
  CHECK(UnitSubgroup::reduction_kernel(9, 3) == h);
  CHECK(h.project(3).order() == 1);
  CHECK(h.lift(18).order() == 3);
}

TEST_CASE("field_of") {
  std::vector<CycNumber> rat{CycNumber::rational(mpq_class(1, 2)), CycNumber::from_int(-3)};
  auto f = field_of(rat, 12);
  CHECK(f.stabilizer().order() == 4);
  CHECK(f.degree() == 1);
  CHECK(f.describe() == "Q");

  std::vector<CycNumber> z8{CycNumber::zeta(8)};
  CHECK(field_of(z8, 8).stabilizer().order() == 1);

  // zeta_9^2 + zeta_9^5 x over a Q(zeta_3)-basis; brute force the stabilizer
  std::vector<CycNumber> vals;
  for (const auto& x : {CycNumber::one(3), CycNumber::zeta(3)})
    vals.push_back(CycNumber::zeta(9, 2) + CycNumber::zeta(9, 5) * x);
  auto g = field_of(vals, 9);
  std::vector<i64> brute;
  for (i64 l : units(9)) {
    bool fixed = true;
    for (const auto& v : vals) fixed = fixed && v.galois(l) == v;
    if (fixed) brute.push_back(l);
  }
  CHECK(std::vector<i64>(g.stabilizer().elements().begin(), g.stabilizer().elements().end()) == brute);
  CHECK(g.degree() == 6);

  // monotone: more values, smaller stabilizer
  std::vector<CycNumber> one{CycNumber::zeta(12, 4)};
  std::vector<CycNumber> two{CycNumber::zeta(12, 4), CycNumber::zeta(12, 3)};
  CHECK(field_of(two, 12).stabilizer().is_subgroup_of(field_of(one, 12).stabilizer()));
  CHECK(field_of(one, 12).conductor() == 3);
  CHECK(field_of(one, 12).contains(CycNumber::zeta(3)));
  CHECK(!field_of(one, 12).contains(CycNumber::zeta(4)));
}

TEST_CASE("intersect_with_cyclotomic") {
  auto q3 = AbelianFieldDescriptor::cyclotomic(3);
  auto g = intersect_with_cyclotomic(q3, 9);
  CHECK(std::vector<i64>(g.elements().begin(), g.elements().end()) == std::vector<i64>{1, 4, 7});
  CHECK(intersect_with_cyclotomic(AbelianFieldDescriptor::rational(), 20) == UnitSubgroup::full(20));

  // Q(zeta_8) cap Q(zeta_12) = Q(i): brute force over (Z/24)^x
  auto g2 = intersect_with_cyclotomic(AbelianFieldDescriptor::cyclotomic(8), 12);
  std::vector<i64> brute;
  for (i64 l : units(12)) {
    // sigma_l fixes Q(zeta_8) cap Q(zeta_12) iff some lift to 24 fixes zeta_8 ... and agrees with l on zeta_12
    bool ok = false;
    for (i64 mu : units(24))
      if (mu % 12 == l && CycNumber::zeta(24, 3).galois(mu) == CycNumber::zeta(24, 3)) ok = true;
    if (ok) brute.push_back(l);
  }
  CHECK(std::vector<i64>(g2.elements().begin(), g2.elements().end()) == brute);
  CHECK(brute == std::vector<i64>{1, 5});
}

TEST_CASE("descriptors") {
  auto a = AbelianFieldDescriptor::cyclotomic(8), b = AbelianFieldDescriptor::cyclotomic(12);
  CHECK(a.intersection(b) == AbelianFieldDescriptor::cyclotomic(4));
  CHECK(a.compositum(b) == AbelianFieldDescriptor::cyclotomic(24));
  CHECK(AbelianFieldDescriptor::cyclotomic(6) == AbelianFieldDescriptor::cyclotomic(3));
  CHECK(AbelianFieldDescriptor::cyclotomic(6).describe() == "Q(zeta_3)");
  CHECK(a.contains(AbelianFieldDescriptor::cyclotomic(4)));
  CHECK(!AbelianFieldDescriptor::cyclotomic(4).contains(a));
}
