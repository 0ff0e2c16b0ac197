// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qzk/ring.hpp"

using qzk::CQ2;
using qzk::Error;
using qzk::ErrorKind;
using qzk::Q2;
using qzk::Rat;

TEST_CASE("Rat normalizes on construction") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(-1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(0, 7) == Rat(0));
  CHECK(Rat(0, -7).den() == 1);
  CHECK(Rat(6, 3).is_integer());
}

TEST_CASE("Rat rejects zero denominators and overflow") {
  CHECK_THROWS_AS(Rat(1, 0), Error);
  try {
    Rat big(INT64_MAX, 1);
    Rat r = big * big;  // must not wrap silently
    (void)r;
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOverflow);
  }
}

TEST_CASE("Rat arithmetic is exact") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) - Rat(1, 2) == Rat(-1, 6));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(2, 3) / Rat(4, 3) == Rat(1, 2));
  CHECK(Rat(7, 3) < Rat(5, 2));
  CHECK(Rat::pow2(-3) == Rat(1, 8));
  CHECK(Rat::pow2(5) == Rat(32));
  // Intermediate products that exceed 64 bits but reduce back are fine.
  Rat a(INT64_MAX / 2, 3);
  CHECK(a * Rat(3) == Rat(INT64_MAX / 2));
}

TEST_CASE("Q2 is a field") {
  Q2 x(Rat(1, 2), Rat(-3, 4));
  Q2 y(Rat(2, 3), Rat(1, 5));
  CHECK((x + y) - y == x);
  CHECK(x * y == y * x);
  CHECK((x * y) / y == x);
  CHECK(x * x.inverse() == Q2(1));
  CHECK(Q2::sqrt2() * Q2::sqrt2() == Q2(2));
  CHECK(Q2::pow_sqrt2(-1) * Q2::sqrt2() == Q2(1));
  CHECK(Q2::pow_sqrt2(7) == Q2(Rat(0), Rat(8)));
  CHECK(Q2::pow_sqrt2(-4) == Q2(Rat(1, 4)));
  CHECK_THROWS_AS(Q2(0).inverse(), Error);
}

TEST_CASE("Q2 sign and order respect the real embedding") {
  // 3 - 2*sqrt2 = 0.1716 > 0 while 1 - sqrt2 < 0.
  CHECK(Q2(Rat(3), Rat(-2)).sign() == 1);
  CHECK(Q2(Rat(1), Rat(-1)).sign() == -1);
  CHECK(Q2(Rat(-3), Rat(2)).sign() == -1);
  CHECK(Q2(0).sign() == 0);
  CHECK(Q2(Rat(1), Rat(-1)) < Q2(0));
  CHECK(Q2(Rat(0), Rat(1)) < Q2(Rat(3, 2)));  // sqrt2 < 1.5
  CHECK(Q2(Rat(7, 5)) < Q2::sqrt2());         // 1.4 < sqrt2
}

TEST_CASE("CQ2 complex arithmetic and conjugation") {
  CQ2 i = CQ2::i();
  CHECK(i * i == CQ2(-1));
  CHECK(CQ2::i_pow(3) == -i);
  CHECK(CQ2::i_pow(-1) == -i);
  CHECK(CQ2::i_pow(4) == CQ2(1));
  CQ2 z(Q2(Rat(1, 2)), Q2(Rat(0), Rat(1, 2)));  // 1/2 + (sqrt2/2) i
  CHECK(z.conj() * z == CQ2(Q2(Rat(3, 4))));
  CHECK(z.abs2() == Q2(Rat(3, 4)));
  CHECK(z * z.inverse() == CQ2(1));
  CHECK_THROWS_AS(CQ2(0).inverse(), Error);
}

TEST_CASE("field axioms hold on random elements") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::int64_t> num(-6, 6);
  std::uniform_int_distribution<std::int64_t> den(1, 4);
  auto rand_q2 = [&] { return Q2(Rat(num(rng), den(rng)), Rat(num(rng), den(rng))); };
  for (int trial = 0; trial < 200; ++trial) {
    CQ2 x(rand_q2(), rand_q2());
    CQ2 y(rand_q2(), rand_q2());
    CQ2 z(rand_q2(), rand_q2());
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x + (-x) == CQ2(0));
    if (!y.is_zero()) CHECK((x / y) * y == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
  }
}

TEST_CASE("printing stays small and readable") {
  CHECK(Rat(-3, 2).str() == "-3/2");
  CHECK(Q2(Rat(1, 2), Rat(3, 4)).str() == "1/2+3/4*sqrt2");
  CHECK(Q2(Rat(0), Rat(-1)).str() == "-sqrt2");
  CHECK(Q2(Rat(1), Rat(-1, 2)).str() == "1-1/2*sqrt2");
  CHECK(CQ2(Q2(0), Q2(1)).str() == "(1)i");
  CHECK(CQ2(1).str() == "1");
}

TEST_CASE("approx matches exact values") {
  CHECK(Q2::sqrt2().approx() == doctest::Approx(1.41421356237).epsilon(1e-11));
  CHECK(CQ2(Q2(Rat(1, 4)), Q2(Rat(0), Rat(-1, 2))).approx_im() ==
        doctest::Approx(-0.70710678118).epsilon(1e-11));
}
