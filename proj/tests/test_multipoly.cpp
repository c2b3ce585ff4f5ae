#include <catch2/catch_amalgamated.hpp>

#include "translab/multipoly.hpp"

using translab::Complex;
using translab::MultiPoly;

TEST_CASE("multipoly constructors validate and print canonically") {
  CHECK_THROWS_AS(MultiPoly(0), std::invalid_argument);
  CHECK_THROWS_AS(MultiPoly::variable(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(MultiPoly::variable(2, 2), std::invalid_argument);

  CHECK(MultiPoly(3).to_string() == "0");
  CHECK(MultiPoly(3).is_zero());
  CHECK(MultiPoly(3).degree() == 0);
  CHECK(MultiPoly::constant(2, 5).to_string() == "5");
  CHECK(MultiPoly::constant(2, -3).to_string() == "-3");
  CHECK(MultiPoly::constant(2, 0).is_zero());
  CHECK(MultiPoly::variable(2, 0).to_string() == "1*x1");
  CHECK(MultiPoly::variable(2, 1).to_string() == "1*x2");
  CHECK(MultiPoly::variable(1, 0).times_var(0).to_string() == "1*x1^2");
}

TEST_CASE("subtraction cancels exactly and ordering is graded") {
  const MultiPoly x1 = MultiPoly::variable(2, 0);
  const MultiPoly x2 = MultiPoly::variable(2, 1);

  CHECK((x1 - x1).is_zero());
  CHECK((x1 - x2).to_string() == "1*x1 + -1*x2");

  // same total degree: x1^2*x2 outranks x2^2 (heavier leading variable);
  // different degree: the higher-degree term leads regardless of variables
  const MultiPoly p = x1.times_var(0).times_var(1) - x2.times_var(1);
  CHECK(p.to_string() == "1*x1^2*x2 + -1*x2^2");
  const MultiPoly q = x2.times_var(1) - x1;
  CHECK(q.to_string() == "1*x2^2 + -1*x1");

  CHECK_THROWS_AS(x1 - MultiPoly::variable(3, 0), std::invalid_argument);
}

TEST_CASE("level one is the coordinate family") {
  const auto fam = translab::poly_base(3);
  REQUIRE(fam.size() == 3);
  CHECK(fam[0].to_string() == "1*x1");
  CHECK(fam[1].to_string() == "1*x2");
  CHECK(fam[2].to_string() == "1*x3");
  CHECK_THROWS_AS(translab::poly_base(0), std::invalid_argument);
}

TEST_CASE("two-variable recursion matches hand computation") {
  // level 2: p_1 = x2 - x1^2, p_2 = -x1*x2
  const auto l2 = translab::poly_family(2, 2);
  REQUIRE(l2.size() == 2);
  CHECK(l2[0].to_string() == "-1*x1^2 + 1*x2");
  CHECK(l2[1].to_string() == "-1*x1*x2");

  // level 3: p_1 = (-x1*x2) - (x2 - x1^2)*x1 = x1^3 - 2*x1*x2
  //          p_2 = -(x2 - x1^2)*x2 = x1^2*x2 - x2^2
  const auto l3 = translab::poly_family(2, 3);
  CHECK(l3[0].to_string() == "1*x1^3 + -2*x1*x2");
  CHECK(l3[1].to_string() == "1*x1^2*x2 + -1*x2^2");

  // the closed forms evaluate accordingly
  const Complex pt[] = {Complex(2.0), Complex(3.0)};
  CHECK(l3[0].evaluate(pt) == Complex(8.0 - 12.0));
  CHECK(l3[1].evaluate(pt) == Complex(12.0 - 9.0));
}

TEST_CASE("one-variable family alternates signs of pure powers") {
  for (int ell = 1; ell <= 9; ++ell) {
    const auto fam = translab::poly_family(1, ell);
    REQUIRE(fam.size() == 1);
    MultiPoly expect = MultiPoly::variable(1, 0);
    for (int l = 1; l < ell; ++l) expect = expect.times_var(0);
    if (ell % 2 == 0) expect = expect.negate();
    CHECK(fam[0] == expect);
  }
}

TEST_CASE("degree and coefficient growth stay within the recursion bounds") {
  for (int n = 1; n <= 3; ++n) {
    auto fam = translab::poly_base(n);
    MultiPoly::Coeff bound = 1;
    for (int ell = 1; ell <= 10; ++ell) {
      for (const MultiPoly& p : fam) {
        CHECK(p.degree() <= ell);
        CHECK(p.max_abs_coeff() <= bound);
      }
      // one step at most doubles the largest coefficient
      MultiPoly::Coeff cur = 0;
      for (const MultiPoly& p : fam)
        cur = std::max(cur, p.max_abs_coeff());
      fam = translab::poly_step(fam);
      MultiPoly::Coeff next = 0;
      for (const MultiPoly& p : fam)
        next = std::max(next, p.max_abs_coeff());
      CHECK(next <= 2 * cur);
      bound *= 2;
    }
  }
}

TEST_CASE("term cap turns blowup into a structured error") {
  const auto fam = translab::poly_family(2, 3);
  std::size_t widest = 0;
  for (const MultiPoly& p : fam) widest = std::max(widest, p.term_count());
  REQUIRE(widest == 2);
  CHECK_THROWS_AS(translab::poly_step(fam, 1), translab::TermCapExceeded);
  CHECK_THROWS_AS(translab::poly_family(3, 8, 4), translab::TermCapExceeded);
  CHECK_NOTHROW(translab::poly_family(2, 12));
}

TEST_CASE("evaluate handles complex points and large exponents") {
  // p = x1^2*x2 - x2^2 at (i, 1+i): (i^2)(1+i) - (1+i)^2 = -1 - 3i
  const auto l3 = translab::poly_family(2, 3);
  const Complex pt[] = {Complex(0.0, 1.0), Complex(1.0, 1.0)};
  const Complex got = l3[1].evaluate(pt);
  CHECK(std::abs(got - Complex(-1.0, -3.0)) < 1e-14);

  const auto deep = translab::poly_family(1, 6);
  const Complex two[] = {Complex(2.0)};
  CHECK(deep[0].evaluate(two) == Complex(-64.0));

  CHECK_THROWS_AS(l3[0].evaluate(std::span<const Complex>(pt, 1)),
                  std::invalid_argument);
}
