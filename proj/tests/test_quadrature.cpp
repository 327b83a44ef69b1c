#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phdg/quadrature.hpp"

using namespace phdg;

namespace {

// closed-form oracle: int_T x^a y^b dx dy = a! b! / (a+b+2)! on the
// reference triangle
double monomial_integral(int a, int b) {
  double num = 1.0;
  for (int k = 2; k <= a; ++k) num *= k;
  for (int k = 2; k <= b; ++k) num *= k;
  double den = 1.0;
  for (int k = 2; k <= a + b + 2; ++k) den *= k;
  return num / den;
}

double apply(const QuadRule& rule, int a, int b) {
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    acc += rule.weights[q] * std::pow(rule.points[q][0], a) *
           std::pow(rule.points[q][1], b);
  return acc;
}

}  // namespace

TEST_CASE("triangle rule basics") {
  QuadRule r = triangle_rule(4);
  double sum = 0.0;
  for (double w : r.weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(apply(r, 1, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(apply(r, 1, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("triangle rule point symmetry") {
  // symmetrized rule: integrating x^a y^b equals integrating y^a x^b
  QuadRule r = triangle_rule(9);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5 - a; ++b)
      CHECK(apply(r, a, b) == doctest::Approx(apply(r, b, a)).epsilon(1e-14));
}

TEST_CASE("full monomial exactness sweep to degree 20") {
  for (int deg = 0; deg <= 20; ++deg) {
    QuadRule r = triangle_rule(deg);
    CAPTURE(deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; b + a <= deg; ++b) {
        double exact = monomial_integral(a, b);
        CHECK(std::abs(apply(r, a, b) - exact) <= 1e-14 * std::abs(exact) + 1e-17);
      }
  }
}

TEST_CASE("edge rules against 1/(k+1)") {
  for (int deg = 0; deg <= 20; ++deg) {
    QuadRule r = edge_rule(deg);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= deg; ++k) {
      double acc = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q)
        acc += r.weights[q] * std::pow(r.points[q][0], k);
      CHECK(acc == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
  }
  // n-point Gauss exact to degree 2n-1: the (k+2)/2+1-point rule just
  // covers k, so the sweep above is the oracle for that bound
  QuadRule r3 = edge_rule(5);
  CHECK(r3.size() == 3);
}

TEST_CASE("rejects unsupported degrees") {
  CHECK_THROWS(triangle_rule(21));
  CHECK_THROWS(triangle_rule(-1));
}

TEST_CASE("s^3 integral") {
  QuadRule r = edge_rule(3);
  double acc = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q)
    acc += r.weights[q] * std::pow(r.points[q][0], 3);
  CHECK(acc == doctest::Approx(0.25).epsilon(1e-14));
}
