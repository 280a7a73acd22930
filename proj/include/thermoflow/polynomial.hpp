#pragma once

#include <vector>

namespace tmf {

// Dense univariate polynomial, coefficients ascending by degree.
struct Polynomial {
  std::vector<double> c;  // value(s) = sum c[i] s^i; empty means 0

  double eval(double s) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Polynomial derivative() const;
  Polynomial antiderivative() const;  // constant term 0
  double integral(double a, double b) const;
  Polynomial shifted(double h) const;  // p(s + h)
  Polynomial plus(const Polynomial& q) const;
  Polynomial scaled(double a) const;
  void trim();

  // All real roots inside [a, b], ascending (derivative recursion + bisection).
  std::vector<double> roots_in(double a, double b) const;
  double min_on(double a, double b) const;
  double max_on(double a, double b) const;

  static Polynomial constant(double v) { return {{v}}; }
  static Polynomial monomial(int deg, double coeff);
};

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(int n);
};

}  // namespace tmf
