#include "thermoflow/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tmf {

double Polynomial::eval(double s) const {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * s + c[i];
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * static_cast<double>(i));
  return d;
}

Polynomial Polynomial::antiderivative() const {
  Polynomial a;
  a.c.assign(c.size() + 1, 0.0);
  for (size_t i = 0; i < c.size(); ++i) a.c[i + 1] = c[i] / static_cast<double>(i + 1);
  return a;
}

double Polynomial::integral(double a, double b) const {
  Polynomial F = antiderivative();
  return F.eval(b) - F.eval(a);
}

Polynomial Polynomial::shifted(double h) const {
  // p(s + h) by repeated synthetic division (Taylor shift).
  Polynomial out = *this;
  int n = static_cast<int>(out.c.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) out.c[j] += h * out.c[j + 1];
  return out;
}

Polynomial Polynomial::plus(const Polynomial& q) const {
  Polynomial out = *this;
  if (q.c.size() > out.c.size()) out.c.resize(q.c.size(), 0.0);
  for (size_t i = 0; i < q.c.size(); ++i) out.c[i] += q.c[i];
  return out;
}

Polynomial Polynomial::scaled(double a) const {
  Polynomial out = *this;
  for (double& v : out.c) v *= a;
  return out;
}

void Polynomial::trim() {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

Polynomial Polynomial::monomial(int deg, double coeff) {
  Polynomial p;
  p.c.assign(deg + 1, 0.0);
  p.c[deg] = coeff;
  return p;
}

namespace {

double bisect_root(const Polynomial& p, double a, double b) {
  double fa = p.eval(a), fb = p.eval(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    double fm = p.eval(m);
    if (fm == 0.0 || (b - a) < 1e-15 * (1.0 + std::abs(m))) return m;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> Polynomial::roots_in(double a, double b) const {
  Polynomial p = *this;
  p.trim();
  std::vector<double> roots;
  if (p.degree() <= 0) return roots;
  if (p.degree() == 1) {
    double r = -p.c[0] / p.c[1];
    if (r >= a && r <= b) roots.push_back(r);
    return roots;
  }
  // Critical points split [a, b] into monotone pieces.
  std::vector<double> knots = p.derivative().roots_in(a, b);
  knots.insert(knots.begin(), a);
  knots.push_back(b);
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = knots[i], hi = knots[i + 1];
    if (hi <= lo) continue;
    double flo = p.eval(lo), fhi = p.eval(hi);
    if (flo == 0.0) {
      if (roots.empty() || std::abs(roots.back() - lo) > 1e-14) roots.push_back(lo);
    }
    if ((flo < 0.0) != (fhi < 0.0)) {
      double r = bisect_root(p, lo, hi);
      if (roots.empty() || std::abs(roots.back() - r) > 1e-14) roots.push_back(r);
    } else if (fhi == 0.0 && i + 2 == knots.size()) {
      roots.push_back(hi);
    }
  }
  return roots;
}

double Polynomial::min_on(double a, double b) const {
  double m = std::min(eval(a), eval(b));
  for (double r : derivative().roots_in(a, b)) m = std::min(m, eval(r));
  return m;
}

double Polynomial::max_on(double a, double b) const {
  double m = std::max(eval(a), eval(b));
  for (double r : derivative().roots_in(a, b)) m = std::max(m, eval(r));
  return m;
}

GaussLegendre::GaussLegendre(int n) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace tmf
