#pragma once

#include "conetorsion/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ct {

class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);

  static RationalPoly constant(const Rational& c);
  static RationalPoly monomial(int k, const Rational& c = Rational(1));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  int min_degree() const;
  bool is_zero() const { return c_.empty(); }
  Rational coeff(int k) const;
  void set(int k, const Rational& v);
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational eval(const Rational& u) const;
  Rational at_one() const;
  double eval(double u) const;

  RationalPoly derivative() const;
  RationalPoly integral() const;
  bool has_only_parity(int parity) const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  RationalPoly& operator*=(const Rational& s);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
  friend RationalPoly operator*(const Rational& s, RationalPoly a) { return a *= s; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  RationalPoly operator-() const;
  bool operator==(const RationalPoly& o) const { return c_ == o.c_; }

  std::string str(const std::string& var = "u") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Coefficients of log(1 + sum_k a_k x^k) for k = 1..J, any commutative ring over the rationals.
template <class R>
std::vector<R> log_series(const std::vector<R>& a) {
  std::vector<R> l(a.size());
  for (std::size_t j = 1; j <= a.size(); ++j) {
    R acc = a[j - 1];
    for (std::size_t k = 1; k < j; ++k) {
      R t = l[k - 1] * a[j - k - 1];
      t *= Rational(static_cast<long long>(k), static_cast<long long>(j));
      acc -= t;
    }
    l[j - 1] = acc;
  }
  return l;
}

enum class OlverKind { u, v };

RationalPoly olver_poly(OlverKind kind, int j);
RationalPoly w_coeff(int j, const Rational& alpha, int sign);
std::vector<RationalPoly> log_compose(const std::vector<RationalPoly>& series);

RationalPoly phi(int j);
RationalPoly psi_hat(int j, const Rational& alpha, int sign);
RationalPoly phi_hat(int j, const Rational& alpha, int sign);

struct PhiValue {
  Rational residue;
  std::optional<Rational> finite_part;

  bool regular() const { return finite_part.has_value(); }
  const Rational& exact_finite_part() const;
};

PhiValue phi_finite_part(const RationalPoly& poly);

// Two formal radii of a frustum; Inner < Outer.
enum class Scale { Inner, Outer };

struct Composite {
  RationalPoly inner;
  RationalPoly outer;
  Rational constant;

  Composite& operator+=(const Composite& o);
  Composite& operator-=(const Composite& o);
  Composite& operator*=(const Rational& s);
  friend Composite operator+(Composite a, const Composite& b) { return a += b; }
  friend Composite operator-(Composite a, const Composite& b) { return a -= b; }
  bool operator==(const Composite& o) const;

  Rational at_lambda_zero() const;
};

struct CompositePhi {
  PhiValue inner;
  PhiValue outer;

  bool regular() const { return inner.regular() && outer.regular(); }
  Rational exact_finite_part() const;
};

CompositePhi composite_finite_part(const Composite& c);

Composite phi_hat_frustum(int j, const Rational& alpha, int sign, Scale first, Scale second);
Composite phi_hat_frustum_direct(int j, const Rational& alpha, int sign, Scale first, Scale second);
Composite phi_frustum_abs(int j);
Composite phi_hat_frustum_abs(int j, const Rational& alpha, int sign);

}  // namespace ct
