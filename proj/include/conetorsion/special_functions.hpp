#pragma once

#include "conetorsion/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ct {

enum class BesselKind { J, Y, I, K };

double bessel_eval(BesselKind kind, double nu, double x);
double bessel_eval_prime(BesselKind kind, double nu, double x);

struct ZeroError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegerOrderError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class ZeroKind { J, Jhat, Y, FrustumMixed, FrustumUpsilon, FrustumUpsilonHat, FrustumF };

std::string to_string(ZeroKind kind);

// Frustum kinds evaluate at radii (l1, l2); FrustumMixed with reversed set evaluates F(x; l2, l1).
struct ZeroFamily {
  ZeroKind kind = ZeroKind::J;
  double order = 0.0;
  double c = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  bool reversed = false;

  static ZeroFamily j(double nu) { return {ZeroKind::J, nu}; }
  static ZeroFamily jhat(double nu, double c) { return {ZeroKind::Jhat, nu, c}; }
  static ZeroFamily y(double nu) { return {ZeroKind::Y, nu}; }
  static ZeroFamily mixed(double mu, double c, double l1, double l2, bool reversed = false) {
    return {ZeroKind::FrustumMixed, mu, c, l1, l2, reversed};
  }
  static ZeroFamily upsilon(double mu, double l1, double l2) { return {ZeroKind::FrustumUpsilon, mu, 0.0, l1, l2}; }
  static ZeroFamily upsilon_hat(double mu, double c, double l1, double l2) {
    return {ZeroKind::FrustumUpsilonHat, mu, c, l1, l2};
  }
  static ZeroFamily frustum_f(double nu, double l1, double l2) { return {ZeroKind::FrustumF, nu, 0.0, l1, l2}; }

  bool is_frustum() const;
  void validate() const;
};

long double family_value(const ZeroFamily& f, double x);
int family_sign_at_zero(const ZeroFamily& f);

std::vector<double> family_zeros_below(const ZeroFamily& f, double xmax);
std::vector<double> family_zeros(const ZeroFamily& f, int count);
double bessel_zero(const ZeroFamily& f, int k);

bool is_integer_order(double mu, double tol = 1e-12);

Rational harmonic_number(int k);

// z(s, nu, q, l) = sum_k (j_{nu,k}^2 / l^2 + q^2)^{-s} at s = 0.
struct BesselZetaAtZero {
  double value;
  double derivative;
};

BesselZetaAtZero bessel_zeta_closed(double nu, double q, double l);
BesselZetaAtZero bessel_zeta_from_zeros(double nu, double q, double l, int kmax = 2000);

}  // namespace ct
