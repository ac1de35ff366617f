#include "conetorsion/special_functions.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ct {

namespace {

template <class T>
T eval_kind(BesselKind kind, T nu, T x) {
  switch (kind) {
    case BesselKind::J: return boost::math::cyl_bessel_j(nu, x);
    case BesselKind::Y: return boost::math::cyl_neumann(nu, x);
    case BesselKind::I: return boost::math::cyl_bessel_i(nu, x);
    case BesselKind::K: return boost::math::cyl_bessel_k(nu, x);
  }
  return T(0);
}

template <class T>
T eval_kind_prime(BesselKind kind, T nu, T x) {
  switch (kind) {
    case BesselKind::J: return boost::math::cyl_bessel_j_prime(nu, x);
    case BesselKind::Y: return boost::math::cyl_neumann_prime(nu, x);
    case BesselKind::I: return boost::math::cyl_bessel_i_prime(nu, x);
    case BesselKind::K: return boost::math::cyl_bessel_k_prime(nu, x);
  }
  return T(0);
}

void check_argument(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_eval: argument must be positive");
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw std::overflow_error(std::string(what) + ": result not representable");
  return v;
}

// hat form c Z(z) + z Z'(z)
template <class T>
T hat(BesselKind kind, T nu, T c, T z) {
  return c * eval_kind(kind, nu, z) + z * eval_kind_prime(kind, nu, z);
}

template <class T>
T family_value_t(const ZeroFamily& f, T x) {
  const T nu = static_cast<T>(f.order);
  const T c = static_cast<T>(f.c);
  switch (f.kind) {
    case ZeroKind::J: return eval_kind(BesselKind::J, nu, x);
    case ZeroKind::Jhat: return hat(BesselKind::J, nu, c, x);
    case ZeroKind::Y: return eval_kind(BesselKind::Y, nu, x);
    case ZeroKind::FrustumMixed: {
      T a = static_cast<T>(f.reversed ? f.l2 : f.l1);
      T b = static_cast<T>(f.reversed ? f.l1 : f.l2);
      return eval_kind(BesselKind::J, nu, a * x) * hat(BesselKind::Y, nu, c, b * x) -
             eval_kind(BesselKind::Y, nu, a * x) * hat(BesselKind::J, nu, c, b * x);
    }
    case ZeroKind::FrustumUpsilon: {
      T a = static_cast<T>(f.l1), b = static_cast<T>(f.l2);
      return eval_kind(BesselKind::J, nu, b * x) * eval_kind(BesselKind::Y, nu, a * x) -
             eval_kind(BesselKind::J, nu, a * x) * eval_kind(BesselKind::Y, nu, b * x);
    }
    case ZeroKind::FrustumUpsilonHat: {
      T a = static_cast<T>(f.l1), b = static_cast<T>(f.l2);
      return hat(BesselKind::J, nu, c, b * x) * hat(BesselKind::Y, nu, c, a * x) -
             hat(BesselKind::Y, nu, c, b * x) * hat(BesselKind::J, nu, c, a * x);
    }
    case ZeroKind::FrustumF: {
      T a = static_cast<T>(f.l1), b = static_cast<T>(f.l2);
      return eval_kind(BesselKind::J, nu, a * x) * eval_kind(BesselKind::Y, nu - 1, b * x) -
             eval_kind(BesselKind::Y, nu, a * x) * eval_kind(BesselKind::J, nu - 1, b * x);
    }
  }
  return T(0);
}

int sgn(long double v) { return (v > 0) - (v < 0); }

double lower_bound_first_zero(const ZeroFamily& f) {
  const double nu = f.order;
  switch (f.kind) {
    case ZeroKind::J:
      return nu > 0 ? std::max(nu, 1.0) * 0.5 : 0.25;
    case ZeroKind::Jhat: {
      double s = f.c + nu;
      double base = std::max(nu, 1.0);
      if (s > 0) base = std::min(base, std::sqrt(2.0 * (std::abs(nu) + 1.0) * s));
      return 0.25 * base;
    }
    case ZeroKind::Y:
      return 0.25 * std::max(nu, 1.0);
    default: {
      double far = std::max(f.l1, f.l2);
      return std::max(0.5 * nu / far, 1e-3 / far);
    }
  }
}

double scan_step(const ZeroFamily& f, double x, double last_gap) {
  if (!f.is_frustum()) {
    double h = std::numbers::pi / 16.0;
    if (last_gap > 0) h = std::min(h, last_gap / 8.0);
    return h;
  }
  const double width = std::abs(f.l2 - f.l1);
  const double base = std::numbers::pi / width;
  double h = std::min(base, base * base / (2.0 * (x + base))) / 8.0;
  if (last_gap > 0) h = std::max(h, std::min(base, last_gap) / 6.0);
  return h;
}

struct Bracket {
  double a, b;
  long double fa, fb;
};

double polish(const ZeroFamily& f, const Bracket& br) {
  auto fn = [&](long double x) { return family_value(f, static_cast<double>(x)); };
  boost::math::tools::eps_tolerance<long double> tol(52);
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(fn, static_cast<long double>(br.a), static_cast<long double>(br.b),
                                             br.fa, br.fb, tol, iters);
  return static_cast<double>((r.first + r.second) / 2);
}

// Scans from the predicted zero-free start; stops after `count` zeros or beyond xmax.
std::vector<double> scan(const ZeroFamily& f, double xmax, int count) {
  f.validate();
  std::vector<double> out;
  double x = lower_bound_first_zero(f);
  const int expected = family_sign_at_zero(f);
  long double fx = family_value(f, x);
  int halvings = 0;
  while (expected != 0 && sgn(fx) != expected) {
    if (++halvings > 80) {
      std::ostringstream os;
      os << "bessel_zero: cannot confirm zero-free start for " << to_string(f.kind) << " order " << f.order;
      throw ZeroError(os.str());
    }
    x *= 0.5;
    fx = family_value(f, x);
  }
  if (fx == 0) throw ZeroError("bessel_zero: family value vanishes at scan start");
  double last_gap = -1.0;
  std::size_t steps = 0;
  while ((count < 0 || static_cast<int>(out.size()) < count) && (xmax < 0 || x < xmax)) {
    double h = scan_step(f, x, last_gap);
    double xn = x + h;
    long double fn = family_value(f, xn);
    if (fn == 0) {
      out.push_back(xn);
      xn += h * 1e-3;
      fn = family_value(f, xn);
    } else if (sgn(fn) != sgn(fx)) {
      out.push_back(polish(f, {x, xn, fx, fn}));
    } else {
      x = xn;
      fx = fn;
      if (++steps > 50000000) throw ZeroError("bessel_zero: scan did not terminate");
      continue;
    }
    if (out.size() >= 2) last_gap = out[out.size() - 1] - out[out.size() - 2];
    x = xn;
    fx = fn;
  }
  if (xmax >= 0)
    while (!out.empty() && out.back() >= xmax) out.pop_back();
  return out;
}

}  // namespace

double bessel_eval(BesselKind kind, double nu, double x) {
  check_argument(x);
  return checked(eval_kind(kind, nu, x), "bessel_eval");
}

double bessel_eval_prime(BesselKind kind, double nu, double x) {
  check_argument(x);
  return checked(eval_kind_prime(kind, nu, x), "bessel_eval_prime");
}

std::string to_string(ZeroKind kind) {
  switch (kind) {
    case ZeroKind::J: return "J";
    case ZeroKind::Jhat: return "Jhat";
    case ZeroKind::Y: return "Y";
    case ZeroKind::FrustumMixed: return "FrustumMixed";
    case ZeroKind::FrustumUpsilon: return "FrustumUpsilon";
    case ZeroKind::FrustumUpsilonHat: return "FrustumUpsilonHat";
    case ZeroKind::FrustumF: return "FrustumF";
  }
  return "?";
}

bool ZeroFamily::is_frustum() const {
  return kind == ZeroKind::FrustumMixed || kind == ZeroKind::FrustumUpsilon || kind == ZeroKind::FrustumUpsilonHat ||
         kind == ZeroKind::FrustumF;
}

bool is_integer_order(double mu, double tol) { return std::abs(mu - std::round(mu)) <= tol * std::max(1.0, std::abs(mu)); }

void ZeroFamily::validate() const {
  if (!std::isfinite(order) || !std::isfinite(c)) throw std::invalid_argument("ZeroFamily: non-finite parameter");
  if (is_frustum()) {
    if (!(l1 > 0.0) || !(l2 > l1)) throw std::invalid_argument("ZeroFamily: frustum radii must satisfy 0 < l1 < l2");
    if (order < 0.0) throw std::invalid_argument("ZeroFamily: frustum order must be nonnegative");
  } else if (order < 0.0 && is_integer_order(order)) {
    std::ostringstream os;
    os << "ZeroFamily: negative integer order " << order << " needs the logarithmic second solution";
    throw IntegerOrderError(os.str());
  }
}

long double family_value(const ZeroFamily& f, double x) {
  if (!(x > 0.0)) throw std::domain_error("family_value: argument must be positive");
  try {
    double v = family_value_t<double>(f, x);
    if (std::isfinite(v) && v != 0.0) return v;
  } catch (const std::overflow_error&) {
  }
  long double v = family_value_t<long double>(f, static_cast<long double>(x));
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "family_value: overflow for " << to_string(f.kind) << " order " << f.order << " at x=" << x;
    throw std::overflow_error(os.str());
  }
  return v;
}

int family_sign_at_zero(const ZeroFamily& f) {
  const double nu = f.order;
  switch (f.kind) {
    case ZeroKind::J:
      return nu > -1.0 ? 1 : sgn(1.0L / boost::math::tgamma(nu + 1.0));
    case ZeroKind::Jhat: {
      double s = f.c + nu;
      long double g = nu > -1.0 ? 1.0L : 1.0L / boost::math::tgamma(nu + 1.0);
      if (std::abs(s) > 1e-14 * std::max(1.0, std::abs(nu))) return sgn(s * g);
      long double g2 = nu > -2.0 ? 1.0L : 1.0L / boost::math::tgamma(nu + 2.0);
      return -sgn(g2);
    }
    case ZeroKind::Y: return 0;
    case ZeroKind::FrustumMixed: return 1;
    case ZeroKind::FrustumUpsilon: return -1;
    case ZeroKind::FrustumUpsilonHat:
      return std::abs(nu - std::abs(f.c)) <= 1e-14 * std::max(1.0, nu) ? -1 : (nu > std::abs(f.c) ? 1 : 0);
    case ZeroKind::FrustumF: return 1;
  }
  return 0;
}

std::vector<double> family_zeros_below(const ZeroFamily& f, double xmax) { return scan(f, xmax, -1); }

std::vector<double> family_zeros(const ZeroFamily& f, int count) {
  if (count < 0) throw std::invalid_argument("family_zeros: negative count");
  if (count == 0) return {};
  return scan(f, -1.0, count);
}

double bessel_zero(const ZeroFamily& f, int k) {
  if (k < 1) throw std::invalid_argument("bessel_zero: k must be >= 1");
  auto z = family_zeros(f, k);
  if (static_cast<int>(z.size()) < k) throw ZeroError("bessel_zero: bracketing failed");
  return z[k - 1];
}

Rational harmonic_number(int k) {
  if (k < 0) throw std::invalid_argument("harmonic_number: k must be >= 0");
  Rational h = 0;
  for (int i = 1; i <= k; ++i) h += Rational(1, i);
  return h;
}

BesselZetaAtZero bessel_zeta_closed(double nu, double q, double l) {
  if (!(l > 0.0) || q < 0.0 || nu < 0.0) throw std::domain_error("bessel_zeta_closed: needs l > 0, q >= 0, nu >= 0");
  BesselZetaAtZero out{-0.5 * (nu + 0.5), 0.0};
  if (q == 0.0) {
    out.derivative = -(0.5 * std::log(std::numbers::pi) + (nu + 0.5) * std::log(l) - (nu - 0.5) * std::log(2.0) -
                       boost::math::lgamma(nu + 1.0));
  } else {
    out.derivative = -(0.5 * std::log(2.0 * std::numbers::pi * l) + std::log(boost::math::cyl_bessel_i(nu, l * q)) -
                       nu * std::log(q));
  }
  return out;
}

BesselZetaAtZero bessel_zeta_from_zeros(double nu, double q, double l, int kmax) {
  if (!(l > 0.0) || q < 0.0 || nu < 0.0) throw std::domain_error("bessel_zeta_from_zeros: needs l > 0, q >= 0, nu >= 0");
  if (kmax < 50) throw std::invalid_argument("bessel_zeta_from_zeros: kmax too small");
  const double pi = std::numbers::pi;
  const double b = 0.5 * nu - 0.25;
  const double a = 1.0 + b;
  const double mu = 4.0 * nu * nu;
  auto zeros = family_zeros(ZeroFamily::j(nu), kmax);
  // sum_k (pi (k + b))^{-2s} continued by Hurwitz zeta; the remainder is absolutely convergent near s = 0.
  double hz0 = 0.5 - a;
  double hz1 = boost::math::lgamma(a) - 0.5 * std::log(2.0 * pi);
  double rem = 0.0, shift = 0.0, ql = q * l;
  for (int k = 1; k <= kmax; ++k) {
    double j = zeros[k - 1];
    rem += std::log(j / (pi * (k + b)));
    if (ql > 0.0) shift += std::log1p(ql * ql / (j * j));
  }
  double c2 = -(mu - 1.0) / 8.0;
  double c4 = -4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * 512.0) - 0.5 * c2 * c2;
  double x = kmax + 1 + b;
  rem += c2 / (pi * pi) * boost::math::trigamma(x) + c4 / std::pow(pi, 4) * boost::math::polygamma(3, x) / 6.0;
  if (ql > 0.0) shift += ql * ql / (pi * pi) * boost::math::trigamma(x);
  BesselZetaAtZero out;
  out.value = hz0;
  out.derivative = 2.0 * hz1 - 2.0 * std::log(pi) * hz0 - 2.0 * rem + 2.0 * std::log(l) * hz0 - shift;
  return out;
}

}  // namespace ct
