#include "conetorsion/exact_asymptotics.hpp"

#include "conetorsion/special_functions.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ct {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) { return RationalPoly(std::vector<Rational>{c}); }

RationalPoly RationalPoly::monomial(int k, const Rational& c) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int RationalPoly::min_degree() const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) return static_cast<int>(k);
  return -1;
}

Rational RationalPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[k];
}

void RationalPoly::set(int k, const Rational& v) {
  if (k >= static_cast<int>(c_.size())) c_.resize(k + 1);
  c_[k] = v;
  trim();
}

Rational RationalPoly::eval(const Rational& u) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

Rational RationalPoly::at_one() const {
  Rational acc = 0;
  for (const auto& c : c_) acc += c;
  return acc;
}

double RationalPoly::eval(double u) const {
  double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + to_double(*it);
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  std::vector<Rational> d(c_.size() > 0 ? c_.size() - 1 : 0);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long long>(k);
  return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::integral() const {
  std::vector<Rational> d(c_.size() + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<long long>(k + 1);
  return RationalPoly(std::move(d));
}

bool RationalPoly::has_only_parity(int parity) const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0 && static_cast<int>(k % 2) != parity) return false;
  return true;
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::operator-() const {
  RationalPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

std::string RationalPoly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[k].str() << ")";
    if (k == 1) os << "*" << var;
    if (k > 1) os << "*" << var << "^" << k;
  }
  return os.str();
}

namespace {

struct OlverCache {
  std::mutex mu;
  std::vector<RationalPoly> u{RationalPoly::constant(1)};
  std::vector<RationalPoly> v{RationalPoly::constant(1)};
};

OlverCache& olver_cache() {
  static OlverCache cache;
  return cache;
}

}  // namespace

RationalPoly olver_poly(OlverKind kind, int j) {
  if (j < 0) throw std::invalid_argument("olver_poly: j must be >= 0");
  auto& cache = olver_cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  const RationalPoly w = RationalPoly::monomial(1);
  const RationalPoly w2 = RationalPoly::monomial(2);
  const RationalPoly one_minus_w2 = RationalPoly::constant(1) - w2;
  const RationalPoly one_minus_5y2 = RationalPoly::constant(1) - RationalPoly::monomial(2, 5);
  while (static_cast<int>(cache.u.size()) <= j) {
    const RationalPoly& uj = cache.u.back();
    RationalPoly du = uj.derivative();
    RationalPoly next = w2 * one_minus_w2 * du * Rational(1, 2) + (one_minus_5y2 * uj).integral() * Rational(1, 8);
    RationalPoly vnext = next - w * one_minus_w2 * uj * Rational(1, 2) - w2 * one_minus_w2 * du;
    cache.u.push_back(next);
    cache.v.push_back(vnext);
  }
  return kind == OlverKind::u ? cache.u[j] : cache.v[j];
}

RationalPoly w_coeff(int j, const Rational& alpha, int sign) {
  if (j < 1) throw std::invalid_argument("w_coeff: j must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("w_coeff: sign must be +1 or -1");
  return olver_poly(OlverKind::v, j) + RationalPoly::monomial(1, alpha * sign) * olver_poly(OlverKind::u, j - 1);
}

std::vector<RationalPoly> log_compose(const std::vector<RationalPoly>& series) {
  if (series.empty()) throw std::invalid_argument("log_compose: empty series");
  return log_series(series);
}

namespace {

Rational ratpow(const Rational& x, int n) {
  Rational r = 1;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

Rational hat_constant(int j, const Rational& c) {
  Rational r = ratpow(c, j) / j;
  return j % 2 == 1 ? r : Rational(-r);
}

std::vector<RationalPoly> u_series(int j) {
  std::vector<RationalPoly> s;
  for (int k = 1; k <= j; ++k) s.push_back(olver_poly(OlverKind::u, k));
  return s;
}

std::vector<RationalPoly> w_series(int j, const Rational& alpha, int sign) {
  std::vector<RationalPoly> s;
  for (int k = 1; k <= j; ++k) s.push_back(w_coeff(k, alpha, sign));
  return s;
}

}  // namespace

RationalPoly phi(int j) {
  if (j < 1) throw std::invalid_argument("phi: j must be >= 1");
  return log_compose(u_series(j)).back();
}

RationalPoly psi_hat(int j, const Rational& alpha, int sign) {
  if (j < 1) throw std::invalid_argument("psi_hat: j must be >= 1");
  return log_compose(w_series(j, alpha, sign)).back();
}

RationalPoly phi_hat(int j, const Rational& alpha, int sign) {
  return psi_hat(j, alpha, sign) + RationalPoly::constant(hat_constant(j, alpha * sign));
}

const Rational& PhiValue::exact_finite_part() const {
  if (!finite_part) throw std::domain_error("phi_finite_part: residue " + residue.str() + " is nonzero");
  return *finite_part;
}

PhiValue phi_finite_part(const RationalPoly& poly) {
  PhiValue out;
  Rational fp = 0;
  for (int k = 1; k <= poly.degree(); ++k) {
    Rational c = poly.coeff(k);
    if (c == 0) continue;
    out.residue += c;
    fp += c * harmonic_number(k - 1);
  }
  if (out.residue == 0) out.finite_part = fp;
  return out;
}

Composite& Composite::operator+=(const Composite& o) {
  inner += o.inner;
  outer += o.outer;
  constant += o.constant;
  return *this;
}

Composite& Composite::operator-=(const Composite& o) {
  inner -= o.inner;
  outer -= o.outer;
  constant -= o.constant;
  return *this;
}

Composite& Composite::operator*=(const Rational& s) {
  inner *= s;
  outer *= s;
  constant *= s;
  return *this;
}

bool Composite::operator==(const Composite& o) const {
  return inner == o.inner && outer == o.outer && constant == o.constant;
}

Rational Composite::at_lambda_zero() const { return inner.at_one() + outer.at_one() + constant; }

Rational CompositePhi::exact_finite_part() const { return inner.exact_finite_part() + outer.exact_finite_part(); }

CompositePhi composite_finite_part(const Composite& c) {
  RationalPoly in = c.inner, out = c.outer;
  in.set(0, 0);
  out.set(0, 0);
  return {phi_finite_part(in), phi_finite_part(out)};
}

namespace {

int scale_sign(Scale a, Scale b) {
  if (a == b) throw std::invalid_argument("frustum composite: scales must differ");
  return a == Scale::Outer ? 1 : -1;
}

RationalPoly& slot(Composite& c, Scale s) { return s == Scale::Inner ? c.inner : c.outer; }

Rational sign_pow(int s, int j) { return (s < 0 && j % 2 == 1) ? Rational(-1) : Rational(1); }

using Monomial = std::pair<int, int>;

// Polynomial in the two scale variables (first, second).
struct BiPoly {
  std::map<Monomial, Rational> terms;

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [m, c] : o.terms) add(m, -c);
    return *this;
  }
  BiPoly& operator*=(const Rational& s) {
    for (auto& [m, c] : terms) c *= s;
    prune();
    return *this;
  }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) r.add({ma.first + mb.first, ma.second + mb.second}, ca * cb);
    return r;
  }
  void add(const Monomial& m, const Rational& c) {
    auto& v = terms[m];
    v += c;
    if (v == 0) terms.erase(m);
  }
  void prune() {
    for (auto it = terms.begin(); it != terms.end();) it = it->second == 0 ? terms.erase(it) : std::next(it);
  }
  static BiPoly from_first(const RationalPoly& p) {
    BiPoly r;
    for (int k = 0; k <= p.degree(); ++k) r.add({k, 0}, p.coeff(k));
    return r;
  }
  static BiPoly from_second(const RationalPoly& p) {
    BiPoly r;
    for (int k = 0; k <= p.degree(); ++k) r.add({0, k}, p.coeff(k));
    return r;
  }
};

}  // namespace

Composite phi_hat_frustum(int j, const Rational& alpha, int sign, Scale first, Scale second) {
  int s = scale_sign(first, second);
  Composite out;
  slot(out, first) = phi(j) * sign_pow(s, j);
  slot(out, second) = psi_hat(j, alpha, sign) * sign_pow(-s, j);
  out.constant = hat_constant(j, alpha * sign) * sign_pow(-s, j);
  return out;
}

Composite phi_hat_frustum_direct(int j, const Rational& alpha, int sign, Scale first, Scale second) {
  int s = scale_sign(first, second);
  std::vector<BiPoly> a(j + 1), b(j + 1), prod;
  a[0] = BiPoly::from_first(RationalPoly::constant(1));
  b[0] = BiPoly::from_second(RationalPoly::constant(1));
  for (int k = 1; k <= j; ++k) {
    Rational odd = (k % 2 == 1) ? Rational(-1) : Rational(1);
    a[k] = BiPoly::from_first(olver_poly(OlverKind::u, k) * (s < 0 ? odd : Rational(1)));
    b[k] = BiPoly::from_second(w_coeff(k, alpha, sign) * (s > 0 ? odd : Rational(1)));
  }
  for (int k = 1; k <= j; ++k) {
    BiPoly p;
    for (int h = 0; h <= k; ++h) p += a[h] * b[k - h];
    prod.push_back(p);
  }
  BiPoly l = log_series(prod).back();
  Composite out;
  RationalPoly pf, ps;
  for (const auto& [m, c] : l.terms) {
    if (m.first > 0 && m.second > 0) throw std::logic_error("phi_hat_frustum_direct: mixed monomial survived");
    if (m.first > 0) pf.set(m.first, pf.coeff(m.first) + c);
    else if (m.second > 0) ps.set(m.second, ps.coeff(m.second) + c);
    else out.constant += c;
  }
  slot(out, first) = pf;
  slot(out, second) = ps;
  out.constant += hat_constant(j, alpha * sign * s * -1);
  return out;
}

Composite phi_frustum_abs(int j) {
  Composite out;
  out.outer = phi(j);
  out.inner = phi(j) * sign_pow(-1, j);
  return out;
}

Composite phi_hat_frustum_abs(int j, const Rational& alpha, int sign) {
  Composite out;
  RationalPoly p = psi_hat(j, alpha, sign);
  Rational c = hat_constant(j, alpha * sign);
  out.outer = p;
  out.inner = p * sign_pow(-1, j);
  out.constant = c + c * sign_pow(-1, j);
  return out;
}

}  // namespace ct
