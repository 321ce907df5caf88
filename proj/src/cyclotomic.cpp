#include "qpskew/cyclotomic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace qpskew {

namespace {

long g_max_conductor = 1024;

using Poly = std::vector<Rational>;  // little-endian

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

// exact division with remainder; divisor must be nonzero
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  trim(a);
  Poly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  while (a.size() >= b.size()) {
    Rational c = a.back() / lead;
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    trim(a);
    if (a.empty()) break;
    if (a.size() >= b.size() && a.back() == 0) trim(a);
  }
  trim(q);
  return {q, a};
}

Poly poly_mod(const Poly& a, const Poly& m) { return poly_divmod(a, m).second; }

}  // namespace

long euler_phi(long n) {
  long result = n;
  long m = n;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

const std::vector<Rational>& cyclotomic_polynomial(long L) {
  static std::map<long, Poly> cache;
  auto it = cache.find(L);
  if (it != cache.end()) return it->second;

  // Phi_L = (x^L - 1) / prod_{d | L, d < L} Phi_d
  Poly num(L + 1, Rational(0));
  num[0] = -1;
  num[L] = 1;
  for (long d = 1; d < L; ++d) {
    if (L % d != 0) continue;
    auto [q, r] = poly_divmod(num, cyclotomic_polynomial(d));
    if (!r.empty()) throw Error(Errc::ParseError, "cyclotomic recursion: nonzero remainder");
    num = q;
  }
  return cache.emplace(L, std::move(num)).first->second;
}

void Scalar::set_max_conductor(long m) { g_max_conductor = m; }
long Scalar::max_conductor() { return g_max_conductor; }

void Scalar::reduce_(Poly poly) {
  const Poly& m = cyclotomic_polynomial(conductor_);
  Poly r = poly_mod(poly, m);
  coeffs_.assign(euler_phi(conductor_), Rational(0));
  for (size_t i = 0; i < r.size(); ++i) coeffs_[i] = r[i];
}

Scalar::Scalar(const Rational& r, long conductor) : conductor_(conductor) {
  if (conductor < 1) throw Error(Errc::ParseError, "conductor must be >= 1");
  coeffs_.assign(euler_phi(conductor), Rational(0));
  coeffs_[0] = r;
  coeffs_[0].canonicalize();  // gmp comparisons assume canonical form
}

Scalar::Scalar(long num, long den, long conductor) : Scalar(Rational(num, den), conductor) {
  if (den == 0) throw Error(Errc::DivisionByZero, "rational with zero denominator");
  coeffs_[0].canonicalize();
}

Scalar Scalar::root_of_unity(long L, long k) {
  if (L < 1) throw Error(Errc::ParseError, "root_of_unity: L must be >= 1");
  long e = ((k % L) + L) % L;
  Scalar s(Rational(0), L);
  Poly p(e + 1, Rational(0));
  p[e] = 1;
  s.reduce_(std::move(p));
  return s;
}

bool Scalar::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool Scalar::is_one() const {
  if (coeffs_[0] != 1) return false;
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

bool Scalar::is_rational() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
}

Rational Scalar::rational_value() const { return coeffs_[0]; }

Scalar Scalar::promoted(long M) const {
  if (M == conductor_) return *this;
  if (M % conductor_ != 0)
    throw Error(Errc::ConductorTooSmall, "cannot embed Q(zeta_" + std::to_string(conductor_) +
                                             ") into Q(zeta_" + std::to_string(M) + ")");
  if (M > g_max_conductor)
    throw Error(Errc::ConductorTooLarge, "conductor " + std::to_string(M) + " exceeds bound " +
                                             std::to_string(g_max_conductor));
  long step = M / conductor_;
  Scalar s(Rational(0), M);
  Poly p;
  p.assign(static_cast<size_t>(step) * (coeffs_.size() - 1) + 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) p[i * step] = coeffs_[i];
  s.reduce_(std::move(p));
  return s;
}

namespace {
long common_conductor(const Scalar& a, const Scalar& b) {
  return lcm_long(a.conductor(), b.conductor());
}
}  // namespace

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  long L = common_conductor(a, b);
  Scalar x = a.promoted(L), y = b.promoted(L);
  for (size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
  return x;
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  long L = common_conductor(a, b);
  // rational factors scale coefficientwise; no polynomial reduction needed
  if (a.is_rational()) {
    if (a.coeffs_[0] == 0) return Scalar::zero(L);
    Scalar y = b.promoted(L);
    if (a.coeffs_[0] == 1) return y;
    for (auto& c : y.coeffs_) c *= a.coeffs_[0];
    return y;
  }
  if (b.is_rational()) return b * a;
  Scalar x = a.promoted(L), y = b.promoted(L);
  Scalar r(Rational(0), L);
  r.reduce_(poly_mul(x.coeffs_, y.coeffs_));
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  if (is_rational()) return Scalar(Rational(1) / coeffs_[0], conductor_);
  // extended Euclid in Q[x]: u*f + v*Phi_L = gcd = const (Phi_L irreducible)
  Poly r0 = cyclotomic_polynomial(conductor_);
  Poly r1 = coeffs_;
  trim(r1);
  Poly s0 = {}, s1 = {Rational(1)};  // coefficients of f
  while (!r1.empty()) {
    auto [q, rem] = poly_divmod(r0, r1);
    Poly qs = poly_mul(q, s1);
    Poly s2 = s0;
    s2.resize(std::max(s2.size(), qs.size()), Rational(0));
    for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    trim(s2);
    r0 = std::move(r1);
    s0 = std::move(s1);
    r1 = std::move(rem);
    s1 = std::move(s2);
  }
  // r0 = gcd (nonzero constant since Phi_L is irreducible and f != 0 mod Phi_L)
  if (r0.size() != 1)
    throw Error(Errc::DivisionByZero, "element not invertible (unexpected: Phi_L reducible?)");
  Rational g = r0[0];
  for (auto& c : s0) c /= g;
  Scalar out(Rational(0), conductor_);
  out.reduce_(std::move(s0));
  return out;
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  long L = common_conductor(a, b);
  return a.promoted(L) * b.promoted(L).inverse();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
  long L = common_conductor(a, b);
  return a.promoted(L).coeffs_ == b.promoted(L).coeffs_;
}

Scalar Scalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar r = Scalar::one(conductor_);
  Scalar base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string Scalar::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational abs = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (i == 0) {
      os << abs.get_str();
    } else {
      if (abs != 1) os << abs.get_str() << "*";
      os << "z";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) return "0";
  return os.str();
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  long conductor;

  explicit Parser(const std::string& text, long L) : s(text), conductor(L) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw Error(Errc::ParseError, "scalar parse error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  long parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) fail("expected integer");
    return std::stol(s.substr(start, pos - start));
  }

  Rational parse_rational() {
    long num = parse_int();
    if (consume('/')) {
      long den = parse_int();
      if (den <= 0) fail("denominator must be positive");
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    return Rational(num);
  }

  Scalar parse_power_of_z(bool negate) {
    // 'z' already consumed
    long e = 1;
    if (consume('^')) e = parse_int();
    Scalar z = Scalar::root_of_unity(conductor, e);
    return negate ? -z : z;
  }

  Scalar parse_term() {
    skip_ws();
    if (pos >= s.size()) fail("expected term");
    if (consume('z')) return parse_power_of_z(false);
    if (s[pos] == '-' && pos + 1 < s.size() && s[pos + 1] == 'z') {
      pos += 2;
      return parse_power_of_z(true);
    }
    Rational c = parse_rational();
    if (consume('*')) {
      if (!consume('z')) fail("expected z after *");
      long e = 1;
      if (consume('^')) e = parse_int();
      return Scalar(c, conductor) * Scalar::root_of_unity(conductor, e);
    }
    return Scalar(c, conductor);
  }

  Scalar parse_expr() {
    Scalar acc = parse_term();
    for (;;) {
      skip_ws();
      if (pos >= s.size()) break;
      if (consume('+')) {
        acc += parse_term();
      } else if (consume('-')) {
        acc -= parse_term();
      } else {
        fail("unexpected character '" + std::string(1, s[pos]) + "'");
      }
    }
    return acc;
  }
};

}  // namespace

Scalar Scalar::parse(const std::string& text, long conductor) {
  Parser p(text, conductor);
  return p.parse_expr();
}

}  // namespace qpskew
