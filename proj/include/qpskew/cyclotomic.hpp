#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "qpskew/errors.hpp"

namespace qpskew {

using Rational = mpq_class;

// Element of the cyclotomic field Q(zeta_L), stored as a polynomial in
// zeta_L of degree < phi(L), reduced modulo the L-th cyclotomic polynomial.
// Equality of reduced coefficient vectors is equality in the field.
class Scalar {
 public:
  Scalar() : conductor_(1), coeffs_(1, Rational(0)) {}
  explicit Scalar(const Rational& r, long conductor = 1);
  Scalar(long num, long den, long conductor = 1);

  static Scalar zero(long conductor) { return Scalar(Rational(0), conductor); }
  static Scalar one(long conductor) { return Scalar(Rational(1), conductor); }
  // zeta_L^k, any integer k
  static Scalar root_of_unity(long L, long k);

  long conductor() const { return conductor_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  // valid only if is_rational()
  Rational rational_value() const;

  Scalar promoted(long new_conductor) const;

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inverse() const;
  Scalar pow(long e) const;

  std::string str() const;
  // Grammar: expr := term (('+'|'-') term)*
  //          term := rational ('*' 'z' ('^' int)?)? | ['-'] 'z' ('^' int)?
  //          rational := int ('/' posint)?
  // with z = zeta_L.
  static Scalar parse(const std::string& text, long conductor);

  // promotion beyond this bound raises ConductorTooLarge
  static void set_max_conductor(long m);
  static long max_conductor();

 private:
  long conductor_;
  std::vector<Rational> coeffs_;  // size phi(conductor_)

  void reduce_(std::vector<Rational> poly);
};

long euler_phi(long n);
long lcm_long(long a, long b);

// L-th cyclotomic polynomial, monic, little-endian coefficients (exact).
const std::vector<Rational>& cyclotomic_polynomial(long L);

}  // namespace qpskew
