#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "fppu/posit.hpp"

namespace fppu {

/// Exact scaled-integer real: numerator * 2^exponent2, or one of the two
/// specials. Finite values are canonical (odd numerator), so equal values
/// compare equal field by field.
class ExactValue {
public:
  enum class Class { Zero, NaR, Finite };

  ExactValue() = default;

  static ExactValue zero() { return {}; }
  static ExactValue nar();
  static ExactValue finite(mpz_class numerator, long exponent2);
  static ExactValue from_posit(const PositBits& p);
  static ExactValue from_dyadic(const Dyadic& d);
  /// NaN and infinities have no exact value and map to NaR.
  static ExactValue from_binary32(std::uint32_t word);

  Class cls() const { return cls_; }
  bool is_zero() const { return cls_ == Class::Zero; }
  bool is_nar() const { return cls_ == Class::NaR; }
  bool negative() const { return cls_ == Class::Finite && sgn(numerator_) < 0; }
  const mpz_class& numerator() const { return numerator_; }
  long exponent2() const { return exponent2_; }

  ExactValue operator-() const;
  friend ExactValue operator+(const ExactValue& a, const ExactValue& b);
  friend ExactValue operator-(const ExactValue& a, const ExactValue& b) { return a + (-b); }
  friend ExactValue operator*(const ExactValue& a, const ExactValue& b);

  friend bool operator==(const ExactValue& a, const ExactValue& b);
  /// Order of two non-NaR values. Throws std::domain_error on NaR.
  friend std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b);

  double to_double() const;
  std::string to_string() const;

private:
  Class cls_ = Class::Zero;
  mpz_class numerator_;
  long exponent2_ = 0;
};

}  // namespace fppu
