#include "fppu/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace fppu {

ExactValue ExactValue::nar() {
  ExactValue v;
  v.cls_ = Class::NaR;
  return v;
}

ExactValue ExactValue::finite(mpz_class numerator, long exponent2) {
  ExactValue v;
  if (numerator == 0) return v;
  const mp_bitcnt_t tz = mpz_scan1(numerator.get_mpz_t(), 0);
  if (tz > 0) mpz_tdiv_q_2exp(numerator.get_mpz_t(), numerator.get_mpz_t(), tz);
  v.cls_ = Class::Finite;
  v.numerator_ = std::move(numerator);
  v.exponent2_ = exponent2 + static_cast<long>(tz);
  return v;
}

ExactValue ExactValue::from_dyadic(const Dyadic& d) {
  return finite(mpz_class(static_cast<long>(d.significand)), d.exp2);
}

ExactValue ExactValue::from_posit(const PositBits& p) {
  const RealValue r = real_value(p);
  switch (r.cls) {
    case PositClass::Zero: return zero();
    case PositClass::NaR: return nar();
    case PositClass::Normal: break;
  }
  return from_dyadic(r.value);
}

ExactValue ExactValue::from_binary32(std::uint32_t word) {
  const bool sign = word >> 31;
  const std::uint32_t biased = (word >> 23) & 0xFFu;
  const std::uint32_t mant = word & 0x7FFFFFu;
  if (biased == 0xFF) return nar();
  if (biased == 0 && mant == 0) return zero();
  // Subnormals keep their exact value: mant * 2^-149.
  const long sig = biased == 0 ? mant : (mant | 0x800000u);
  const long exp2 = biased == 0 ? -149 : static_cast<long>(biased) - 150;
  return finite(mpz_class(sign ? -sig : sig), exp2);
}

ExactValue ExactValue::operator-() const {
  ExactValue v = *this;
  if (cls_ == Class::Finite) v.numerator_ = -v.numerator_;
  return v;
}

ExactValue operator+(const ExactValue& a, const ExactValue& b) {
  if (a.is_nar() || b.is_nar()) return ExactValue::nar();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const long lo = std::min(a.exponent2_, b.exponent2_);
  mpz_class x = a.numerator_;
  mpz_class y = b.numerator_;
  x <<= static_cast<mp_bitcnt_t>(a.exponent2_ - lo);
  y <<= static_cast<mp_bitcnt_t>(b.exponent2_ - lo);
  return ExactValue::finite(x + y, lo);
}

ExactValue operator*(const ExactValue& a, const ExactValue& b) {
  if (a.is_nar() || b.is_nar()) return ExactValue::nar();
  if (a.is_zero() || b.is_zero()) return ExactValue::zero();
  return ExactValue::finite(a.numerator_ * b.numerator_, a.exponent2_ + b.exponent2_);
}

bool operator==(const ExactValue& a, const ExactValue& b) {
  if (a.cls_ != b.cls_) return false;
  if (a.cls_ != ExactValue::Class::Finite) return true;
  return a.exponent2_ == b.exponent2_ && a.numerator_ == b.numerator_;
}

std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b) {
  if (a.is_nar() || b.is_nar()) throw std::domain_error("NaR is unordered");
  const ExactValue d = a - b;
  if (d.is_zero()) return std::strong_ordering::equal;
  return d.negative() ? std::strong_ordering::less : std::strong_ordering::greater;
}

double ExactValue::to_double() const {
  switch (cls_) {
    case Class::Zero: return 0.0;
    case Class::NaR: return std::nan("");
    case Class::Finite: break;
  }
  long exp;
  const double m = mpz_get_d_2exp(&exp, numerator_.get_mpz_t());
  return std::ldexp(m, static_cast<int>(exp + exponent2_));
}

std::string ExactValue::to_string() const {
  switch (cls_) {
    case Class::Zero: return "0";
    case Class::NaR: return "NaR";
    case Class::Finite: break;
  }
  std::string s = numerator_.get_str();
  if (exponent2_ != 0) s += " * 2^" + std::to_string(exponent2_);
  return s;
}

}  // namespace fppu
