#include "ainf/ring.hpp"

#include <charconv>

namespace ainf {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

RingSpec RingSpec::prime_field(long p) {
  if (!is_prime(p)) throw AlgebraError("F_p requires a prime p, got " + std::to_string(p));
  return RingSpec(Kind::PrimeField, p);
}

RingSpec RingSpec::parse(std::string_view text) {
  if (text == "z" || text == "Z") return integers();
  if (text == "q" || text == "Q") return rationals();
  if (text.substr(0, 3) == "fp:") {
    long p = 0;
    auto digits = text.substr(3);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw AlgebraError("bad prime in ring spec: " + std::string(text));
    return prime_field(p);
  }
  throw AlgebraError("unknown ring: " + std::string(text) + " (expected z, q or fp:<p>)");
}

Scalar RingSpec::normalize(const Scalar& x) const {
  switch (kind_) {
    case Kind::Rationals:
      return x;
    case Kind::Integers:
      if (x.get_den() != 1) throw AlgebraError("non-integral value " + to_string(x) + " over Z");
      return x;
    case Kind::PrimeField: {
      mpz_class p(p_);
      mpz_class num = x.get_num() % p;
      if (num < 0) num += p;
      mpz_class den = x.get_den() % p;
      if (den == 0) throw AlgebraError("denominator divisible by p in " + to_string(x));
      if (den != 1) {
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        num = (num * inv) % p;
      }
      return Scalar(num);
    }
  }
  return x;
}

bool RingSpec::is_unit(const Scalar& a) const {
  if (a == 0) return false;
  if (kind_ == Kind::Integers) return a == 1 || a == -1;
  return true;
}

Scalar RingSpec::inverse(const Scalar& a) const {
  if (!is_unit(a)) throw AlgebraError("not a unit: " + to_string(a) + " in " + name());
  return normalize(Scalar(1) / a);
}

Scalar RingSpec::div(const Scalar& a, const Scalar& b) const {
  if (b == 0) throw AlgebraError("division by zero");
  if (kind_ == Kind::Integers) {
    Scalar q = a / b;
    if (q.get_den() != 1) throw AlgebraError("inexact division over Z");
    return q;
  }
  return mul(a, inverse(b));
}

std::string RingSpec::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "F_" + std::to_string(p_);
  }
  return "?";
}

std::string RingSpec::flag() const {
  switch (kind_) {
    case Kind::Integers: return "z";
    case Kind::Rationals: return "q";
    case Kind::PrimeField: return "fp:" + std::to_string(p_);
  }
  return "?";
}

std::string to_string(const Scalar& x) { return x.get_str(); }

}  // namespace ainf
