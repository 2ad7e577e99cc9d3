#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ainf {

/// Exact scalars. Integers and residues mod p are stored as rationals with
/// denominator 1; the owning RingSpec keeps them canonical.
using Scalar = mpq_class;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient ring: the integers, the rationals, or a prime field F_p.
class RingSpec {
 public:
  enum class Kind { Integers, Rationals, PrimeField };

  RingSpec() = default;

  static RingSpec integers() { return RingSpec(Kind::Integers, 0); }
  static RingSpec rationals() { return RingSpec(Kind::Rationals, 0); }
  /// Throws AlgebraError unless p is prime.
  static RingSpec prime_field(long p);
  /// Accepts the CLI spellings "z", "q" and "fp:<p>".
  static RingSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  long characteristic() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }

  /// Canonical representative; throws if the value is not an element of the ring.
  Scalar normalize(const Scalar& x) const;

  Scalar add(const Scalar& a, const Scalar& b) const { return reduce(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return reduce(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return reduce(a * b); }
  Scalar neg(const Scalar& a) const { return reduce(-a); }

  bool is_unit(const Scalar& a) const;
  Scalar inverse(const Scalar& a) const;
  /// a / b, exact. Over Z throws when b does not divide a.
  Scalar div(const Scalar& a, const Scalar& b) const;

  /// Sign used for Koszul rules: (-1)^e as a ring element.
  Scalar sign(long e) const { return normalize(Scalar((e % 2 == 0) ? 1 : -1)); }

  std::string name() const;  // "Z", "Q", "F_p"
  std::string flag() const;  // "z", "q", "fp:p"

  bool operator==(const RingSpec& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const RingSpec& o) const { return !(*this == o); }

 private:
  RingSpec(Kind k, long p) : kind_(k), p_(p) {}
  Scalar reduce(const Scalar& x) const {
    return kind_ == Kind::PrimeField ? normalize(x) : x;
  }

  Kind kind_ = Kind::Rationals;
  long p_ = 0;
};

bool is_prime(long n);

/// Readable form of a scalar ("3", "-1/2").
std::string to_string(const Scalar& x);

}  // namespace ainf
