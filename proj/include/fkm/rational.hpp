#ifndef FKM_RATIONAL_HPP
#define FKM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fkm {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

// Token form used by every file format: "p" when the denominator is 1, else "p/q".
inline std::string rational_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_rational(const std::string& tok) {
  try {
    Rational r(tok);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("parse_rational: bad token '" + tok + "'");
  }
}

// SplitMix64. A fixed, self-contained generator so that sampled rational
// points are reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi], hi >= lo.
  long range(long lo, long hi) {
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Small random rational, numerator in [-9,9], denominator in [1,9].
  Rational rational() { return rat(range(-9, 9), range(1, 9)); }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t kDefaultSeed = 20250814ULL;

}  // namespace fkm

#endif
