#pragma once

#include <cstdint>
#include <stdexcept>

namespace pdq {

constexpr int kMaxVars = 8;
constexpr int kMaxExponent = 255;

// Exponent vector over at most eight variables, one byte per variable.
// Doubles as a multi-index for derivatives.
class Mono {
public:
  constexpr Mono() = default;
  static constexpr Mono from_bits(std::uint64_t b) {
    Mono m;
    m.bits_ = b;
    return m;
  }
  static Mono unit(int v, int k = 1) { return Mono().with(v, k); }

  constexpr std::uint64_t bits() const { return bits_; }
  int operator[](int v) const { return static_cast<int>((bits_ >> (8 * v)) & 0xff); }

  Mono with(int v, int k) const {
    if (v < 0 || v >= kMaxVars || k < 0 || k > kMaxExponent)
      throw std::out_of_range("monomial exponent out of range");
    Mono m;
    m.bits_ = (bits_ & ~(std::uint64_t{0xff} << (8 * v))) |
              (static_cast<std::uint64_t>(k) << (8 * v));
    return m;
  }

  int degree() const {
    int d = 0;
    for (std::uint64_t b = bits_; b; b >>= 8)
      d += static_cast<int>(b & 0xff);
    return d;
  }

  // Sum of exponents over variables [lo, hi).
  int degree(int lo, int hi) const {
    int d = 0;
    for (int v = lo; v < hi; ++v)
      d += (*this)[v];
    return d;
  }

  bool divides(Mono o) const {
    for (int v = 0; v < kMaxVars; ++v)
      if ((*this)[v] > o[v])
        return false;
    return true;
  }

  friend Mono operator+(Mono a, Mono b) {
    for (int v = 0; v < kMaxVars; ++v)
      if (a[v] + b[v] > kMaxExponent)
        throw std::overflow_error("monomial exponent overflow");
    return from_bits(a.bits_ + b.bits_);
  }
  // Caller guarantees b divides a.
  friend Mono operator-(Mono a, Mono b) { return from_bits(a.bits_ - b.bits_); }

  friend constexpr bool operator==(Mono a, Mono b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator<(Mono a, Mono b) { return a.bits_ < b.bits_; }
  constexpr bool is_one() const { return bits_ == 0; }

private:
  std::uint64_t bits_ = 0;
};

// Graded order: total degree first, then packed bits. Used for printing and
// triangular solves.
struct GradedLess {
  bool operator()(Mono a, Mono b) const {
    int da = a.degree(), db = b.degree();
    if (da != db)
      return da < db;
    return a.bits() < b.bits();
  }
};

} // namespace pdq
