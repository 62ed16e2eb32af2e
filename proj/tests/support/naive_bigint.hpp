#pragma once

// Schoolbook unsigned big integers, base 2^32, little endian. Only what the
// counting-inequality oracle needs; deliberately independent of the library.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace naive {

struct Big {
  std::vector<std::uint32_t> w;  // no trailing zero words

  static Big of(std::uint64_t v) {
    Big b;
    while (v != 0) {
      b.w.push_back(static_cast<std::uint32_t>(v));
      v >>= 32;
    }
    return b;
  }
  bool zero() const { return w.empty(); }
  void trim() {
    while (!w.empty() && w.back() == 0) w.pop_back();
  }
  std::uint64_t bit_length() const {
    if (w.empty()) return 0;
    std::uint64_t n = 32 * (w.size() - 1);
    for (std::uint32_t top = w.back(); top != 0; top >>= 1) ++n;
    return n;
  }
  bool is_power_of_two() const {
    if (w.empty()) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] != 0) return false;
    return (w.back() & (w.back() - 1)) == 0;
  }
};

inline Big add(const Big& a, const Big& b) {
  Big r;
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < std::max(a.w.size(), b.w.size()) || carry; ++i) {
    std::uint64_t s = carry;
    if (i < a.w.size()) s += a.w[i];
    if (i < b.w.size()) s += b.w[i];
    r.w.push_back(static_cast<std::uint32_t>(s));
    carry = s >> 32;
  }
  r.trim();
  return r;
}

inline Big mul(const Big& a, const Big& b) {
  if (a.zero() || b.zero()) return {};
  Big r;
  r.w.assign(a.w.size() + b.w.size(), 0);
  for (std::size_t i = 0; i < a.w.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.w.size(); ++j) {
      const std::uint64_t cur = static_cast<std::uint64_t>(a.w[i]) * b.w[j] + r.w[i + j] + carry;
      r.w[i + j] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    std::size_t k = i + b.w.size();
    while (carry != 0) {
      const std::uint64_t cur = static_cast<std::uint64_t>(r.w[k]) + carry;
      r.w[k] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  r.trim();
  return r;
}

inline Big mul_small(const Big& a, std::uint32_t m) { return mul(a, Big::of(m)); }

inline Big div_small(const Big& a, std::uint32_t d) {
  Big r;
  r.w.assign(a.w.size(), 0);
  std::uint64_t rem = 0;
  for (std::size_t i = a.w.size(); i-- > 0;) {
    const std::uint64_t cur = (rem << 32) | a.w[i];
    r.w[i] = static_cast<std::uint32_t>(cur / d);
    rem = cur % d;
  }
  r.trim();
  return r;
}

inline Big pow(Big base, std::uint64_t e) {
  Big r = Big::of(1);
  while (e != 0) {
    if (e & 1u) r = mul(r, base);
    e >>= 1;
    if (e != 0) base = mul(base, base);
  }
  return r;
}

/// s^d + sum_{i=1}^{j} C(n, i) 2^i.
inline Big counting_lhs(std::uint64_t n, std::uint64_t d, std::uint64_t j, std::uint32_t s) {
  Big total = pow(Big::of(s), d);
  Big binom = Big::of(1);
  for (std::uint64_t i = 1; i <= j && i <= n; ++i) {
    binom = div_small(mul_small(binom, static_cast<std::uint32_t>(n - i + 1)), static_cast<std::uint32_t>(i));
    total = add(total, mul(binom, pow(Big::of(2), i)));
  }
  return total;
}

/// N <= 2^e.
inline bool at_most_power_of_two(const Big& n, std::uint64_t e) {
  const std::uint64_t bits = n.bit_length();
  return bits <= e || (bits == e + 1 && n.is_power_of_two());
}

/// Decimal text "0.25" as p / q = 25 / 100 (unreduced).
inline std::pair<std::uint64_t, std::uint64_t> decimal(const std::string& text) {
  std::uint64_t p = 0, q = 1;
  bool frac = false;
  for (char c : text) {
    if (c == '.') {
      frac = true;
      continue;
    }
    p = p * 10 + static_cast<std::uint64_t>(c - '0');
    if (frac) q *= 10;
  }
  return {p, q};
}

/// The counting inequality LHS <= 2^{2 delta n} with delta = p / q, i.e.
/// LHS^q <= 2^{2 p n}.
inline bool counting_holds(std::uint64_t n, std::uint64_t d, std::uint64_t j, std::uint32_t s,
                           const std::string& delta) {
  const auto [p, q] = decimal(delta);
  return at_most_power_of_two(pow(counting_lhs(n, d, j, s), q), 2 * p * n);
}

}  // namespace naive
