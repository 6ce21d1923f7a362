#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "mdinv/errors.hpp"
#include "mdinv/numbers.hpp"

namespace mdinv {

/// Exact nonnegative rational or infinity. Comparisons are exact.
class Rate {
 public:
  Rate() : value_(Rational(1)) {}
  Rate(long long v) : Rate(Rational(v)) {}  // NOLINT: integers read naturally as rates
  explicit Rate(Rational v) : value_(std::move(v)) {
    if (*value_ < 0) throw ValidationError("rate must be nonnegative, got " + mdinv::to_string(*value_));
  }

  static Rate infinity() {
    Rate r;
    r.value_.reset();
    return r;
  }

  /// "p/q", "p" or "inf".
  static Rate parse(std::string_view text) {
    if (text == "inf") return infinity();
    return Rate(parse_rational(text));
  }

  bool is_infinite() const noexcept { return !value_.has_value(); }

  const Rational& value() const {
    if (!value_) throw DomainError("infinite rate has no rational value");
    return *value_;
  }

  friend bool operator==(const Rate& a, const Rate& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rate& a, const Rate& b) {
    if (a.is_infinite() || b.is_infinite()) {
      if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
      return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*a.value_ > *b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  std::optional<Rational> value_;
};

inline std::string to_string(const Rate& r) {
  return r.is_infinite() ? std::string("inf") : to_string(r.value());
}

}  // namespace mdinv
