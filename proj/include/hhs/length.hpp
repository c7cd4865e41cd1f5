#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace hhs {

// Exact edge lengths: integer ticks over a fixed denominator, so halves,
// thirds, quarters and so on add without drift.
class Length {
 public:
  static constexpr std::int64_t kScale = 2520;

  constexpr Length() = default;
  static constexpr Length from_ticks(std::int64_t t) {
    Length l;
    l.ticks_ = t;
    return l;
  }
  static constexpr Length units(std::int64_t n) { return from_ticks(n * kScale); }
  // Throws std::invalid_argument when den does not divide the scale.
  static Length ratio(std::int64_t num, std::int64_t den);
  static Length parse(std::string_view text);
  // Nearest representable value; throws when the double is not within 1e-9 of one.
  static Length from_double(double v);

  constexpr std::int64_t ticks() const { return ticks_; }
  double to_double() const { return static_cast<double>(ticks_) / kScale; }
  bool integral() const { return ticks_ % kScale == 0; }
  std::int64_t floor_units() const;
  std::int64_t ceil_units() const;
  std::string str() const;

  constexpr auto operator<=>(const Length&) const = default;
  constexpr Length operator+(Length o) const { return from_ticks(ticks_ + o.ticks_); }
  constexpr Length operator-(Length o) const { return from_ticks(ticks_ - o.ticks_); }
  constexpr Length operator-() const { return from_ticks(-ticks_); }
  constexpr Length operator*(std::int64_t k) const { return from_ticks(ticks_ * k); }
  constexpr Length& operator+=(Length o) {
    ticks_ += o.ticks_;
    return *this;
  }
  constexpr Length& operator-=(Length o) {
    ticks_ -= o.ticks_;
    return *this;
  }
  // Product of two lengths, rounded up to the next tick.
  Length times(Length o) const;
  // Quotient rounded up to the next tick; o must be positive.
  Length div_ceil(Length o) const;
  Length half_ceil() const { return from_ticks(ticks_ >= 0 ? (ticks_ + 1) / 2 : -((-ticks_) / 2)); }

 private:
  std::int64_t ticks_ = 0;
};

inline Length max(Length a, Length b) { return a < b ? b : a; }
inline Length min(Length a, Length b) { return a < b ? a : b; }

void to_json(nlohmann::json& j, const Length& l);
void from_json(const nlohmann::json& j, Length& l);

}  // namespace hhs
