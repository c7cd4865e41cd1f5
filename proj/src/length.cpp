#include "hhs/length.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hhs {

namespace {

std::int64_t div_floor(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t div_up(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return static_cast<std::int64_t>(q);
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}

}  // namespace

Length Length::ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  __int128 t = static_cast<__int128>(num) * kScale;
  if (t % den != 0)
    throw std::invalid_argument("length " + std::to_string(num) + "/" + std::to_string(den) +
                                " is not representable");
  return from_ticks(static_cast<std::int64_t>(t / den));
}

Length Length::from_double(double v) {
  double t = v * kScale;
  double r = std::round(t);
  if (!std::isfinite(v) || std::fabs(t - r) > 1e-6)
    throw std::invalid_argument("length " + std::to_string(v) + " is not representable");
  return from_ticks(static_cast<std::int64_t>(r));
}

Length Length::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty length");
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  if (text.find_first_of(".eE") != std::string_view::npos)
    return from_double(std::stod(std::string(text)));
  return units(parse_int(text));
}

std::int64_t Length::floor_units() const { return div_floor(ticks_, kScale); }
std::int64_t Length::ceil_units() const { return -div_floor(-ticks_, kScale); }

std::string Length::str() const {
  if (integral()) return std::to_string(ticks_ / kScale);
  std::int64_t g = std::gcd(ticks_, kScale);
  return std::to_string(ticks_ / g) + "/" + std::to_string(kScale / g);
}

Length Length::times(Length o) const {
  return from_ticks(div_up(static_cast<__int128>(ticks_) * o.ticks_, kScale));
}

Length Length::div_ceil(Length o) const {
  if (o.ticks_ <= 0) throw std::invalid_argument("division by non-positive length");
  return from_ticks(div_up(static_cast<__int128>(ticks_) * kScale, o.ticks_));
}

void to_json(nlohmann::json& j, const Length& l) {
  if (l.integral())
    j = l.ticks() / Length::kScale;
  else
    j = l.str();
}

void from_json(const nlohmann::json& j, Length& l) {
  if (j.is_number_integer())
    l = Length::units(j.get<std::int64_t>());
  else if (j.is_number())
    l = Length::from_double(j.get<double>());
  else if (j.is_string())
    l = Length::parse(j.get<std::string>());
  else
    throw std::invalid_argument("length must be a number or a fraction string");
}

}  // namespace hhs
