#include "hhs/free_group.hpp"

#include <stdexcept>

namespace hhs::fg {

std::string reduce(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() && out.back() == inv(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string multiply(std::string_view a, std::string_view b) {
  std::string out(a);
  for (char c : b) {
    if (!out.empty() && out.back() == inv(c))
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

std::string inverse(std::string_view w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = inv(c);
  return out;
}

std::string power(std::string_view w, int k) {
  std::string base = k >= 0 ? std::string(w) : inverse(w);
  std::string out;
  for (int i = 0; i < (k >= 0 ? k : -k); ++i) out = multiply(out, base);
  return out;
}

std::string conjugate(std::string_view g, std::string_view n) { return multiply(multiply(g, n), inverse(g)); }

std::string alphabet(int rank) {
  if (rank < 1 || rank > 26) throw std::invalid_argument("free group rank must be in 1..26");
  std::string s;
  for (int i = 0; i < rank; ++i) {
    s.push_back(static_cast<char>('a' + i));
    s.push_back(static_cast<char>('A' + i));
  }
  return s;
}

bool valid_word(std::string_view w, int rank) {
  for (char c : w) {
    char l = static_cast<char>(c | 0x20);
    if (l < 'a' || l >= 'a' + rank) return false;
  }
  return true;
}

}  // namespace hhs::fg
