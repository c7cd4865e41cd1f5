#pragma once

#include <string>
#include <string_view>

namespace hhs::fg {

// Words over generators a, b, c, ...; the uppercase letter is the inverse.
// The identity prints as "1".
inline char inv(char c) { return static_cast<char>(c ^ 0x20); }

std::string reduce(std::string_view w);
std::string multiply(std::string_view a, std::string_view b);
std::string inverse(std::string_view w);
std::string power(std::string_view w, int k);
std::string conjugate(std::string_view g, std::string_view n);  // g n g⁻¹
inline std::string id_of(std::string_view w) { return w.empty() ? std::string("1") : std::string(w); }
inline std::string word_of(std::string_view id) { return id == "1" ? std::string() : std::string(id); }
// Letters of the standard generating set for the given rank, in enumeration order a A b B ...
std::string alphabet(int rank);
bool valid_word(std::string_view w, int rank);

}  // namespace hhs::fg
