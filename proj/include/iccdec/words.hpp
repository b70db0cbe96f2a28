#ifndef ICCDEC_WORDS_HPP_
#define ICCDEC_WORDS_HPP_

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iccdec/error.hpp"

namespace iccdec {

// One generator occurrence, possibly inverted.
struct Letter {
  std::string generator;
  bool inverse = false;

  Letter inverted() const { return Letter{generator, !inverse}; }
  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

inline Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverted());
  return out;
}

inline Word power_word(const std::string& gen, std::int64_t k) {
  Word out;
  const bool inv = k < 0;
  for (std::int64_t i = 0; i < (inv ? -k : k); ++i) out.push_back({gen, inv});
  return out;
}

inline void append(Word& w, const Word& tail) {
  w.insert(w.end(), tail.begin(), tail.end());
}

// Parses whitespace-separated tokens of the form `g`, `g'`, `g^k`, `g'^k`
// (k may be negative). The token `1` denotes the empty word.
inline Word parse_word(std::string_view text) {
  Word out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    std::int64_t power = 1;
    std::string name = tok;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string exp = tok.substr(caret + 1);
      std::size_t used = 0;
      try {
        power = std::stoll(exp, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (exp.empty() || used != exp.size()) {
        throw UsageError("bad exponent in word token '" + tok + "'");
      }
    }
    bool inv = false;
    while (!name.empty() && name.back() == '\'') {
      inv = !inv;
      name.pop_back();
    }
    if (name.empty()) throw UsageError("empty generator name in token '" + tok + "'");
    if (inv) power = -power;
    append(out, power_word(name, power));
  }
  return out;
}

// Compact rendering that parse_word accepts: runs of one letter collapse to
// a power; a single inverse letter prints as `g'`.
inline std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const auto run = static_cast<std::int64_t>(j - i);
    if (!out.empty()) out += ' ';
    out += w[i].generator;
    if (run == 1) {
      if (w[i].inverse) out += '\'';
    } else {
      out += '^';
      out += std::to_string(w[i].inverse ? -run : run);
    }
    i = j;
  }
  return out;
}

}  // namespace iccdec

#endif  // ICCDEC_WORDS_HPP_
