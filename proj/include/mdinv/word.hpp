#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdinv/errors.hpp"
#include "mdinv/numbers.hpp"

namespace mdinv {

struct Letter {
  std::size_t generator = 0;
  int exponent = 1;  // +1 or -1

  Letter inverse() const { return {generator, -exponent}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter& a, const Letter& b) {
    if (a.generator != b.generator) return a.generator <=> b.generator;
    return a.exponent <=> b.exponent;
  }
};

/// Freely reduced word in numbered generators. The empty word is the identity.
class Word {
 public:
  Word() = default;

  explicit Word(std::vector<Letter> letters) {
    for (const Letter& l : letters) push(l);
  }

  static Word generator(std::size_t g, int exponent = 1) {
    Word w;
    const Letter l{g, exponent < 0 ? -1 : 1};
    for (int k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) w.push(l);
    return w;
  }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  /// Appends one letter, cancelling against the last one if possible.
  void push(const Letter& l) {
    if (l.exponent != 1 && l.exponent != -1) throw ValidationError("letter exponent must be +1 or -1");
    if (!letters_.empty() && letters_.back() == l.inverse())
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  Word inverse() const {
    Word w;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  Word power(long k) const {
    Word base = k < 0 ? inverse() : *this;
    Word out;
    for (long i = 0; i < (k < 0 ? -k : k); ++i) out *= base;
    return out;
  }

  Word& operator*=(const Word& other) {
    for (const Letter& l : other.letters_) push(l);
    return *this;
  }
  friend Word operator*(Word a, const Word& b) { return a *= b; }

  /// Conjugates away matching first/last letters.
  Word cyclically_reduced() const {
    std::size_t lo = 0;
    std::size_t hi = letters_.size();
    while (hi - lo >= 2 && letters_[lo] == letters_[hi - 1].inverse()) {
      ++lo;
      --hi;
    }
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(lo),
                      letters_.begin() + static_cast<std::ptrdiff_t>(hi));
    return w;
  }

  std::size_t occurrences(std::size_t g) const {
    return static_cast<std::size_t>(std::count_if(
        letters_.begin(), letters_.end(), [g](const Letter& l) { return l.generator == g; }));
  }

  std::size_t max_generator_plus_one() const {
    std::size_t m = 0;
    for (const Letter& l : letters_) m = std::max(m, l.generator + 1);
    return m;
  }

  /// Exponent sum of each of the first `generators` generators.
  std::vector<Integer> exponent_sums(std::size_t generators) const {
    std::vector<Integer> sums(generators);
    for (const Letter& l : letters_) {
      if (l.generator >= generators) throw ValidationError("generator index out of range");
      sums[l.generator] += l.exponent;
    }
    return sums;
  }

  /// Replaces generator g by images[g].
  Word substitute(std::span<const Word> images) const {
    Word out;
    for (const Letter& l : letters_) {
      if (l.generator >= images.size()) throw ValidationError("generator index out of range");
      out *= l.exponent > 0 ? images[l.generator] : images[l.generator].inverse();
    }
    return out;
  }

  /// Shifts every generator index by `offset`.
  Word shifted(std::size_t offset) const {
    Word w = *this;
    for (Letter& l : w.letters_) l.generator += offset;
    return w;
  }

  /// Lexicographically least cyclic rotation of this word or its inverse.
  /// Two cyclically reduced relators with equal keys define the same normal
  /// closure.
  std::vector<Letter> cyclic_key() const {
    const Word c = cyclically_reduced();
    std::vector<Letter> best;
    bool first = true;
    for (const Word& w : {c, c.inverse()}) {
      const auto& ls = w.letters_;
      for (std::size_t r = 0; r < std::max<std::size_t>(ls.size(), 1); ++r) {
        std::vector<Letter> rot;
        for (std::size_t i = 0; i < ls.size(); ++i) rot.push_back(ls[(r + i) % ls.size()]);
        if (first || rot < best) {
          best = std::move(rot);
          first = false;
        }
      }
    }
    return best;
  }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Renders `a*b^-1*a`; the empty word prints as "1".
inline std::string to_string(const Word& w, std::span<const std::string> names) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.letters().size(); ++i) {
    const Letter& l = w.letters()[i];
    if (l.generator >= names.size()) throw ValidationError("generator index out of range");
    if (i) out += '*';
    out += names[l.generator];
    if (l.exponent < 0) out += "^-1";
  }
  return out;
}

/// Parses `a*b^-1*a^3` against a list of generator names. Factors may carry
/// an integer exponent; "1" and "" denote the identity. Whitespace around
/// factors is ignored.
inline Word parse_word(std::string_view text, std::span<const std::string> names) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);

  Word out;
  const std::string_view whole = trim(text);
  if (whole.empty() || whole == "1") return out;
  std::size_t start = 0;
  while (start <= whole.size()) {
    std::size_t stop = whole.find('*', start);
    if (stop == std::string_view::npos) stop = whole.size();
    std::string_view factor = trim(whole.substr(start, stop - start));
    long exponent = 1;
    if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
      const std::string_view exp_text = trim(factor.substr(caret + 1));
      Integer e;
      try {
        e = parse_integer(exp_text);
      } catch (const ValidationError&) {
        throw ValidationError("bad exponent \"" + std::string(exp_text) + "\" in word \"" +
                              std::string(text) + "\"");
      }
      if (abs(e) > 1000000) throw ValidationError("exponent too large in word \"" + std::string(text) + "\"");
      exponent = static_cast<long>(e);
      factor = trim(factor.substr(0, caret));
    }
    if (factor.empty()) throw ValidationError("empty factor in word \"" + std::string(text) + "\"");
    if (factor == "1") {
      start = stop + 1;
      continue;
    }
    const auto it = index.find(factor);
    if (it == index.end())
      throw ValidationError("unknown generator \"" + std::string(factor) + "\" in word \"" +
                            std::string(text) + "\"");
    out *= Word::generator(it->second, 1).power(exponent);
    start = stop + 1;
  }
  return out;
}

}  // namespace mdinv
