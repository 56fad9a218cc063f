// Eventually periodic infinite words u v^omega with canonical forms.
#pragma once

#include <string>

#include "base.hpp"

namespace tx {

struct EpWord {
  Word pre;  // finite head u
  Word per;  // repeating tail v, never empty

  EpWord() : per("0") {}
  EpWord(Word u, Word v) : pre(std::move(u)), per(std::move(v)) {
    require(!per.empty(), Errc::invalid_input, "eventually periodic word needs a nonempty period");
  }

  char at(std::size_t i) const {
    if (i < pre.size()) return pre[i];
    return per[(i - pre.size()) % per.size()];
  }

  Word head(std::size_t len) const {
    Word out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(at(i));
    return out;
  }

  EpWord canonical() const {
    Word u = pre, v = per;
    // Shrink the period to its primitive root.
    for (std::size_t d = 1; d <= v.size() / 2; ++d) {
      if (v.size() % d != 0) continue;
      if (v.compare(0, v.size() - d, v, d, v.size() - d) == 0) {
        v = v.substr(0, d);
        break;
      }
    }
    // Absorb any periodic tail of the head into the cycle.
    while (!u.empty() && u.back() == v.back()) {
      u.pop_back();
      v = v.back() + v.substr(0, v.size() - 1);
    }
    return EpWord(u, v);
  }

  // Drops the first len letters.
  EpWord shifted(std::size_t len) const {
    if (len <= pre.size()) return EpWord(pre.substr(len), per);
    std::size_t k = (len - pre.size()) % per.size();
    return EpWord(Word(), per.substr(k) + per.substr(0, k));
  }

  friend bool operator==(const EpWord& a, const EpWord& b) {
    EpWord ca = a.canonical(), cb = b.canonical();
    return ca.pre == cb.pre && ca.per == cb.per;
  }
  friend bool operator!=(const EpWord& a, const EpWord& b) { return !(a == b); }
};

inline std::string to_string(const EpWord& w) { return w.pre + "(" + w.per + ")"; }

// Accepts "u(v)" with u possibly empty and v nonempty, e.g. "0(01)" or "(1)".
// The head may also be written "-" or the epsilon glyph.
inline EpWord parse_ep(int n, const std::string& s) {
  auto open = s.find('(');
  require(open != std::string::npos && s.back() == ')' && s.size() >= open + 3, Errc::parse_error,
          "expected u(v) with nonempty period: '" + s + "'");
  std::string head = s.substr(0, open);
  Word u = head.empty() ? Word() : parse_word(n, head);
  Word v = s.substr(open + 1, s.size() - open - 2);
  require(valid_word(n, v), Errc::parse_error, "letters out of range in '" + s + "'");
  return EpWord(u, v);
}

}  // namespace tx
