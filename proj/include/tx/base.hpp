// Words over digit alphabets, search budgets, and the shared error taxonomy.
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tx {

// Letters are stored as digit characters '0'..'9'; alphabets are X_n with n <= 10.
using Word = std::string;

constexpr int max_alphabet = 10;

enum class Errc {
  invalid_input,
  parse_error,
  non_productive_cycle,
  fixpoint_divergence,
  empty_preimage,
  not_surjective,
  not_injective,
  not_synchronizing,
  not_viable,
  budget_exceeded,
  order_budget_exceeded,
  internal_invariant,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

struct Budget {
  long long max_configurations = 100000;
  int max_depth = 24;
};

inline char letter_char(int x) { return static_cast<char>('0' + x); }
inline int letter_of(char c) { return c - '0'; }

inline bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline bool comparable(const Word& a, const Word& b) { return is_prefix(a, b) || is_prefix(b, a); }

inline Word lcp(const Word& a, const Word& b) {
  std::size_t i = 0, m = std::min(a.size(), b.size());
  while (i < m && a[i] == b[i]) ++i;
  return a.substr(0, i);
}

// w with the prefix p removed; callers guarantee p <= w.
inline Word drop_prefix(const Word& p, const Word& w) { return w.substr(p.size()); }

inline bool valid_word(int n, const Word& w) {
  for (char c : w)
    if (c < '0' || c >= '0' + n) return false;
  return true;
}

inline std::vector<Word> all_words(int n, int len) {
  std::vector<Word> out{Word()};
  for (int i = 0; i < len; ++i) {
    std::vector<Word> next;
    next.reserve(out.size() * n);
    for (const Word& w : out)
      for (int x = 0; x < n; ++x) next.push_back(w + letter_char(x));
    out = std::move(next);
  }
  return out;
}

inline std::string display_word(const Word& w) { return w.empty() ? "\xce\xb5" : w; }

// Accepts a plain digit word, or "ε"/"-" for the empty word.
inline Word parse_word(int n, const std::string& token) {
  if (token == "-" || token == "\xce\xb5") return Word();
  require(!token.empty() && valid_word(n, token), Errc::parse_error,
          "bad word '" + token + "' for alphabet of size " + std::to_string(n));
  return token;
}

}  // namespace tx
