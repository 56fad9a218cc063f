// Finite transducers over X_n: data model, evaluation, validation, and products.
#pragma once

#include <map>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "base.hpp"
#include "epword.hpp"

namespace tx {

struct Transducer {
  int n = 2;
  std::vector<std::string> names;
  std::vector<std::vector<int>> next;   // next[q][x]
  std::vector<std::vector<Word>> out;   // out[q][x], possibly empty words

  explicit Transducer(int alphabet = 2) : n(alphabet) {
    require(n >= 2 && n <= max_alphabet, Errc::invalid_input, "alphabet size out of range");
  }

  int size() const { return static_cast<int>(names.size()); }

  int add_state(const std::string& name) {
    names.push_back(name);
    next.emplace_back(n, -1);
    out.emplace_back(n);
    return size() - 1;
  }

  void set_arrow(int q, int x, int to, Word w) {
    next[q][x] = to;
    out[q][x] = std::move(w);
  }

  int state_named(const std::string& name) const {
    for (int q = 0; q < size(); ++q)
      if (names[q] == name) return q;
    return -1;
  }

  bool well_formed() const {
    for (int q = 0; q < size(); ++q)
      for (int x = 0; x < n; ++x) {
        if (next[q][x] < 0 || next[q][x] >= size()) return false;
        if (!valid_word(n, out[q][x])) return false;
      }
    return true;
  }

  std::size_t max_out_len() const {
    std::size_t m = 0;
    for (const auto& row : out)
      for (const Word& w : row) m = std::max(m, w.size());
    return m;
  }

  bool is_synchronous() const {
    for (const auto& row : out)
      for (const Word& w : row)
        if (w.size() != 1) return false;
    return true;
  }
};

struct InitialTransducer {
  Transducer m;
  int q0 = 0;
};

struct Automaton {
  int n = 2;
  std::vector<std::string> names;
  std::vector<std::vector<int>> next;
  int q0 = 0;

  int size() const { return static_cast<int>(names.size()); }

  int add_state(const std::string& name) {
    names.push_back(name);
    next.emplace_back(n, -1);
    return size() - 1;
  }

  int state_named(const std::string& name) const {
    for (int q = 0; q < size(); ++q)
      if (names[q] == name) return q;
    return -1;
  }

  int walk(const Word& w, int q) const {
    for (char c : w) q = next[q][letter_of(c)];
    return q;
  }
};

inline Automaton forget_outputs(const Transducer& t, int q0 = 0) {
  Automaton a;
  a.n = t.n;
  a.names = t.names;
  a.next = t.next;
  a.q0 = q0;
  return a;
}

inline std::pair<Word, int> evaluate_prefix(const Transducer& t, int q, const Word& w) {
  Word produced;
  for (char c : w) {
    int x = letter_of(c);
    produced += t.out[q][x];
    q = t.next[q][x];
  }
  return {produced, q};
}

// States lying on a cycle every edge of which emits the empty word.
inline std::vector<int> non_productive_states(const Transducer& t) {
  int m = t.size();
  std::vector<std::vector<int>> eps(m);
  for (int q = 0; q < m; ++q)
    for (int x = 0; x < t.n; ++x)
      if (t.out[q][x].empty()) eps[q].push_back(t.next[q][x]);
  std::vector<int> bad;
  for (int s = 0; s < m; ++s) {
    std::vector<char> seen(m, 0);
    std::queue<int> bfs;
    for (int v : eps[s]) {
      if (v == s) { bad.push_back(s); break; }
      if (!seen[v]) { seen[v] = 1; bfs.push(v); }
    }
    if (!bad.empty() && bad.back() == s) continue;
    bool hit = false;
    while (!bfs.empty() && !hit) {
      int u = bfs.front();
      bfs.pop();
      for (int v : eps[u]) {
        if (v == s) { hit = true; break; }
        if (!seen[v]) { seen[v] = 1; bfs.push(v); }
      }
    }
    if (hit) bad.push_back(s);
  }
  return bad;
}

struct ValidationReport {
  bool accessible = true;
  std::vector<int> unreachable;
  std::vector<int> degenerate;
  bool ok() const { return accessible && degenerate.empty(); }
};

inline std::vector<char> reachable_set(const Transducer& t, int q0) {
  std::vector<char> seen(t.size(), 0);
  std::queue<int> bfs;
  seen[q0] = 1;
  bfs.push(q0);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int x = 0; x < t.n; ++x)
      if (!seen[t.next[q][x]]) {
        seen[t.next[q][x]] = 1;
        bfs.push(t.next[q][x]);
      }
  }
  return seen;
}

inline ValidationReport validate(const InitialTransducer& t) {
  require(t.m.well_formed() && t.q0 >= 0 && t.q0 < t.m.size(), Errc::invalid_input,
          "malformed transducer");
  ValidationReport r;
  auto seen = reachable_set(t.m, t.q0);
  for (int q = 0; q < t.m.size(); ++q)
    if (!seen[q]) r.unreachable.push_back(q);
  r.accessible = r.unreachable.empty();
  for (int q : non_productive_states(t.m))
    if (seen[q]) r.degenerate.push_back(q);
  return r;
}

// Rejects machines whose reachable part contains an all-empty-output cycle;
// every analysis that walks output space needs this to terminate.
inline void require_productive(const Transducer& t, const char* who) {
  require(non_productive_states(t).empty(), Errc::invalid_input,
          std::string(who) + ": machine has a non-productive cycle");
}

inline EpWord evaluate_ep(const Transducer& t, int q, const EpWord& x) {
  EpWord w = x.canonical();
  auto [head, p] = evaluate_prefix(t, q, w.pre);
  Word grown;
  std::map<int, std::size_t> seen_at;  // state at period boundary -> emitted length
  seen_at[p] = 0;
  for (int round = 0; round <= t.size(); ++round) {
    auto [piece, p2] = evaluate_prefix(t, p, w.per);
    grown += piece;
    p = p2;
    auto it = seen_at.find(p);
    if (it != seen_at.end()) {
      Word cycle = grown.substr(it->second);
      require(!cycle.empty(), Errc::non_productive_cycle,
              "no output produced around the repeating tail");
      return EpWord(head + grown.substr(0, it->second), cycle).canonical();
    }
    seen_at[p] = grown.size();
  }
  fail(Errc::internal_invariant, "period iteration failed to close");
}

// Composition in application order: the right factor reads the left factor's output.
inline Transducer product(const Transducer& a, const Transducer& b) {
  require(a.n == b.n, Errc::invalid_input, "product over mismatched alphabets");
  Transducer p(a.n);
  for (int t = 0; t < a.size(); ++t)
    for (int r = 0; r < b.size(); ++r) p.add_state(a.names[t] + "\xc2\xb7" + b.names[r]);
  auto id = [&](int t, int r) { return t * b.size() + r; };
  for (int t = 0; t < a.size(); ++t)
    for (int r = 0; r < b.size(); ++r)
      for (int x = 0; x < a.n; ++x) {
        auto [w, r2] = evaluate_prefix(b, r, a.out[t][x]);
        p.set_arrow(id(t, r), x, id(a.next[t][x], r2), w);
      }
  return p;
}

inline InitialTransducer product(const InitialTransducer& a, const InitialTransducer& b) {
  return {product(a.m, b.m), a.q0 * b.m.size() + b.q0};
}

// Keeps only states reachable from q0, preserving relative order.
inline InitialTransducer accessible_restriction(const InitialTransducer& t) {
  auto seen = reachable_set(t.m, t.q0);
  std::vector<int> remap(t.m.size(), -1);
  Transducer r(t.m.n);
  for (int q = 0; q < t.m.size(); ++q)
    if (seen[q]) remap[q] = r.add_state(t.m.names[q]);
  for (int q = 0; q < t.m.size(); ++q) {
    if (!seen[q]) continue;
    for (int x = 0; x < t.m.n; ++x) r.set_arrow(remap[q], x, remap[t.m.next[q][x]], t.m.out[q][x]);
  }
  return {std::move(r), remap[t.q0]};
}

inline bool is_identity_machine(const InitialTransducer& t) {
  if (t.m.size() != 1) return false;
  for (int x = 0; x < t.m.n; ++x) {
    if (t.m.next[0][x] != 0) return false;
    if (t.m.out[0][x] != Word(1, letter_char(x))) return false;
  }
  return true;
}

}  // namespace tx
