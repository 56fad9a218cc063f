// Canonical forms: incomplete-response removal, state merging, omega-equivalence.
#pragma once

#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "machine.hpp"

namespace tx {

// c(q): the output prefix every sufficiently long run from q is forced to emit.
// Least fixpoint of c(q) = lcp_x(out(x,q) . c(next(x,q))), iterated from epsilon.
inline std::vector<Word> forced_prefixes(const Transducer& t) {
  std::size_t bound = t.size() * (1 + t.max_out_len()) + 1;
  std::vector<Word> c(t.size());
  for (std::size_t round = 0;; ++round) {
    require(round <= bound, Errc::fixpoint_divergence, "forced prefixes keep growing");
    bool changed = false;
    for (int q = 0; q < t.size(); ++q) {
      Word acc = t.out[q][0] + c[t.next[q][0]];
      for (int x = 1; x < t.n; ++x) acc = lcp(acc, t.out[q][x] + c[t.next[q][x]]);
      if (acc != c[q]) {
        require(acc.size() <= bound, Errc::fixpoint_divergence, "forced prefixes keep growing");
        c[q] = std::move(acc);
        changed = true;
      }
    }
    if (!changed) return c;
  }
}

// Pushes forced output upstream so every state's outputs share no common prefix.
// Returns the preamble c(q0) together with the rewritten machine.
inline std::pair<Word, InitialTransducer> remove_incomplete_response(const InitialTransducer& t0) {
  InitialTransducer t = accessible_restriction(t0);
  auto c = forced_prefixes(t.m);
  Transducer r(t.m.n);
  for (int q = 0; q < t.m.size(); ++q) r.add_state(t.m.names[q]);
  for (int q = 0; q < t.m.size(); ++q)
    for (int x = 0; x < t.m.n; ++x) {
      Word full = t.m.out[q][x] + c[t.m.next[q][x]];
      r.set_arrow(q, x, t.m.next[q][x], drop_prefix(c[q], full));
    }
  return {c[t.q0], {std::move(r), t.q0}};
}

// Merges states with identical behaviour; machine must already have complete response.
inline std::vector<int> omega_classes(const Transducer& t) {
  std::vector<int> cls(t.size(), 0);
  auto key_of = [&](int q) {
    std::vector<std::pair<Word, int>> key(t.n);
    for (int x = 0; x < t.n; ++x) key[x] = {t.out[q][x], cls[t.next[q][x]]};
    return key;
  };
  for (;;) {
    std::map<std::vector<std::pair<Word, int>>, int> index;
    std::vector<int> refined(t.size());
    for (int q = 0; q < t.size(); ++q) {
      auto key = key_of(q);
      auto it = index.find(key);
      if (it == index.end()) it = index.emplace(key, static_cast<int>(index.size())).first;
      refined[q] = it->second;
    }
    if (refined == cls) return cls;
    cls = std::move(refined);
  }
}

struct Minimized {
  Word preamble;
  InitialTransducer machine;
};

// Canonical representative: accessible, complete response, distinct states,
// numbered breadth-first from the initial state with letters ascending.
inline Minimized minimize(const InitialTransducer& t0) {
  auto [preamble, t] = remove_incomplete_response(t0);
  auto cls = omega_classes(t.m);
  int nclasses = *std::max_element(cls.begin(), cls.end()) + 1;

  std::vector<int> rep(nclasses, -1);
  for (int q = t.m.size() - 1; q >= 0; --q) rep[cls[q]] = q;

  std::vector<int> order(nclasses, -1);
  std::vector<int> bfs;
  bfs.push_back(cls[t.q0]);
  order[cls[t.q0]] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int c = bfs[i];
    for (int x = 0; x < t.m.n; ++x) {
      int d = cls[t.m.next[rep[c]][x]];
      if (order[d] < 0) {
        order[d] = static_cast<int>(bfs.size());
        bfs.push_back(d);
      }
    }
  }

  Transducer r(t.m.n);
  for (int i = 0; i < nclasses; ++i) r.add_state("");
  for (int c = 0; c < nclasses; ++c) {
    int q = rep[c];
    r.names[order[c]] = t.m.names[q];
    for (int x = 0; x < t.m.n; ++x)
      r.set_arrow(order[c], x, order[cls[t.m.next[q][x]]], t.m.out[q][x]);
  }
  return {preamble, {std::move(r), 0}};
}

// Name-independent fingerprint of the behaviour of t as a map on infinite words.
inline std::string canonical_signature(const InitialTransducer& t) {
  auto min = minimize(t);
  std::string s = std::to_string(min.machine.m.n) + "|" + min.preamble + "|";
  for (int q = 0; q < min.machine.m.size(); ++q)
    for (int x = 0; x < min.machine.m.n; ++x)
      s += std::to_string(min.machine.m.next[q][x]) + ":" + min.machine.m.out[q][x] + ";";
  return s;
}

inline bool omega_equal(const InitialTransducer& a, const InitialTransducer& b) {
  return a.m.n == b.m.n && canonical_signature(a) == canonical_signature(b);
}

}  // namespace tx
