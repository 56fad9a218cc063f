// Independent brute-force reference computations for the test suite.  These
// deliberately avoid the library's algorithms: everything here is plain
// table-walking and exhaustive enumeration, so that library results can be
// checked against an implementation with nothing in common.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tx/machine.hpp"

namespace oracle {

using tx::InitialTransducer;
using tx::Transducer;
using tx::Word;

// Step-by-step run, written without evaluate_prefix.
inline std::pair<Word, int> run(const Transducer& t, int q, const Word& w) {
  Word out;
  for (char ch : w) {
    int x = ch - '0';
    out += t.out[q][x];
    q = t.next[q][x];
  }
  return {out, q};
}

// The full input -> output table at a fixed depth.
inline std::map<Word, Word> map_table(const Transducer& t, int q, int depth) {
  std::map<Word, Word> table;
  for (const Word& w : tx::all_words(t.n, depth)) table[w] = run(t, q, w).first;
  return table;
}

// Two states act identically on all infinite words iff their outputs stay
// comparable on every input of the probe depth and agree once both sides have
// committed.  For minimal productive machines a probe depth of
// 2 * |Q1| * |Q2| * (1 + max output) separates every distinct pair.
inline bool same_map(const Transducer& a, int qa, const Transducer& b, int qb, int depth) {
  for (const Word& w : tx::all_words(a.n, depth)) {
    Word oa = run(a, qa, w).first;
    Word ob = run(b, qb, w).first;
    std::size_t m = std::min(oa.size(), ob.size());
    if (oa.substr(0, m) != ob.substr(0, m)) return false;
  }
  return true;
}

// Evaluation of u v^omega by cycling the period until the state repeats at a
// period boundary.
inline tx::EpWord run_ep(const Transducer& t, int q, const tx::EpWord& x) {
  auto [head, p] = run(t, q, x.pre);
  std::map<int, std::size_t> seen{{p, 0}};
  Word grown;
  for (;;) {
    auto [piece, p2] = run(t, p, x.per);
    grown += piece;
    p = p2;
    auto it = seen.find(p);
    if (it != seen.end()) return tx::EpWord(head + grown.substr(0, it->second),
                                            grown.substr(it->second)).canonical();
    seen[p] = grown.size();
  }
}

// Least k <= kmax such that every length-k word sends all states to one
// common state, by direct scan.
inline int sync_level_scan(const std::vector<std::vector<int>>& next, int n, int kmax) {
  int states = static_cast<int>(next.size());
  for (int k = 0; k <= kmax; ++k) {
    bool all = true;
    for (const Word& w : tx::all_words(n, k)) {
      std::set<int> landed;
      for (int q = 0; q < states; ++q) {
        int p = q;
        for (char ch : w) p = next[p][ch - '0'];
        landed.insert(p);
      }
      if (landed.size() != 1) {
        all = false;
        break;
      }
    }
    if (all) return k;
  }
  return -1;
}

// Does [u] meet the set of outputs?  Sound for productive machines when the
// probe depth comfortably exceeds |u|.
inline bool meets_image_scan(const Transducer& t, int q, const Word& u, int depth) {
  for (const Word& w : tx::all_words(t.n, depth)) {
    Word o = run(t, q, w).first;
    if (o.size() >= u.size() && o.compare(0, u.size(), u) == 0) return true;
  }
  return false;
}

// Number of ones in a word, for the relation induced by the flip machine.
inline int ones(const Word& w) { return static_cast<int>(std::count(w.begin(), w.end(), '1')); }

// Order of the permutation group generated by perms, by plain closure.
inline std::size_t perm_closure_order(std::vector<std::vector<int>> gens) {
  std::set<std::vector<int>> seen(gens.begin(), gens.end());
  std::vector<std::vector<int>> frontier(gens.begin(), gens.end());
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& g : gens) {
        std::vector<int> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = g[a[i]];
        if (seen.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  return seen.size();
}

}  // namespace oracle
