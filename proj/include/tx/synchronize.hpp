// Synchronization analysis: state collapse, synchronizing levels, cores, and
// the word relation an automaton induces.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invert.hpp"
#include "machine.hpp"

namespace tx {

struct CollapsedAutomaton {
  Automaton original;
  std::vector<int> class_of;  // original state -> class id
  int steps = 0;              // merge rounds until nothing changes
  Automaton quotient;
};

namespace detail {

// One merge round: states with identical successor rows fall together.
// Returns true when the partition got strictly coarser.
inline bool merge_round(const Automaton& a, std::vector<int>& cls) {
  std::map<std::vector<int>, int> index;
  int states = a.size();
  std::vector<int> grouped(states);
  for (int q = 0; q < states; ++q) {
    std::vector<int> row(a.n);
    for (int x = 0; x < a.n; ++x) row[x] = cls[a.next[q][x]];
    auto it = index.find(row);
    if (it == index.end()) it = index.emplace(row, cls[q]).first;
    grouped[q] = it->second;
  }
  if (grouped == cls) return false;
  cls = grouped;
  return true;
}

// Renumbers class ids so that class k is the one whose least original state
// is the k-th smallest.
inline void order_classes(std::vector<int>& cls) {
  std::map<int, int> renumber;
  for (int q = 0; q < static_cast<int>(cls.size()); ++q)
    if (!renumber.count(cls[q])) renumber.emplace(cls[q], static_cast<int>(renumber.size()));
  for (int& c : cls) c = renumber[c];
}

}  // namespace detail

inline CollapsedAutomaton collapse(const Automaton& a) {
  CollapsedAutomaton r;
  r.original = a;
  r.class_of.resize(a.size());
  for (int q = 0; q < a.size(); ++q) r.class_of[q] = q;
  while (detail::merge_round(a, r.class_of)) ++r.steps;
  detail::order_classes(r.class_of);

  int nclasses = 0;
  for (int c : r.class_of) nclasses = std::max(nclasses, c + 1);
  r.quotient.n = a.n;
  std::vector<int> rep(nclasses, -1);
  for (int q = a.size() - 1; q >= 0; --q) rep[r.class_of[q]] = q;
  for (int c = 0; c < nclasses; ++c) r.quotient.add_state(a.names[rep[c]]);
  for (int c = 0; c < nclasses; ++c)
    for (int x = 0; x < a.n; ++x) r.quotient.next[c][x] = r.class_of[a.next[rep[c]][x]];
  r.quotient.q0 = r.class_of[a.q0];
  return r;
}

// Least k with all length-k words driving every state to a common one;
// equals the number of merge rounds needed to collapse to a single state.
inline std::optional<int> synchronizing_level(const Transducer& t, int kmax = 16) {
  Automaton a = forget_outputs(t);
  std::vector<int> cls(a.size());
  for (int q = 0; q < a.size(); ++q) cls[q] = q;
  int rounds = 0;
  while (detail::merge_round(a, cls)) ++rounds;
  std::map<int, int> distinct;
  for (int c : cls) distinct.emplace(c, 0);
  if (distinct.size() != 1 || rounds > kmax) return std::nullopt;
  return rounds;
}

// States reachable after reading any sufficiently long word, as a sub-machine.
inline Transducer core(const Transducer& t, int kmax = 16) {
  require(synchronizing_level(t, kmax).has_value(), Errc::not_synchronizing,
          "core of a machine that does not synchronize by level " + std::to_string(kmax));
  std::vector<char> in(t.size(), 1);
  for (;;) {
    std::vector<char> next_in(t.size(), 0);
    for (int q = 0; q < t.size(); ++q)
      if (in[q])
        for (int x = 0; x < t.n; ++x) next_in[t.next[q][x]] = 1;
    if (next_in == in) break;
    in = next_in;
  }
  Transducer c(t.n);
  std::vector<int> remap(t.size(), -1);
  for (int q = 0; q < t.size(); ++q)
    if (in[q]) remap[q] = c.add_state(t.names[q]);
  for (int q = 0; q < t.size(); ++q) {
    if (!in[q]) continue;
    for (int x = 0; x < t.n; ++x) {
      require(remap[t.next[q][x]] >= 0, Errc::internal_invariant, "core not closed");
      c.set_arrow(remap[q], x, remap[t.next[q][x]], t.out[q][x]);
    }
  }
  return c;
}

enum class Synchronicity { bi, one_way, not_synchronizing };

inline const char* to_string(Synchronicity s) {
  switch (s) {
    case Synchronicity::bi: return "bi";
    case Synchronicity::one_way: return "one_way";
    default: return "not_synchronizing";
  }
}

// Which sides of a homeomorphism machine synchronize.
inline Synchronicity classify_synchronicity(const InitialTransducer& t, int kmax = 16,
                                            const Budget& b = {}) {
  if (!synchronizing_level(t.m, kmax)) return Synchronicity::not_synchronizing;
  InitialTransducer s = invert(t, b);
  if (!synchronizing_level(s.m, kmax)) return Synchronicity::one_way;
  return Synchronicity::bi;
}

// Class of the state reached from the initial state along alpha.
inline int relation_classify(const CollapsedAutomaton& c, const Word& alpha) {
  require(valid_word(c.original.n, alpha), Errc::invalid_input, "letters out of range");
  return c.class_of[c.original.walk(alpha, c.original.q0)];
}

}  // namespace tx
