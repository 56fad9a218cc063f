// Built-in machines used across the tool and its checks.
#pragma once

#include <optional>
#include <string>

#include "machine.hpp"

namespace tx {

// Two states over X_2: a copies, b flips, and the letter read picks the next
// state regardless of where you were.  One-way synchronizing at level 1.
inline InitialTransducer make_parity() {
  Transducer m(2);
  int a = m.add_state("a"), b = m.add_state("b");
  m.set_arrow(a, 0, a, "0");
  m.set_arrow(a, 1, b, "1");
  m.set_arrow(b, 0, a, "1");
  m.set_arrow(b, 1, b, "0");
  return {m, a};
}

// Bi-synchronizing three-state machine exchanging the cones [0] -> [00],
// [10] -> [01], [11] -> [1].
inline InitialTransducer make_xb() {
  Transducer m(2);
  int p0 = m.add_state("p0"), p1 = m.add_state("p1"), id = m.add_state("id");
  m.set_arrow(p0, 0, id, "00");
  m.set_arrow(p0, 1, p1, "");
  m.set_arrow(p1, 0, id, "01");
  m.set_arrow(p1, 1, id, "1");
  m.set_arrow(id, 0, id, "0");
  m.set_arrow(id, 1, id, "1");
  return {m, p0};
}

// One state doubling every 0; injective but with a non-clopen image.
inline InitialTransducer make_dbl() {
  Transducer m(2);
  int d = m.add_state("d");
  m.set_arrow(d, 0, d, "00");
  m.set_arrow(d, 1, d, "1");
  return {m, d};
}

inline InitialTransducer make_identity1(int n = 2) {
  Transducer m(n);
  int i = m.add_state("i");
  for (int x = 0; x < n; ++x) m.set_arrow(i, x, i, Word(1, letter_char(x)));
  return {m, i};
}

// Three synchronous states over X_2, synchronizing at level 2: after any two
// letters the state is decided, a and c flip their letter, b copies it.
inline InitialTransducer make_sync3() {
  Transducer m(2);
  int a = m.add_state("a"), b = m.add_state("b"), c = m.add_state("c");
  m.set_arrow(a, 0, b, "1");
  m.set_arrow(a, 1, c, "0");
  m.set_arrow(b, 0, b, "0");
  m.set_arrow(b, 1, c, "1");
  m.set_arrow(c, 0, a, "1");
  m.set_arrow(c, 1, c, "0");
  return {m, a};
}

// Stays in a on 0s from a, falls into the sink b otherwise.
inline Automaton make_automaton_b() {
  Automaton a;
  a.n = 2;
  int sa = a.add_state("a"), sb = a.add_state("b");
  a.next[sa][0] = sa;
  a.next[sa][1] = sb;
  a.next[sb][0] = sb;
  a.next[sb][1] = sb;
  a.q0 = sa;
  return a;
}

// Alternates between its two states on every letter.
inline Automaton make_automaton_c() {
  Automaton a;
  a.n = 2;
  int sa = a.add_state("a"), sb = a.add_state("b");
  for (int x = 0; x < 2; ++x) {
    a.next[sa][x] = sb;
    a.next[sb][x] = sa;
  }
  a.q0 = sa;
  return a;
}

inline std::optional<InitialTransducer> builtin_machine(const std::string& name) {
  if (name == "PARITY") return make_parity();
  if (name == "XB") return make_xb();
  if (name == "DBL") return make_dbl();
  if (name == "IDENTITY1") return make_identity1();
  return std::nullopt;
}

}  // namespace tx
