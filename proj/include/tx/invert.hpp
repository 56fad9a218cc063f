// Inverse machines: full inversion of homeomorphism states and the partial
// inverse built from clopen image covers.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "image.hpp"
#include "machine.hpp"
#include "minimize.hpp"

namespace tx {

// A state of an inverse machine: "output w is still owed on top of im(base)".
struct InverseState {
  Word w;
  int base;
};

struct InverseMachine {
  Transducer m;
  std::vector<InverseState> labels;
};

struct InverseCertificate {
  bool forward_then_back_identity = false;
  bool back_then_forward_identity = false;
};

namespace detail {

inline std::string inverse_state_name(const Transducer& t, const Word& w, int base) {
  return "(" + display_word(w) + "," + t.names[base] + ")";
}

// Worklist closure of the inverse transition rule over (pending word, state)
// pairs.  Each pair must satisfy [w] inside im(base) with empty forced input;
// both are rechecked because every later step relies on them.
inline InverseMachine inverse_closure(const Transducer& t,
                                      const std::vector<InverseState>& seeds, const Budget& b) {
  InverseMachine inv;
  inv.m = Transducer(t.n);
  std::map<std::pair<Word, int>, int> index;

  auto intern = [&](const Word& w, int base) {
    auto it = index.find({w, base});
    if (it != index.end()) return it->second;
    require(inv.m.size() < b.max_configurations, Errc::budget_exceeded,
            "inverse closure exceeded the configuration budget");
    require(preimage_lcp(t, base, w, b).empty(), Errc::internal_invariant,
            "inverse state with forced input: " + inverse_state_name(t, w, base));
    require(cone_in_image(t, base, w, b), Errc::internal_invariant,
            "inverse state outside the image: " + inverse_state_name(t, w, base));
    int id = inv.m.add_state(inverse_state_name(t, w, base));
    index.emplace(std::make_pair(w, base), id);
    inv.labels.push_back({w, base});
    return id;
  };

  for (const InverseState& s : seeds) intern(s.w, s.base);
  for (int q = 0; q < inv.m.size(); ++q) {
    InverseState s = inv.labels[q];
    for (int x = 0; x < t.n; ++x) {
      Word target = s.w + letter_char(x);
      Word gamma = preimage_lcp(t, s.base, target, b);
      auto [emitted, p] = evaluate_prefix(t, s.base, gamma);
      require(is_prefix(emitted, target), Errc::internal_invariant,
              "inverse step emitted past its target");
      int to = intern(drop_prefix(emitted, target), p);
      inv.m.set_arrow(q, x, to, gamma);
    }
  }
  return inv;
}

}  // namespace detail

inline InverseCertificate verify_inverse(const InitialTransducer& t, const InitialTransducer& s) {
  Minimized fwd = minimize(product(t, s));
  Minimized bwd = minimize(product(s, t));
  InverseCertificate c;
  c.forward_then_back_identity = fwd.preamble.empty() && is_identity_machine(fwd.machine);
  c.back_then_forward_identity = bwd.preamble.empty() && is_identity_machine(bwd.machine);
  return c;
}

// Inverse of a homeomorphism: synchronous permutation machines transpose
// directly, everything else goes through the pending-word closure.
inline InitialTransducer invert(const InitialTransducer& t, const Budget& b = {}) {
  require(validate(t).ok(), Errc::invalid_input, "invert needs a validated machine");

  InitialTransducer inv;
  bool fast = t.m.is_synchronous();
  if (fast) {
    for (int q = 0; q < t.m.size() && fast; ++q) {
      std::vector<char> hit(t.m.n, 0);
      for (int x = 0; x < t.m.n; ++x) hit[letter_of(t.m.out[q][x][0])] = 1;
      for (int y = 0; y < t.m.n; ++y) fast = fast && hit[y];
    }
  }
  if (fast) {
    inv.m = Transducer(t.m.n);
    for (int q = 0; q < t.m.size(); ++q) inv.m.add_state(t.m.names[q] + "^-1");
    for (int q = 0; q < t.m.size(); ++q)
      for (int x = 0; x < t.m.n; ++x) {
        int y = letter_of(t.m.out[q][x][0]);
        inv.m.set_arrow(q, y, t.m.next[q][x], Word(1, letter_char(x)));
      }
    inv.q0 = t.q0;
  } else {
    ConeAntichain im = image_antichain(t.m, t.q0, b);
    require(im.words == std::vector<Word>{Word()}, Errc::not_surjective,
            "image of the initial state is not the whole space");
    InverseMachine built = detail::inverse_closure(t.m, {{Word(), t.q0}}, b);
    inv.m = std::move(built.m);
    inv.q0 = 0;
  }

  InverseCertificate cert = verify_inverse(t, inv);
  require(cert.forward_then_back_identity && cert.back_then_forward_identity, Errc::not_injective,
          "round trip through the inverse is not the identity");
  return inv;
}

// Def-style partial inverse: seeded from the canonical clopen cover of every
// state's image, then closed under the inverse transition rule.
inline InverseMachine partial_inverse(const Transducer& t, const Budget& b = {}) {
  InvertibilityReport rep = is_partially_invertible(t, b);
  for (const StateInvertibility& s : rep.states) {
    require(s.injective != Tri::no, Errc::invalid_input,
            "state " + t.names[s.state] + " is not injective");
    require(s.clopen != Tri::no, Errc::invalid_input,
            "state " + t.names[s.state] + " lacks a clopen image");
    require(s.injective == Tri::yes && s.clopen == Tri::yes, Errc::budget_exceeded,
            "invertibility of state " + t.names[s.state] + " did not settle in budget");
  }

  std::vector<InverseState> seeds;
  for (const StateInvertibility& s : rep.states)
    for (const Word& eta : s.image.words) {
      Word nu = preimage_lcp(t, s.state, eta, b);
      auto [emitted, p] = evaluate_prefix(t, s.state, nu);
      require(is_prefix(emitted, eta), Errc::internal_invariant,
              "image cover word behind its own preimage output");
      seeds.push_back({drop_prefix(emitted, eta), p});
    }
  return detail::inverse_closure(t, seeds, b);
}

}  // namespace tx
