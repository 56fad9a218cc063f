// Prefix exchange maps: finite bijections between maximal cone antichains,
// their group operations, and the bridge to and from transducers.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "image.hpp"
#include "invert.hpp"
#include "machine.hpp"
#include "minimize.hpp"
#include "synchronize.hpp"

namespace tx {

struct PrefixExchangeMap {
  int n = 2;
  std::vector<std::pair<Word, Word>> table;  // reduced, sorted by domain word
};

namespace detail {

// Replaces every block of n sibling pairs (u x -> v x) by the single pair
// (u -> v), until no block remains.
inline void reduce_table(int n, std::vector<std::pair<Word, Word>>& table) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Word, Word> map(table.begin(), table.end());
    for (const auto& [d, r] : map) {
      if (d.empty()) continue;
      Word du = d.substr(0, d.size() - 1);
      if (r.empty() || d.back() != r.back()) continue;
      Word ru = r.substr(0, r.size() - 1);
      bool block = true;
      for (int x = 0; x < n && block; ++x) {
        auto it = map.find(du + letter_char(x));
        block = it != map.end() && it->second == ru + letter_char(x);
      }
      if (block) {
        for (int x = 0; x < n; ++x) map.erase(du + letter_char(x));
        map.emplace(du, ru);
        changed = true;
        break;
      }
    }
    if (changed) table.assign(map.begin(), map.end());
  }
  std::sort(table.begin(), table.end());
}

}  // namespace detail

inline PrefixExchangeMap make_prefix_map(int n, std::vector<std::pair<Word, Word>> pairs) {
  std::vector<Word> dom, rng;
  for (const auto& [d, r] : pairs) {
    dom.push_back(d);
    rng.push_back(r);
  }
  require(is_maximal_antichain(make_antichain(n, dom)), Errc::invalid_input,
          "domain words do not tile the space");
  require(is_maximal_antichain(make_antichain(n, rng)), Errc::invalid_input,
          "range words do not tile the space");
  detail::reduce_table(n, pairs);
  return {n, std::move(pairs)};
}

inline PrefixExchangeMap identity_map(int n) { return make_prefix_map(n, {{Word(), Word()}}); }

// Exchanges the cones of two incomparable words and fixes everything else.
inline PrefixExchangeMap small_swap(int n, const Word& alpha, const Word& beta) {
  require(!alpha.empty() && !beta.empty() && !comparable(alpha, beta), Errc::invalid_input,
          "swap needs two incomparable nonempty words");
  std::vector<std::pair<Word, Word>> pairs{{alpha, beta}, {beta, alpha}};
  for (const Word& w : antichain_complement(make_antichain(n, {alpha, beta})).words)
    pairs.push_back({w, w});
  return make_prefix_map(n, std::move(pairs));
}

inline Word pm_apply_prefix(const PrefixExchangeMap& v, const Word& w, bool* hit = nullptr) {
  for (const auto& [d, r] : v.table)
    if (is_prefix(d, w)) {
      if (hit) *hit = true;
      return r + drop_prefix(d, w);
    }
  if (hit) *hit = false;
  return w;
}

inline EpWord pm_apply(const PrefixExchangeMap& v, const EpWord& x) {
  std::size_t deepest = 0;
  for (const auto& [d, r] : v.table) deepest = std::max(deepest, d.size());
  Word head = x.head(deepest);
  for (const auto& [d, r] : v.table)
    if (is_prefix(d, head)) {
      EpWord rest = x.shifted(d.size());
      return EpWord(r + rest.pre, rest.per).canonical();
    }
  fail(Errc::internal_invariant, "maximal antichain failed to match a word");
}

// Composition in application order: first v, then w.
inline PrefixExchangeMap pm_compose(const PrefixExchangeMap& v, const PrefixExchangeMap& w) {
  require(v.n == w.n, Errc::invalid_input, "composing maps over different alphabets");
  std::vector<std::pair<Word, Word>> pairs;
  std::vector<std::pair<Word, Word>> todo(v.table.begin(), v.table.end());
  while (!todo.empty()) {
    auto [d, r] = todo.back();
    todo.pop_back();
    bool matched = false;
    for (const auto& [wd, wr] : w.table)
      if (is_prefix(wd, r)) {
        pairs.push_back({d, wr + drop_prefix(wd, r)});
        matched = true;
        break;
      }
    if (!matched)
      for (int x = 0; x < v.n; ++x) todo.push_back({d + letter_char(x), r + letter_char(x)});
  }
  return make_prefix_map(v.n, std::move(pairs));
}

inline PrefixExchangeMap pm_invert(const PrefixExchangeMap& v) {
  std::vector<std::pair<Word, Word>> pairs;
  for (const auto& [d, r] : v.table) pairs.push_back({r, d});
  return make_prefix_map(v.n, std::move(pairs));
}

// Minimal machine realizing the map: a domain tree that copies after the
// exchanged prefix has been emitted.
inline InitialTransducer to_transducer(const PrefixExchangeMap& v) {
  Transducer m(v.n);
  if (v.table.size() == 1 && v.table[0].first.empty()) {
    int sink = m.add_state("i");
    for (int x = 0; x < v.n; ++x) m.set_arrow(sink, x, sink, Word(1, letter_char(x)));
    return {std::move(m), sink};
  }

  std::map<Word, int> node;
  int root = m.add_state("r");
  node.emplace(Word(), root);
  std::map<Word, Word> table(v.table.begin(), v.table.end());

  std::vector<Word> stack{Word()};
  while (!stack.empty()) {
    Word u = stack.back();
    stack.pop_back();
    for (int x = 0; x < v.n; ++x) {
      Word ux = u + letter_char(x);
      if (!node.count(ux) && !table.count(ux)) {
        node.emplace(ux, m.add_state("r" + ux));
        stack.push_back(ux);
      }
    }
  }
  int sink = m.add_state("i");
  for (int x = 0; x < v.n; ++x) m.set_arrow(sink, x, sink, Word(1, letter_char(x)));
  for (const auto& [u, id] : node)
    for (int x = 0; x < v.n; ++x) {
      Word ux = u + letter_char(x);
      auto leaf = table.find(ux);
      if (leaf != table.end())
        m.set_arrow(id, x, sink, leaf->second);
      else
        m.set_arrow(id, x, node.at(ux), Word());
    }

  Minimized min = minimize({std::move(m), root});
  require(min.preamble.empty(), Errc::internal_invariant, "prefix map machine grew a preamble");
  Transducer c = core(min.machine.m);
  require(c.size() == 1 && is_identity_machine({c, 0}), Errc::internal_invariant,
          "prefix map machine lost its copying core");
  return min.machine;
}

// Reads a prefix map back off a machine that settles into a copying state:
// minimize, find the synchronizing level, check the core is the identity, and
// tabulate the outputs of the level-length words.
inline std::optional<PrefixExchangeMap> from_transducer(const InitialTransducer& t, int kmax = 16,
                                                        const Budget& b = {}) {
  Minimized min = minimize(t);
  if (!min.preamble.empty()) return std::nullopt;
  const Transducer& m = min.machine.m;
  auto level = synchronizing_level(m, kmax);
  if (!level) return std::nullopt;
  Transducer c = core(m, kmax);
  if (c.size() != 1 || !is_identity_machine({c, 0})) return std::nullopt;

  std::vector<std::pair<Word, Word>> pairs;
  std::vector<Word> outs;
  for (const Word& alpha : all_words(m.n, *level)) {
    Word beta = evaluate_prefix(m, min.machine.q0, alpha).first;
    pairs.push_back({alpha, beta});
    outs.push_back(beta);
  }
  for (std::size_t i = 0; i < outs.size(); ++i)
    for (std::size_t j = i + 1; j < outs.size(); ++j)
      if (comparable(outs[i], outs[j])) return std::nullopt;
  if (!is_maximal_antichain(make_antichain(m.n, outs))) return std::nullopt;
  return make_prefix_map(m.n, std::move(pairs));
}

struct MembershipWitness {
  Word domain, range;
  int domain_class = 0, range_class = 0;
};

struct MembershipVerdict {
  bool member = true;
  std::vector<MembershipWitness> witnesses;
};

// A prefix map respects the collapsed relation exactly when every table pair
// lands its two words in the same state class.
inline MembershipVerdict preserves_relation(const PrefixExchangeMap& v,
                                            const CollapsedAutomaton& c) {
  require(v.n == c.original.n, Errc::invalid_input, "map and relation over different alphabets");
  MembershipVerdict verdict;
  for (const auto& [d, r] : v.table) {
    int cd = relation_classify(c, d);
    int cr = relation_classify(c, r);
    if (cd != cr) {
      verdict.member = false;
      verdict.witnesses.push_back({d, r, cd, cr});
    }
  }
  return verdict;
}

}  // namespace tx
