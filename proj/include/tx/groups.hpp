// Conjugation of prefix maps by synchronizing machines, completion maps over
// partially invertible machines, block permutation groups, contraction, and
// flexibility witnesses.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "image.hpp"
#include "invert.hpp"
#include "machine.hpp"
#include "minimize.hpp"
#include "prefix_map.hpp"
#include "synchronize.hpp"

namespace tx {

// ---------- conjugation into the smaller group ----------

// v conjugated by T: the machine for T^-1 . v . T, read back as a prefix map.
inline PrefixExchangeMap conjugate_subgroup(const PrefixExchangeMap& v,
                                            const InitialTransducer& t, int kmax = 16,
                                            const Budget& b = {}) {
  require(classify_synchronicity(t, kmax, b) != Synchronicity::not_synchronizing,
          Errc::not_synchronizing, "conjugation needs a synchronizing machine");
  InitialTransducer s = invert(t, b);
  InitialTransducer composed = product(product(s, to_transducer(v)), t);
  auto w = from_transducer(composed, kmax, b);
  require(w.has_value(), Errc::internal_invariant,
          "conjugate of a prefix map failed to read back as a prefix map");
  return *w;
}

// ---------- completion maps ----------

struct CompletionLeaf {
  Word eta;   // domain cone
  Word rho;   // emitted prefix
  int state;  // machine state finishing the tail
};

struct CompletionMap {
  int n = 2;
  std::string machine_name;
  Transducer machine;
  std::vector<CompletionLeaf> leaves;  // sorted by eta; etas tile the space
};

struct ViableVerdict {
  bool valid = false;
  bool effective = false;
};

// A combination (rho_i, p_i) is valid when the shifted images tile the whole
// space, and effective when the leaf count fits a complete tree on X_n.
inline ViableVerdict validate_viable(const Transducer& u,
                                     const std::vector<std::pair<Word, int>>& leaves,
                                     const Budget& b = {}) {
  require(!leaves.empty(), Errc::invalid_input, "a combination needs at least one leaf");
  ViableVerdict verdict;
  verdict.effective =
      leaves.size() % std::max(1, u.n - 1) == 1 % std::max(1, u.n - 1);
  std::vector<Word> cover;
  for (const auto& [rho, p] : leaves) {
    require(p >= 0 && p < u.size(), Errc::invalid_input, "leaf state out of range");
    for (const Word& w : image_antichain(u, p, b).words) cover.push_back(rho + w);
  }
  for (std::size_t i = 0; i < cover.size(); ++i)
    for (std::size_t j = i + 1; j < cover.size(); ++j)
      if (comparable(cover[i], cover[j])) return verdict;  // overlap: not a tiling
  verdict.valid = is_maximal_antichain(make_antichain(u.n, cover));
  return verdict;
}

inline CompletionMap make_completion(int n, std::string machine_name, Transducer machine,
                                     std::vector<CompletionLeaf> leaves, const Budget& b = {}) {
  std::sort(leaves.begin(), leaves.end(),
            [](const CompletionLeaf& a, const CompletionLeaf& c) { return a.eta < c.eta; });
  std::vector<Word> etas;
  std::vector<std::pair<Word, int>> pairs;
  for (const CompletionLeaf& l : leaves) {
    etas.push_back(l.eta);
    pairs.push_back({l.rho, l.state});
  }
  require(is_maximal_antichain(make_antichain(n, etas)), Errc::invalid_input,
          "completion domain words do not tile the space");
  ViableVerdict v = validate_viable(machine, pairs, b);
  require(v.valid, Errc::not_viable, "completion ranges do not tile the space");
  return {n, std::move(machine_name), std::move(machine), std::move(leaves)};
}

inline EpWord completion_evaluate(const CompletionMap& h, const EpWord& x) {
  std::size_t deepest = 0;
  for (const CompletionLeaf& l : h.leaves) deepest = std::max(deepest, l.eta.size());
  Word head = x.head(deepest);
  for (const CompletionLeaf& l : h.leaves)
    if (is_prefix(l.eta, head)) {
      EpWord tail = evaluate_ep(h.machine, l.state, x.shifted(l.eta.size()));
      return EpWord(l.rho + tail.pre, tail.per).canonical();
    }
  fail(Errc::internal_invariant, "completion domain failed to match a word");
}

// The completion as a single machine: a domain tree feeding the embedded one,
// which keeps its low state indices unchanged.
inline InitialTransducer completion_to_transducer(const CompletionMap& h) {
  Transducer m = h.machine;
  std::map<Word, int> node;
  std::map<Word, const CompletionLeaf*> leaf_at;
  for (const CompletionLeaf& l : h.leaves) leaf_at.emplace(l.eta, &l);

  if (h.leaves.size() == 1 && h.leaves[0].eta.empty()) {
    const CompletionLeaf& l = h.leaves[0];
    int start = m.add_state("h");
    for (int x = 0; x < m.n; ++x) {
      int to = m.next[l.state][x];
      m.set_arrow(start, x, to, l.rho + m.out[l.state][x]);
    }
    return {std::move(m), start};
  }

  std::vector<Word> stack{Word()};
  node.emplace(Word(), m.add_state("h"));
  while (!stack.empty()) {
    Word u = stack.back();
    stack.pop_back();
    for (int x = 0; x < m.n; ++x) {
      Word ux = u + letter_char(x);
      if (!node.count(ux) && !leaf_at.count(ux)) {
        node.emplace(ux, m.add_state("h" + ux));
        stack.push_back(ux);
      }
    }
  }
  for (const auto& [u, id] : node)
    for (int x = 0; x < m.n; ++x) {
      Word ux = u + letter_char(x);
      auto leaf = leaf_at.find(ux);
      if (leaf != leaf_at.end())
        m.set_arrow(id, x, leaf->second->state, leaf->second->rho);
      else
        m.set_arrow(id, x, node.at(ux), Word());
    }
  return {std::move(m), node.at(Word())};
}

// Applies h then g by refining h's leaves until the emitted prefix settles
// inside one of g's leaves; states pair up in the product machine.
inline CompletionMap completion_compose(const CompletionMap& h, const CompletionMap& g,
                                        const Budget& b = {}) {
  require(h.n == g.n, Errc::invalid_input, "composing completions over different alphabets");
  Transducer prod = product(h.machine, g.machine);
  std::vector<CompletionLeaf> leaves;
  long long steps = 0;

  struct Pending {
    Word eta, rho;
    int state;
  };
  std::vector<Pending> todo;
  for (const CompletionLeaf& l : h.leaves) todo.push_back({l.eta, l.rho, l.state});
  while (!todo.empty()) {
    require(++steps <= b.max_configurations, Errc::budget_exceeded,
            "completion composition exceeded the configuration budget");
    Pending cur = todo.back();
    todo.pop_back();
    bool settled = false;
    for (const CompletionLeaf& gl : g.leaves)
      if (is_prefix(gl.eta, cur.rho)) {
        auto [emitted, gstate] = evaluate_prefix(g.machine, gl.state, drop_prefix(gl.eta, cur.rho));
        leaves.push_back(
            {cur.eta, gl.rho + emitted, cur.state * g.machine.size() + gstate});
        settled = true;
        break;
      }
    if (settled) continue;
    for (int x = 0; x < h.n; ++x)
      todo.push_back({cur.eta + letter_char(x), cur.rho + h.machine.out[cur.state][x],
                      h.machine.next[cur.state][x]});
  }
  return make_completion(h.n, h.machine_name + "\xc2\xb7" + g.machine_name, std::move(prod),
                         std::move(leaves), b);
}

// ---------- conjugation into the larger group ----------

// v conjugated by T^-1, presented as a completion over TS = product(T, S):
// descend T . v . S until the middle machine has finished exchanging.
inline CompletionMap conjugate_overgroup(const PrefixExchangeMap& v, const InitialTransducer& t,
                                         const std::string& name = "TS", int kmax = 16,
                                         const Budget& b = {}) {
  require(classify_synchronicity(t, kmax, b) != Synchronicity::not_synchronizing,
          Errc::not_synchronizing, "conjugation needs a synchronizing machine");
  InitialTransducer s = invert(t, b);
  InitialTransducer bv = to_transducer(v);
  InitialTransducer u3 = product(product(t, bv), s);
  Transducer ts = product(t.m, s.m);

  // Identity states of the middle machine: copy forever.
  auto middle_done = [&](int mid) {
    for (int x = 0; x < bv.m.n; ++x)
      if (bv.m.next[mid][x] != mid || bv.m.out[mid][x] != Word(1, letter_char(x))) return false;
    return true;
  };

  std::vector<CompletionLeaf> leaves;
  struct Node {
    Word eta, rho;
    int state;
  };
  std::vector<Node> stack{{Word(), Word(), u3.q0}};
  long long steps = 0;
  while (!stack.empty()) {
    require(++steps <= b.max_configurations, Errc::budget_exceeded,
            "conjugation descent exceeded the configuration budget");
    Node cur = stack.back();
    stack.pop_back();
    int s_part = cur.state % s.m.size();
    int tb = cur.state / s.m.size();
    int b_part = tb % bv.m.size();
    int t_part = tb / bv.m.size();
    if (middle_done(b_part)) {
      leaves.push_back({cur.eta, cur.rho, t_part * s.m.size() + s_part});
      continue;
    }
    for (int x = 0; x < t.m.n; ++x)
      stack.push_back(
          {cur.eta + letter_char(x), cur.rho + u3.m.out[cur.state][x], u3.m.next[cur.state][x]});
  }
  return make_completion(t.m.n, name, std::move(ts), std::move(leaves), b);
}

// Inverse of a completion via the partial inverse of its machine: invert the
// completion's own machine and read its leaves off the inverse states.
inline CompletionMap completion_invert(const CompletionMap& h, const Budget& b = {}) {
  InitialTransducer bh = completion_to_transducer(h);
  invert(bh, b);  // certifies h is a homeomorphism before any reading starts
  InverseMachine pinv = partial_inverse(h.machine, b);

  // Match an inverse-of-completion state to a partial-inverse state, first by
  // its (pending word, base) label, then by behaviour.
  std::map<std::pair<Word, int>, int> by_label;
  for (int i = 0; i < pinv.m.size(); ++i)
    by_label.emplace(std::make_pair(pinv.labels[i].w, pinv.labels[i].base), i);

  int embedded = h.machine.size();  // states below this index belong to h.machine
  std::vector<CompletionLeaf> leaves;
  struct Node {
    Word eta, rho;
    int state;
  };
  InverseMachine rebuilt = detail::inverse_closure(bh.m, {{Word(), bh.q0}}, b);
  std::vector<Node> stack{{Word(), Word(), 0}};
  long long steps = 0;
  while (!stack.empty()) {
    require(++steps <= b.max_configurations, Errc::budget_exceeded,
            "completion inversion exceeded the configuration budget");
    Node cur = stack.back();
    stack.pop_back();
    const InverseState& lab = rebuilt.labels[cur.state];
    if (lab.base < embedded) {
      auto it = by_label.find({lab.w, lab.base});
      int target = -1;
      if (it != by_label.end()) {
        target = it->second;
      } else {
        for (int i = 0; i < pinv.m.size() && target < 0; ++i)
          if (omega_equal({rebuilt.m, cur.state}, {pinv.m, i})) target = i;
        require(target >= 0, Errc::internal_invariant,
                "inverse leaf state missing from the partial inverse");
      }
      leaves.push_back({cur.eta, cur.rho, target});
      continue;
    }
    for (int x = 0; x < rebuilt.m.n; ++x)
      stack.push_back({cur.eta + letter_char(x), cur.rho + rebuilt.m.out[cur.state][x],
                       rebuilt.m.next[cur.state][x]});
  }
  return make_completion(h.n, h.machine_name + "'", pinv.m, std::move(leaves), b);
}

// ---------- block permutation groups ----------

struct BlockPermutationGroup {
  int block_length = 0;
  std::vector<std::vector<int>> generators;  // permutations of X_n^block_length
  std::vector<std::vector<int>> elements;
  long long order = 0;
};

// The group generated by the states of a machine whose states all permute the
// length-k blocks (products of a synchronous machine with its inverse do).
inline BlockPermutationGroup block_group_of(const Transducer& ts, int k,
                                            long long max_order = 1 << 20) {
  std::vector<Word> blocks = all_words(ts.n, k);
  std::map<Word, int> block_id;
  for (std::size_t i = 0; i < blocks.size(); ++i) block_id.emplace(blocks[i], i);

  std::set<std::vector<int>> gens;
  for (int q = 0; q < ts.size(); ++q) {
    std::vector<int> perm(blocks.size());
    std::vector<char> hit(blocks.size(), 0);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      Word image = evaluate_prefix(ts, q, blocks[i]).first;
      auto it = block_id.find(image);
      require(it != block_id.end() && !hit[it->second], Errc::internal_invariant,
              "state does not permute the blocks");
      perm[i] = it->second;
      hit[it->second] = 1;
    }
    gens.insert(std::move(perm));
  }

  BlockPermutationGroup g;
  g.block_length = k;
  g.generators.assign(gens.begin(), gens.end());
  std::set<std::vector<int>> closure(gens.begin(), gens.end());
  require(static_cast<long long>(closure.size()) <= max_order, Errc::order_budget_exceeded,
          "group closure exceeded the order budget");
  std::vector<std::vector<int>> frontier(gens.begin(), gens.end());
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& gen : g.generators) {
        std::vector<int> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = gen[a[i]];
        if (closure.insert(c).second) {
          require(static_cast<long long>(closure.size()) <= max_order,
                  Errc::order_budget_exceeded, "group closure exceeded the order budget");
          next.push_back(std::move(c));
        }
      }
    frontier = std::move(next);
  }
  g.elements.assign(closure.begin(), closure.end());
  g.order = static_cast<long long>(closure.size());
  return g;
}

// The group generated by the states of product(T, invert(T)) acting on blocks
// of length equal to T's synchronizing level.
inline BlockPermutationGroup automaton_group_ts(const InitialTransducer& t,
                                                long long max_order = 1 << 20,
                                                const Budget& b = {}) {
  require(t.m.is_synchronous(), Errc::invalid_input, "block action needs a synchronous machine");
  auto level = synchronizing_level(t.m);
  require(level.has_value(), Errc::not_synchronizing, "block action needs synchronization");
  InitialTransducer s = invert(t, b);
  Transducer ts = product(t.m, s.m);
  return block_group_of(ts, std::max(1, *level), max_order);
}

// ---------- contraction ----------

struct ContractingReport {
  enum class Verdict { contracting_to_depth, counterexample, inconclusive } verdict;
  int depth = 0;                  // greatest depth any product state needed
  std::string counter_product;    // for counterexamples: which product
  std::string counter_state;      //   and which state failed
};

// Products of up to L factors from {T, partial_inverse(T)} must, after
// reading every length-D word, sit in a state behaving like a state of T.
inline ContractingReport contracting_check(const Transducer& t, int max_len = 3, int depth = 4,
                                           const Budget& b = {}) {
  InverseMachine tp = partial_inverse(t, b);
  std::set<std::string> t_sigs;
  for (int q = 0; q < t.size(); ++q) t_sigs.insert(canonical_signature({t, q}));
  std::map<int, char> sig_cache;  // per current product; cleared when one is built
  auto behaves_like_t = [&](const Transducer& m, int q) {
    auto it = sig_cache.find(q);
    if (it != sig_cache.end()) return it->second != 0;
    bool ok = t_sigs.count(canonical_signature({m, q})) != 0;
    sig_cache[q] = ok ? 1 : 0;
    return ok;
  };

  ContractingReport report;
  report.verdict = ContractingReport::Verdict::contracting_to_depth;
  long long checked = 0;

  std::vector<std::pair<std::string, Transducer>> frontier{{"", Transducer(t.n)}};
  frontier[0].second.add_state("e");
  for (int x = 0; x < t.n; ++x) frontier[0].second.set_arrow(0, x, 0, Word(1, letter_char(x)));

  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::pair<std::string, Transducer>> next;
    for (const auto& [desc, m] : frontier)
      for (int choice = 0; choice < 2; ++choice) {
        const Transducer& factor = choice == 0 ? t : tp.m;
        std::string name = desc + (choice == 0 ? "T" : "T'");
        Transducer prod = product(m, factor);
        sig_cache.clear();
        for (int q = 0; q < prod.size(); ++q) {
          if (++checked > b.max_configurations) {
            report.verdict = ContractingReport::Verdict::inconclusive;
            return report;
          }
          int need = -1;
          for (int d = 0; d <= depth && need < 0; ++d) {
            bool all = true;
            for (const Word& w : all_words(prod.n, d))
              if (!behaves_like_t(prod, evaluate_prefix(prod, q, w).second)) {
                all = false;
                break;
              }
            if (all) need = d;
          }
          if (need < 0) {
            report.verdict = ContractingReport::Verdict::counterexample;
            report.counter_product = name;
            report.counter_state = prod.names[q];
            return report;
          }
          report.depth = std::max(report.depth, need);
        }
        next.push_back({name, std::move(prod)});
      }
    frontier = std::move(next);
  }
  return report;
}

// ---------- flexibility of the relation subgroups ----------

// A prefix map sending the cones of e1 strictly inside the cones of e2.
inline PrefixExchangeMap flexibility_witness(const ConeAntichain& e1, const ConeAntichain& e2) {
  require(e1.n == e2.n, Errc::invalid_input, "witness across different alphabets");
  ConeAntichain a = canonical_antichain(e1);
  ConeAntichain c = canonical_antichain(e2);
  require(!a.words.empty() && !c.words.empty(), Errc::invalid_input,
          "witness needs nonempty clopen sets");
  require(!is_maximal_antichain(a) && !is_maximal_antichain(c), Errc::invalid_input,
          "witness needs proper clopen sets");
  int n = a.n;

  Word w = c.words.front();
  for (const Word& cand : c.words)
    if (cand.size() < w.size() || (cand.size() == w.size() && cand < w)) w = cand;

  std::vector<std::pair<Word, Word>> pairs;
  std::vector<Word> targets;
  Word tail;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    targets.push_back(w + tail + letter_char(0));
    pairs.push_back({a.words[i], targets.back()});
    tail += letter_char(n - 1);
  }

  std::vector<Word> dom_rest = antichain_complement(a).words;
  std::vector<Word> rng_rest = antichain_complement(make_antichain(n, targets)).words;
  auto split_least = [&](std::vector<Word>& side) {
    std::sort(side.begin(), side.end());
    Word least = side.front();
    side.erase(side.begin());
    for (int x = 0; x < n; ++x) side.push_back(least + letter_char(x));
    std::sort(side.begin(), side.end());
  };
  while (dom_rest.size() < rng_rest.size()) split_least(dom_rest);
  while (rng_rest.size() < dom_rest.size()) split_least(rng_rest);
  std::sort(dom_rest.begin(), dom_rest.end());
  std::sort(rng_rest.begin(), rng_rest.end());
  for (std::size_t i = 0; i < dom_rest.size(); ++i) pairs.push_back({dom_rest[i], rng_rest[i]});
  return make_prefix_map(n, std::move(pairs));
}

// ---------- local agreement ----------

// Does h agree with each listed completion on that completion's cone, for all
// eventually periodic words with head and period bounded by depth?
inline bool local_agreement_check(const CompletionMap& h,
                                  const std::vector<std::pair<Word, CompletionMap>>& cover,
                                  int depth = 6) {
  std::vector<Word> cones;
  for (const auto& [u, g] : cover) cones.push_back(u);
  require(is_maximal_antichain(make_antichain(h.n, cones)), Errc::invalid_input,
          "agreement cover must tile the space");
  for (const auto& [u, g] : cover)
    for (int hl = 0; hl <= depth; ++hl)
      for (const Word& z : all_words(h.n, hl))
        for (int pl = 1; pl + hl <= depth; ++pl)
          for (const Word& p : all_words(h.n, pl)) {
            EpWord x(u + z, p);
            if (completion_evaluate(h, x) != completion_evaluate(g, x)) return false;
          }
  return true;
}

}  // namespace tx
