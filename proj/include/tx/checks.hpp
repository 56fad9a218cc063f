// Built-in reference check suite: reproduces the worked examples and property
// suites that pin down the library's behaviour end to end.
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "groups.hpp"

namespace tx {

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;  // first few failures, empty when passing
};

namespace detail {

struct Check {
  CheckResult r;
  explicit Check(std::string name) { r.name = std::move(name); }
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    r.pass = false;
    if (r.detail.size() > 300) return;  // keep the report line readable
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += what;
  }
};

// Every eventually periodic word with |preperiod| + |period| <= bound.
inline std::vector<EpWord> ep_words(int n, int bound) {
  std::vector<EpWord> out;
  for (int total = 1; total <= bound; ++total)
    for (int pre = 0; pre + 1 <= total; ++pre)
      for (const Word& u : all_words(n, pre))
        for (const Word& v : all_words(n, total - pre)) out.push_back(EpWord(u, v));
  return out;
}

inline std::vector<Word> random_antichain(std::mt19937_64& rng, int n, int splits) {
  std::vector<Word> words{Word()};
  for (int i = 0; i < splits; ++i) {
    std::size_t at = rng() % words.size();
    Word w = words[at];
    words.erase(words.begin() + at);
    for (int x = 0; x < n; ++x) words.push_back(w + letter_char(x));
  }
  return words;
}

inline PrefixExchangeMap random_swap(std::mt19937_64& rng, int n) {
  std::vector<Word> words = random_antichain(rng, n, 1 + static_cast<int>(rng() % 4));
  std::size_t i = rng() % words.size();
  std::size_t j = rng() % (words.size() - 1);
  if (j >= i) ++j;
  return small_swap(n, words[i], words[j]);
}

// A prefix map pairing words of equal ones-parity: uses one antichain for both
// sides, so the parity classes always match up.
inline PrefixExchangeMap random_parity_map(std::mt19937_64& rng) {
  std::vector<Word> words = random_antichain(rng, 2, 1 + static_cast<int>(rng() % 4));
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < words.size(); ++i) {
    int ones = 0;
    for (char c : words[i]) ones += c == '1';
    (ones % 2 ? odd : even).push_back(i);
  }
  std::vector<std::pair<Word, Word>> pairs;
  for (auto* group : {&even, &odd}) {
    std::vector<std::size_t> to = *group;
    std::shuffle(to.begin(), to.end(), rng);
    for (std::size_t i = 0; i < group->size(); ++i)
      pairs.push_back({words[(*group)[i]], words[to[i]]});
  }
  return make_prefix_map(2, std::move(pairs));
}

// Independent synchronization scan: least k at which every length-k word lands
// all states on one endpoint.
inline std::optional<int> scan_level(const Transducer& t, int kmax) {
  for (int k = 0; k <= kmax; ++k) {
    bool all = true;
    for (const Word& w : all_words(t.n, k)) {
      std::set<int> ends;
      for (int q = 0; q < t.size(); ++q) ends.insert(evaluate_prefix(t, q, w).second);
      if (ends.size() > 1) {
        all = false;
        break;
      }
    }
    if (all) return k;
  }
  return std::nullopt;
}

inline InitialTransducer make_flip(int n = 2) {
  Transducer m(n);
  m.add_state("f");
  for (int x = 0; x < n; ++x) m.set_arrow(0, x, 0, Word(1, letter_char(n - 1 - x)));
  return {m, 0};
}

inline CheckResult check_parity_relation() {
  Check c("parity machine: level, classification, inverse, word relation");
  InitialTransducer t = make_parity();
  auto level = synchronizing_level(t.m);
  c.expect(level && *level == 1, "synchronizing level is not 1");
  c.expect(classify_synchronicity(t) == Synchronicity::one_way, "classification is not one_way");

  InitialTransducer s = invert(t);
  c.expect(s.m.size() == 2, "inverse does not have 2 states");
  for (int q = 0; q < s.m.size(); ++q) {
    c.expect(s.m.next[q][0] == q, "inverse does not fix states on letter 0");
    c.expect(s.m.next[q][1] != q, "inverse does not move states on letter 1");
  }

  CollapsedAutomaton rel = collapse(forget_outputs(s.m, s.q0));
  int even_class = relation_classify(rel, Word());
  int odd_class = relation_classify(rel, Word("1"));
  c.expect(even_class != odd_class, "relation does not separate parities");
  for (int len = 0; len <= 10; ++len)
    for (const Word& w : all_words(2, len)) {
      int ones = 0;
      for (char ch : w) ones += ch == '1';
      if (relation_classify(rel, w) != (ones % 2 ? odd_class : even_class)) {
        c.expect(false, "word " + display_word(w) + " lands in the wrong class");
        break;
      }
    }
  return c.r;
}

inline CheckResult check_parity_product_group() {
  Check c("parity times inverse: state behaviour and block group of order 2");
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);
  Transducer prod = product(t.m, s.m);
  c.expect(prod.size() == 4, "product does not have 4 states");

  auto pair_index = [&](const char* tn, const char* sn) {
    return t.m.state_named(tn) * s.m.size() + s.m.state_named(sn);
  };
  InitialTransducer aa{prod, pair_index("a", "a^-1")};
  InitialTransducer bb{prod, pair_index("b", "b^-1")};
  InitialTransducer ab{prod, pair_index("a", "b^-1")};
  InitialTransducer ba{prod, pair_index("b", "a^-1")};
  c.expect(is_identity_machine(minimize(aa).machine) && minimize(aa).preamble.empty(),
           "(a,a^-1) is not the identity");
  c.expect(is_identity_machine(minimize(bb).machine) && minimize(bb).preamble.empty(),
           "(b,b^-1) is not the identity");
  c.expect(omega_equal(ab, ba), "(a,b^-1) and (b,a^-1) act differently");
  c.expect(omega_equal(ab, make_flip()), "(a,b^-1) is not the letter complement");

  BlockPermutationGroup g = automaton_group_ts(t);
  c.expect(g.order == 2, "block group order is " + std::to_string(g.order) + ", not 2");
  return c.r;
}

inline CheckResult check_inversion_round_trips() {
  Check c("inversion: certificates and pointwise round trips");
  std::vector<InitialTransducer> machines{make_parity(), make_xb()};
  std::mt19937_64 rng(0x5eed0003);
  for (int i = 0; i < 25; ++i) {
    std::vector<Word> words = random_antichain(rng, 2, 1 + static_cast<int>(rng() % 4));
    std::vector<Word> to = words;
    std::shuffle(to.begin(), to.end(), rng);
    std::vector<std::pair<Word, Word>> pairs;
    for (std::size_t k = 0; k < words.size(); ++k) pairs.push_back({words[k], to[k]});
    machines.push_back(to_transducer(make_prefix_map(2, std::move(pairs))));
  }

  std::vector<EpWord> probes = ep_words(2, 10);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    const InitialTransducer& t = machines[i];
    InitialTransducer s = invert(t);
    InverseCertificate cert = verify_inverse(t, s);
    c.expect(cert.forward_then_back_identity && cert.back_then_forward_identity,
             "certificate failed for machine " + std::to_string(i));
    for (const EpWord& x : probes) {
      EpWord y = evaluate_ep(t.m, t.q0, x);
      if (!(evaluate_ep(s.m, s.q0, y) == x)) {
        c.expect(false, "round trip failed for machine " + std::to_string(i) + " at " +
                            to_string(x));
        break;
      }
    }
  }
  return c.r;
}

inline CheckResult check_conjugation_into_relation_subgroup() {
  Check c("conjugation downward: swaps land in the relation subgroup and back");
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);
  CollapsedAutomaton rel = collapse(forget_outputs(s.m, s.q0));

  PrefixExchangeMap w = conjugate_subgroup(small_swap(2, Word("0"), Word("1")), t);
  PrefixExchangeMap expected = make_prefix_map(
      2, {{Word("00"), Word("11")}, {Word("01"), Word("10")}, {Word("10"), Word("01")},
          {Word("11"), Word("00")}});
  c.expect(w.table == expected.table, "hand-worked conjugate of the letter swap is wrong");

  std::mt19937_64 rng(0x5eed0004);
  for (int i = 0; i < 100; ++i) {
    PrefixExchangeMap v = random_swap(rng, 2);
    try {
      PrefixExchangeMap conj = conjugate_subgroup(v, t);
      if (!preserves_relation(conj, rel).member) {
        c.expect(false, "conjugate of a swap escapes the relation subgroup (trial " +
                            std::to_string(i) + ")");
        break;
      }
    } catch (const Error&) {
      c.expect(false, "conjugation failed on trial " + std::to_string(i));
      break;
    }
  }
  for (int i = 0; i < 50; ++i) {
    PrefixExchangeMap v = random_parity_map(rng);
    InitialTransducer composed = product(product(t, to_transducer(v)), s);
    if (!from_transducer(composed).has_value()) {
      c.expect(false, "preserving map fails to conjugate back (trial " + std::to_string(i) + ")");
      break;
    }
  }
  return c.r;
}

inline CheckResult check_conjugation_into_overgroup() {
  Check c("conjugation upward: completions agree with direct composition");
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);
  std::vector<EpWord> probes = ep_words(2, 10);

  CompletionMap h0 = conjugate_overgroup(small_swap(2, Word("0"), Word("1")), t);
  c.expect(h0.leaves.size() == 2, "letter-swap conjugate does not have 2 leaves");
  if (h0.leaves.size() == 2) {
    c.expect(h0.leaves[0].eta == Word("0") && h0.leaves[0].rho == Word("1") &&
                 h0.leaves[1].eta == Word("1") && h0.leaves[1].rho == Word("0"),
             "letter-swap conjugate does not swap the first letter");
    for (const CompletionLeaf& l : h0.leaves)
      c.expect(omega_equal({h0.machine, l.state}, make_flip()),
               "letter-swap conjugate does not complement the tail");
  }
  c.expect(!from_transducer(completion_to_transducer(h0)).has_value(),
           "a strictly larger element read back as a plain prefix map");

  std::mt19937_64 rng(0x5eed0005);
  for (int i = 0; i < 50; ++i) {
    PrefixExchangeMap v = random_swap(rng, 2);
    CompletionMap h = conjugate_overgroup(v, t);
    bool ok = true;
    for (const EpWord& x : probes) {
      EpWord direct = evaluate_ep(s.m, s.q0, pm_apply(v, evaluate_ep(t.m, t.q0, x)).canonical());
      if (!(completion_evaluate(h, x) == direct)) {
        c.expect(false, "completion disagrees with composition (trial " + std::to_string(i) +
                            " at " + to_string(x) + ")");
        ok = false;
        break;
      }
    }
    if (!ok) break;
  }
  return c.r;
}

inline CheckResult check_synchronization_decomposition() {
  Check c("synchronization: collapse count, scan, and pairwise decomposition");
  std::vector<InitialTransducer> sync_machines{make_parity(), make_sync3()};
  for (std::size_t i = 0; i < sync_machines.size(); ++i) {
    const InitialTransducer& t = sync_machines[i];
    auto level = synchronizing_level(t.m);
    CollapsedAutomaton col = collapse(forget_outputs(t.m, t.q0));
    c.expect(level.has_value(), "machine " + std::to_string(i) + " failed to synchronize");
    if (!level) continue;
    c.expect(*level == col.steps, "merge count disagrees with the level");
    c.expect(scan_level(t.m, 8) == level, "word scan disagrees with the level");
    InitialTransducer s = invert(t);
    for (int p = 0; p < s.m.size(); ++p)
      for (int q = 0; q < t.m.size(); ++q)
        if (!from_transducer(product({s.m, p}, {t.m, q})).has_value()) {
          c.expect(false, "pair (" + s.m.names[p] + "," + t.m.names[q] +
                              ") is not a prefix map");
          break;
        }
  }

  InitialTransducer back = invert(make_parity());
  InitialTransducer fwd = invert(back);  // two-state machine acting as parity again
  bool some_pair_fails = false;
  for (int p = 0; p < fwd.m.size() && !some_pair_fails; ++p)
    for (int q = 0; q < back.m.size() && !some_pair_fails; ++q)
      some_pair_fails = !from_transducer(product({fwd.m, p}, {back.m, q})).has_value();
  c.expect(some_pair_fails, "a non-synchronizing machine still decomposed into prefix maps");
  return c.r;
}

inline CheckResult check_contraction() {
  Check c("contraction: products of parity with its inverse settle quickly");
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);
  for (const Transducer& m : {product(t.m, s.m), product(s.m, t.m)}) {
    ContractingReport report = contracting_check(m, 3, 4);
    c.expect(report.verdict == ContractingReport::Verdict::contracting_to_depth,
             "product machine is not contracting (offender " + report.counter_product + " " +
                 report.counter_state + ")");
  }
  return c.r;
}

inline CheckResult check_partial_inverse_states() {
  Check c("partial inverses: states match inverse states, completions invert");
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);

  InverseMachine pi = partial_inverse(t.m);
  for (int i = 0; i < pi.m.size(); ++i) {
    bool matched = false;
    for (int j = 0; j < s.m.size() && !matched; ++j)
      matched = omega_equal({pi.m, i}, {s.m, j});
    c.expect(matched, "partial inverse state " + pi.m.names[i] + " matches no inverse state");
  }

  Transducer ts = product(t.m, s.m);
  InverseMachine pi_ts = partial_inverse(ts);
  for (int i = 0; i < pi_ts.m.size(); ++i)
    for (const Word& w : all_words(2, 2)) {
      int r = evaluate_prefix(pi_ts.m, i, w).second;
      bool matched = false;
      for (int j = 0; j < ts.size() && !matched; ++j) matched = omega_equal({pi_ts.m, r}, {ts, j});
      if (!matched) {
        c.expect(false, "state reached from " + pi_ts.m.names[i] + " after " + display_word(w) +
                            " matches no product state");
        break;
      }
    }

  auto state_of = [&](const char* tn, const char* sn) {
    return t.m.state_named(tn) * s.m.size() + s.m.state_named(sn);
  };
  CompletionMap h = make_completion(
      2, "TS", ts,
      {{Word("0"), Word("10"), state_of("a", "b^-1")},
       {Word("10"), Word("11"), state_of("a", "a^-1")},
       {Word("11"), Word("0"), state_of("b", "a^-1")}});
  CompletionMap hinv = completion_invert(h);
  for (const EpWord& x : ep_words(2, 10)) {
    if (!(completion_evaluate(hinv, completion_evaluate(h, x)) == x) ||
        !(completion_evaluate(h, completion_evaluate(hinv, x)) == x)) {
      c.expect(false, "completion round trip failed at " + to_string(x));
      break;
    }
  }
  return c.r;
}

inline CheckResult check_relation_membership() {
  Check c("membership: zeros-prefix relation and length-parity relation");
  CollapsedAutomaton rb = collapse(make_automaton_b());
  CollapsedAutomaton rc = collapse(make_automaton_c());

  std::mt19937_64 rng(0x5eed0009);
  for (int i = 0; i < 20; ++i) {
    Word zeros(1 + rng() % 3, '0');
    Word other = zeros;
    other.back() = '1';  // same length, incomparable, not all zeros
    for (int extra = static_cast<int>(rng() % 3); extra > 0; --extra)
      other += letter_char(static_cast<int>(rng() % 2));
    c.expect(!preserves_relation(small_swap(2, zeros, other), rb).member,
             "swap moving " + display_word(zeros) + " to " + display_word(other) +
                 " was accepted");
  }
  c.expect(preserves_relation(small_swap(2, Word("01"), Word("10")), rb).member,
           "a swap fixing the zeros class was rejected");
  c.expect(preserves_relation(identity_map(2), rb).member, "the identity was rejected");

  std::vector<PrefixExchangeMap> sibling{
      small_swap(2, Word("00"), Word("01")), small_swap(2, Word("00"), Word("10")),
      small_swap(2, Word("00"), Word("11")),
      make_prefix_map(2, {{Word("00"), Word("01")},
                          {Word("01"), Word("10")},
                          {Word("10"), Word("11")},
                          {Word("11"), Word("00")}})};
  for (std::size_t i = 0; i < sibling.size(); ++i)
    c.expect(preserves_relation(sibling[i], rc).member,
             "level-2 block map " + std::to_string(i) + " was rejected");
  for (int i = 0; i < 20; ++i) {
    Word odd = Word("1") + Word(2 * (rng() % 3), '0');
    Word even = Word("0") + Word(2 * (rng() % 3) + 1, '0');
    c.expect(!preserves_relation(small_swap(2, odd, even), rc).member,
             "swap pairing " + display_word(odd) + " with " + display_word(even) +
                 " was accepted");
  }
  return c.r;
}

inline CheckResult check_negative_controls() {
  Check c("negative controls: budget stops and refusal to synchronize");
  InitialTransducer dbl = make_dbl();
  InvertibilityReport report = is_partially_invertible(dbl.m);
  c.expect(!report.all_pass, "the doubling machine passed partial invertibility");
  bool budget_on_clopen = false;
  for (const StateInvertibility& st : report.states)
    budget_on_clopen |= st.clopen == Tri::budget_exceeded;
  c.expect(budget_on_clopen, "the doubling machine's image check did not hit the budget");

  InitialTransducer back = invert(make_parity());
  c.expect(classify_synchronicity(back) == Synchronicity::not_synchronizing,
           "the backwards parity machine claims to synchronize");
  return c.r;
}

}  // namespace detail

inline std::vector<CheckResult> run_reference_checks() {
  return {detail::check_parity_relation(),
          detail::check_parity_product_group(),
          detail::check_inversion_round_trips(),
          detail::check_conjugation_into_relation_subgroup(),
          detail::check_conjugation_into_overgroup(),
          detail::check_synchronization_decomposition(),
          detail::check_contraction(),
          detail::check_partial_inverse_states(),
          detail::check_relation_membership(),
          detail::check_negative_controls()};
}

}  // namespace tx
