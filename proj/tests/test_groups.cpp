// Conjugation in both directions, completion maps, block permutation groups,
// contraction, flexibility witnesses, and local agreement.
#include "catch2/catch_amalgamated.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "tx/tx.hpp"

using namespace tx;

namespace {

Transducer parity_pair() { return product(make_parity().m, invert(make_parity()).m); }

InitialTransducer letter_flip() {
  Transducer m(2);
  m.add_state("f");
  m.set_arrow(0, 0, 0, Word("1"));
  m.set_arrow(0, 1, 0, Word("0"));
  return {m, 0};
}

CompletionMap flip_completion() {
  return make_completion(2, "TS", parity_pair(), {{Word(), Word(), 1}});
}

CompletionMap swapflip_completion() {
  return make_completion(2, "TS", parity_pair(),
                         {{Word("0"), Word("1"), 1}, {Word("1"), Word("0"), 1}});
}

CompletionMap mixing_completion() {
  return make_completion(2, "TS", parity_pair(),
                         {{Word("0"), Word("10"), 1},
                          {Word("10"), Word("11"), 0},
                          {Word("11"), Word("0"), 2}});
}

std::vector<EpWord> probes(int bound) {
  std::vector<EpWord> out;
  for (int lu = 0; lu + 1 <= bound; ++lu)
    for (const Word& u : all_words(2, lu))
      for (int lv = 1; lu + lv <= bound; ++lv)
        for (const Word& v : all_words(2, lv)) out.push_back(EpWord(u, v));
  return out;
}

}  // namespace

TEST_CASE("conjugating a prefix map down into the relation subgroup") {
  InitialTransducer t = make_parity();
  PrefixExchangeMap w = conjugate_subgroup(small_swap(2, Word("0"), Word("1")), t);
  CHECK(w.table == (std::vector<std::pair<Word, Word>>{{Word("00"), Word("11")},
                                                       {Word("01"), Word("10")},
                                                       {Word("10"), Word("01")},
                                                       {Word("11"), Word("00")}}));

  CollapsedAutomaton rel = collapse(forget_outputs(invert(t).m));
  std::mt19937_64 rng(0x00d5eed7);
  for (int i = 0; i < 15; ++i) {
    PrefixExchangeMap v = gen::swap(rng, 2, 4);
    PrefixExchangeMap conj = conjugate_subgroup(v, t);
    CHECK(preserves_relation(conj, rel).member);
    // conjugation respects composition: (vv)^T = v^T v^T
    PrefixExchangeMap twice = conjugate_subgroup(pm_compose(v, v), t);
    CHECK(twice.table == pm_compose(conj, conj).table);
  }

  try {
    conjugate_subgroup(small_swap(2, Word("0"), Word("1")), invert(t));
    FAIL("expected a refusal on a machine that does not synchronize");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_synchronizing);
  }
}

TEST_CASE("conjugating a prefix map up into the overgroup") {
  InitialTransducer t = make_parity();
  InitialTransducer s = invert(t);

  CompletionMap h = conjugate_overgroup(small_swap(2, Word("0"), Word("1")), t);
  REQUIRE(h.leaves.size() == 2);
  CHECK(h.leaves[0].eta == Word("0"));
  CHECK(h.leaves[0].rho == Word("1"));
  CHECK(h.leaves[0].state == 1);
  CHECK(h.leaves[1].eta == Word("1"));
  CHECK(h.leaves[1].rho == Word("0"));
  CHECK(h.leaves[1].state == 2);
  for (const CompletionLeaf& l : h.leaves)
    CHECK(omega_equal({h.machine, l.state}, letter_flip()));

  CompletionMap trivial = conjugate_overgroup(identity_map(2), t);
  REQUIRE(trivial.leaves.size() == 1);
  CHECK(trivial.leaves[0].eta == Word());
  CHECK(trivial.leaves[0].rho == Word());
  CHECK(trivial.leaves[0].state == 0);

  std::mt19937_64 rng(0x00d5eed8);
  std::vector<EpWord> xs = probes(6);
  for (int i = 0; i < 10; ++i) {
    PrefixExchangeMap v = gen::swap(rng, 2, 3);
    CompletionMap g = conjugate_overgroup(v, t);
    for (const EpWord& x : xs) {
      EpWord direct = evaluate_ep(s.m, s.q0, pm_apply(v, evaluate_ep(t.m, t.q0, x)));
      CHECK(completion_evaluate(g, x) == direct);
    }
  }

  // relation-preserving maps conjugate back down to plain prefix maps
  CollapsedAutomaton rel = collapse(forget_outputs(s.m));
  for (int i = 0; i < 10; ++i) {
    PrefixExchangeMap v = gen::preserving_map(rng, rel, 4);
    CompletionMap g = conjugate_overgroup(v, t);
    CHECK(from_transducer(completion_to_transducer(g)).has_value());
  }
}

TEST_CASE("viable combinations of emitted prefixes and states") {
  Transducer ts = parity_pair();
  ViableVerdict one = validate_viable(ts, {{Word(), 0}});
  CHECK(one.valid);
  CHECK(one.effective);

  ViableVerdict two = validate_viable(ts, {{Word("0"), 0}, {Word("1"), 1}});
  CHECK(two.valid);
  CHECK(two.effective);

  ViableVerdict overlap = validate_viable(ts, {{Word(), 0}, {Word("1"), 1}});
  CHECK_FALSE(overlap.valid);

  ViableVerdict gap = validate_viable(ts, {{Word("0"), 0}});
  CHECK_FALSE(gap.valid);

  // ternary alphabet: validity and effectiveness separate
  Transducer e3(3);
  int e = e3.add_state("e"), i = e3.add_state("i");
  e3.set_arrow(e, 0, i, Word("1"));
  e3.set_arrow(e, 1, i, Word("2"));
  e3.set_arrow(e, 2, i, Word("2"));
  for (int x = 0; x < 3; ++x) e3.set_arrow(i, x, i, Word(1, letter_char(x)));
  ViableVerdict tern = validate_viable(e3, {{Word(), e}, {Word("0"), i}});
  CHECK(tern.valid);
  CHECK_FALSE(tern.effective);
  ViableVerdict tern3 = validate_viable(e3, {{Word("0"), i}, {Word("1"), i}, {Word("2"), i}});
  CHECK(tern3.valid);
  CHECK(tern3.effective);

  try {
    make_completion(2, "TS", ts, {{Word("0"), Word(), 0}, {Word("1"), Word("1"), 1}});
    FAIL("expected overlapping ranges to be rejected");
  } catch (const Error& e2) {
    CHECK(e2.code() == Errc::not_viable);
  }
}

TEST_CASE("completions evaluate, compose, and invert") {
  CompletionMap flip = flip_completion();
  CHECK(completion_evaluate(flip, EpWord(Word(), Word("01"))) == EpWord(Word(), Word("10")));
  CHECK(completion_evaluate(flip, EpWord(Word("1"), Word("0"))) == EpWord(Word("0"), Word("1")));

  CompletionMap twice = completion_compose(flip, flip);
  CHECK(twice.machine_name == "TS\xc2\xb7TS");
  std::vector<EpWord> xs = probes(6);
  for (const EpWord& x : xs) CHECK(completion_evaluate(twice, x) == x);
  CHECK(is_identity_machine(minimize(completion_to_transducer(twice)).machine));

  CompletionMap mix = mixing_completion();
  CompletionMap back = completion_invert(mix);
  CHECK(back.leaves.size() == 3);
  CHECK(back.leaves[0].eta == Word("0"));
  CHECK(back.leaves[1].eta == Word("10"));
  CHECK(back.leaves[2].eta == Word("11"));
  for (const EpWord& x : xs) {
    CHECK(completion_evaluate(back, completion_evaluate(mix, x)) == x);
    CHECK(completion_evaluate(mix, completion_evaluate(back, x)) == x);
  }

  // the swap-then-flip completion is the flip in disguise
  CHECK(omega_equal(completion_to_transducer(swapflip_completion()), letter_flip()));
}

TEST_CASE("block permutation groups of machine pairs") {
  BlockPermutationGroup g = automaton_group_ts(make_parity());
  CHECK(g.block_length == 1);
  CHECK(g.order == 2);
  REQUIRE(g.generators.size() == 2);
  CHECK(g.elements.size() == 2);
  CHECK(oracle::perm_closure_order(g.generators) == 2);

  // the two state behaviours are exactly the group elements
  std::set<std::string> sigs;
  Transducer ts = parity_pair();
  for (int q = 0; q < ts.size(); ++q) sigs.insert(canonical_signature({ts, q}));
  CHECK(sigs.size() == 2);

  // swapping the factors gives an isomorphic block action
  Transducer st = product(invert(make_parity()).m, make_parity().m);
  CHECK(block_group_of(st, 1).order == 2);

  BlockPermutationGroup g3 = automaton_group_ts(make_sync3());
  CHECK(g3.block_length == 2);
  CHECK(g3.order >= 1);
  CHECK(g3.order <= 24);
  CHECK(oracle::perm_closure_order(g3.generators) == static_cast<std::size_t>(g3.order));
  Transducer st3 = product(invert(make_sync3()).m, make_sync3().m);
  CHECK(block_group_of(st3, 2).order == g3.order);

  try {
    automaton_group_ts(make_parity(), 1);
    FAIL("expected the order budget to stop the closure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::order_budget_exceeded);
  }
  try {
    automaton_group_ts(invert(make_parity()));
    FAIL("expected a refusal on a machine that does not synchronize");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_synchronizing);
  }
  try {
    automaton_group_ts(make_xb());
    FAIL("expected a refusal on a machine that is not synchronous");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("contraction of products with partial inverses") {
  ContractingReport ts = contracting_check(parity_pair(), 3, 4);
  CHECK(ts.verdict == ContractingReport::Verdict::contracting_to_depth);
  CHECK(ts.depth <= 2);

  Transducer st = product(invert(make_parity()).m, make_parity().m);
  ContractingReport str = contracting_check(st, 3, 4);
  CHECK(str.verdict == ContractingReport::Verdict::contracting_to_depth);

  ContractingReport zr = contracting_check(letter_flip().m, 2, 2);
  CHECK(zr.verdict == ContractingReport::Verdict::counterexample);
  CHECK(zr.counter_product == "TT");

  try {
    contracting_check(make_dbl().m);
    FAIL("expected the partial inverse to give up");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
}

TEST_CASE("flexibility witnesses push one clopen set inside another") {
  PrefixExchangeMap w1 = flexibility_witness(make_antichain(2, {Word("0")}),
                                             make_antichain(2, {Word("1")}));
  CHECK(w1.table == (std::vector<std::pair<Word, Word>>{
                        {Word("0"), Word("10")}, {Word("10"), Word("0")}, {Word("11"), Word("11")}}));

  PrefixExchangeMap w2 = flexibility_witness(make_antichain(2, {Word("0")}),
                                             make_antichain(2, {Word("0")}));
  CHECK(w2.table == (std::vector<std::pair<Word, Word>>{
                        {Word("0"), Word("00")}, {Word("10"), Word("01")}, {Word("11"), Word("1")}}));

  std::mt19937_64 rng(0x00d5eed9);
  for (int i = 0; i < 20; ++i) {
    std::vector<Word> a = gen::antichain(rng, 2, 3);
    std::vector<Word> b = gen::antichain(rng, 2, 3);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    a.pop_back();  // drop a cone so both sets are proper
    b.pop_back();
    ConeAntichain e1 = make_antichain(2, a), e2 = make_antichain(2, b);
    PrefixExchangeMap v = flexibility_witness(e1, e2);
    for (const Word& u : canonical_antichain(e1).words) {
      Word image = pm_apply_prefix(v, u);
      bool strictly_inside = false;
      for (const Word& c : canonical_antichain(e2).words)
        strictly_inside = strictly_inside || (is_prefix(c, image) && image.size() > c.size());
      CHECK(strictly_inside);
    }
  }

  try {
    flexibility_witness(make_antichain(2, {Word("0"), Word("1")}), make_antichain(2, {Word("0")}));
    FAIL("expected a refusal on a set that is not proper");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("local agreement of completions on a cover") {
  CompletionMap flip = flip_completion();
  CHECK(local_agreement_check(flip, {{Word("0"), flip}, {Word("1"), flip}}));
  CHECK(local_agreement_check(swapflip_completion(), {{Word("0"), flip}, {Word("1"), flip}}));
  CHECK_FALSE(local_agreement_check(mixing_completion(), {{Word("0"), flip}, {Word("1"), flip}}));

  try {
    local_agreement_check(flip, {{Word("0"), flip}});
    FAIL("expected a cover that does not tile to be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}
