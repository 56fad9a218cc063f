// Minimization: forced prefixes, complete response, class merging, canonical
// numbering, and machine equality on Cantor space.
#include "catch2/catch_amalgamated.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "tx/tx.hpp"

using namespace tx;

namespace {

// One-state machine emitting two letters per letter read, with a forced
// common first output letter.
InitialTransducer forced_head_machine() {
  Transducer m(2);
  int s = m.add_state("s");
  m.set_arrow(s, 0, s, Word("00"));
  m.set_arrow(s, 1, s, Word("01"));
  return {m, s};
}

bool agree_up_to(const InitialTransducer& a, const InitialTransducer& b, int bound) {
  for (int lu = 0; lu + 1 <= bound; ++lu)
    for (const Word& u : all_words(a.m.n, lu))
      for (int lv = 1; lu + lv <= bound; ++lv)
        for (const Word& v : all_words(a.m.n, lv))
          if (!(evaluate_ep(a.m, a.q0, EpWord(u, v)) == evaluate_ep(b.m, b.q0, EpWord(u, v))))
            return false;
  return true;
}

}  // namespace

TEST_CASE("forced prefixes reach their least fixpoint") {
  for (Word c : forced_prefixes(make_xb().m)) CHECK(c.empty());
  for (Word c : forced_prefixes(make_parity().m)) CHECK(c.empty());

  std::vector<Word> forced = forced_prefixes(forced_head_machine().m);
  REQUIRE(forced.size() == 1);
  CHECK(forced[0] == "0");
}

TEST_CASE("complete response pushes forced output upstream") {
  auto [preamble, fixed] = remove_incomplete_response(forced_head_machine());
  CHECK(preamble == "0");
  REQUIRE(fixed.m.size() == 1);
  CHECK(fixed.m.out[0][0] == "00");
  CHECK(fixed.m.out[0][1] == "10");
  // the preamble plus the fixed machine still computes the original map
  InitialTransducer orig = forced_head_machine();
  for (int len = 0; len <= 6; ++len)
    for (const Word& w : all_words(2, len)) {
      Word expect = oracle::run(orig.m, orig.q0, w).first;
      Word got = preamble + oracle::run(fixed.m, fixed.q0, w).first;
      // the rewritten machine may run ahead by the forced prefix
      CHECK(is_prefix(expect, got));
    }
}

TEST_CASE("minimization is canonical on the cone exchange machine") {
  Minimized r = minimize(make_xb());
  CHECK(r.preamble.empty());
  REQUIRE(r.machine.m.size() == 3);
  CHECK(r.machine.q0 == 0);
  CHECK(r.machine.m.names == std::vector<std::string>{"p0", "id", "p1"});
  CHECK(omega_equal(r.machine, make_xb()));
}

TEST_CASE("minimization merges states that act alike") {
  Transducer m(2);
  int i1 = m.add_state("i1"), i2 = m.add_state("i2");
  for (int x = 0; x < 2; ++x) {
    m.set_arrow(i1, x, i2, Word(1, letter_char(x)));
    m.set_arrow(i2, x, i1, Word(1, letter_char(x)));
  }
  Minimized r = minimize({m, i1});
  CHECK(r.machine.m.size() == 1);
  CHECK(is_identity_machine(r.machine));
}

TEST_CASE("minimization is idempotent and preserves the map") {
  std::mt19937_64 rng(0x00d5eed1);
  std::vector<InitialTransducer> machines{make_parity(), make_xb(), make_dbl(), make_sync3()};
  for (int i = 0; i < 10; ++i) machines.push_back(to_transducer(gen::prefix_map(rng, 2, 5)));
  for (const InitialTransducer& t : machines) {
    Minimized once = minimize(t);
    Minimized twice = minimize(once.machine);
    CHECK(twice.preamble.empty());
    CHECK(canonical_signature(once.machine) == canonical_signature(twice.machine));
    if (once.preamble.empty()) CHECK(omega_equal(once.machine, t));
  }
}

TEST_CASE("machine equality distinguishes maps and only maps") {
  InitialTransducer parity_a = make_parity();
  InitialTransducer parity_b{parity_a.m, parity_a.m.state_named("b")};
  CHECK(omega_equal(parity_a, parity_a));
  CHECK_FALSE(omega_equal(parity_a, parity_b));

  PrefixExchangeMap xb_map = make_prefix_map(
      2, {{Word("0"), Word("00")}, {Word("10"), Word("01")}, {Word("11"), Word("1")}});
  CHECK(omega_equal(make_xb(), to_transducer(xb_map)));
  CHECK(canonical_signature(make_xb()) == canonical_signature(to_transducer(xb_map)));

  CHECK(omega_equal(parity_a, parity_b) == agree_up_to(parity_a, parity_b, 8));
  CHECK(agree_up_to(make_xb(), to_transducer(xb_map), 10));
}

TEST_CASE("signatures coincide exactly for equal prefix maps") {
  std::mt19937_64 rng(0x00d5eed2);
  for (int i = 0; i < 30; ++i) {
    PrefixExchangeMap v = gen::prefix_map(rng, 2, 4);
    PrefixExchangeMap w = gen::prefix_map(rng, 2, 4);
    bool same_table = v.table == w.table;
    CHECK(omega_equal(to_transducer(v), to_transducer(w)) == same_table);
  }
}
