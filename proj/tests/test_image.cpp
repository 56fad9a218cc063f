// Image antichains, cone membership, longest common prefixes of preimages,
// injectivity, and the antichain toolbox.
#include "catch2/catch_amalgamated.hpp"
#include "oracle.hpp"
#include "tx/tx.hpp"

using namespace tx;

namespace {

std::vector<InitialTransducer> corpus() {
  return {make_parity(), make_xb(), make_dbl(), make_sync3(), make_identity1()};
}

// Injective machine whose image is the 0-cone.
InitialTransducer squashing_machine() {
  Transducer m(2);
  int s = m.add_state("s"), i = m.add_state("i");
  m.set_arrow(s, 0, i, Word("00"));
  m.set_arrow(s, 1, i, Word("01"));
  for (int x = 0; x < 2; ++x) m.set_arrow(i, x, i, Word(1, letter_char(x)));
  return {m, s};
}

// Collapses both top cones onto the 0-cone: not injective.
InitialTransducer collapsing_machine() {
  Transducer m(2);
  int s = m.add_state("s"), i = m.add_state("i");
  m.set_arrow(s, 0, i, Word("0"));
  m.set_arrow(s, 1, i, Word("0"));
  for (int x = 0; x < 2; ++x) m.set_arrow(i, x, i, Word(1, letter_char(x)));
  return {m, s};
}

// Erases a leading 1: (0w) maps to 0w and (1w) to w, so 00w and 100w collide.
InitialTransducer erasing_machine() {
  Transducer m(2);
  int s = m.add_state("s"), i = m.add_state("i");
  m.set_arrow(s, 0, i, Word("0"));
  m.set_arrow(s, 1, i, Word());
  for (int x = 0; x < 2; ++x) m.set_arrow(i, x, i, Word(1, letter_char(x)));
  return {m, s};
}

}  // namespace

TEST_CASE("image antichains of the reference machines") {
  InitialTransducer xb = make_xb();
  int p0 = xb.m.state_named("p0"), p1 = xb.m.state_named("p1");
  CHECK(image_antichain(xb.m, p0).words == std::vector<Word>{Word()});
  CHECK(image_antichain(xb.m, p1).words == (std::vector<Word>{Word("01"), Word("1")}));

  InitialTransducer parity = make_parity();
  CHECK(image_antichain(parity.m, parity.q0).words == std::vector<Word>{Word()});

  InitialTransducer sq = squashing_machine();
  CHECK(image_antichain(sq.m, sq.q0).words == std::vector<Word>{Word("0")});

  InitialTransducer dbl = make_dbl();
  try {
    image_antichain(dbl.m, dbl.q0, Budget{200, 12});
    FAIL("expected the image decomposition to give up");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
}

TEST_CASE("cone containment in the image") {
  InitialTransducer xb = make_xb();
  int p1 = xb.m.state_named("p1");
  CHECK(cone_in_image(xb.m, p1, Word("1")));
  CHECK(cone_in_image(xb.m, p1, Word("01")));
  CHECK_FALSE(cone_in_image(xb.m, p1, Word("00")));
  CHECK_FALSE(cone_in_image(xb.m, p1, Word("0")));

  // the doubling machine's image meets every 0-cone but fills none of them
  InitialTransducer dbl = make_dbl();
  CHECK_FALSE(cone_in_image(dbl.m, dbl.q0, Word("0")));
  CHECK_FALSE(cone_in_image(dbl.m, dbl.q0, Word("00")));

  InitialTransducer sq = squashing_machine();
  CHECK(cone_in_image(sq.m, sq.q0, Word("0")));
  CHECK_FALSE(cone_in_image(sq.m, sq.q0, Word("1")));
}

TEST_CASE("cone intersection with the image") {
  InitialTransducer dbl = make_dbl();
  CHECK_FALSE(cone_meets_image(dbl.m, dbl.q0, Word("01")));
  CHECK(cone_meets_image(dbl.m, dbl.q0, Word("001")));

  for (const InitialTransducer& t : corpus())
    for (int q = 0; q < t.m.size(); ++q)
      for (int len = 0; len <= 4; ++len)
        for (const Word& w : all_words(t.m.n, len))
          CHECK(cone_meets_image(t.m, q, w) == oracle::meets_image_scan(t.m, q, w, 12));
}

TEST_CASE("longest common prefix of a cone's preimage") {
  InitialTransducer xb = make_xb();
  int p0 = xb.m.state_named("p0"), p1 = xb.m.state_named("p1");
  CHECK(preimage_lcp(xb.m, p0, Word("1")) == Word("11"));
  CHECK(preimage_lcp(xb.m, p0, Word("01")) == Word("10"));
  CHECK(preimage_lcp(xb.m, p0, Word("00")) == Word("0"));
  CHECK(preimage_lcp(xb.m, p0, Word("0")) == Word());
  CHECK(preimage_lcp(xb.m, p1, Word("01")) == Word("0"));
  CHECK(preimage_lcp(xb.m, p1, Word("1")) == Word("1"));

  InitialTransducer parity = make_parity();
  CHECK(preimage_lcp(parity.m, parity.q0, Word("0")) == Word("0"));

  // the result is a common prefix of every input whose image enters the cone
  std::vector<InitialTransducer> machines{make_parity(), make_xb(), make_sync3()};
  for (const InitialTransducer& t : machines)
    for (int q = 0; q < t.m.size(); ++q)
      for (int len = 1; len <= 3; ++len)
        for (const Word& alpha : all_words(2, len)) {
          if (!cone_meets_image(t.m, q, alpha)) continue;
          Word lcp = preimage_lcp(t.m, q, alpha);
          for (const Word& w : all_words(2, 12)) {
            Word img = oracle::run(t.m, q, w).first;
            if (is_prefix(alpha, img)) CHECK(is_prefix(lcp, w));
          }
        }

  InitialTransducer dbl = make_dbl();
  try {
    preimage_lcp(dbl.m, dbl.q0, Word("01"));
    FAIL("expected an empty preimage error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_preimage);
  }
}

TEST_CASE("state injectivity") {
  for (const InitialTransducer& t : corpus())
    for (int q = 0; q < t.m.size(); ++q) CHECK(state_injective(t.m, q));
  InitialTransducer sq = squashing_machine();
  CHECK(state_injective(sq.m, sq.q0));
  InitialTransducer co = collapsing_machine();
  CHECK_FALSE(state_injective(co.m, co.q0));
  InitialTransducer er = erasing_machine();
  CHECK_FALSE(state_injective(er.m, er.q0));
}

TEST_CASE("partial invertibility report") {
  InvertibilityReport dbl = is_partially_invertible(make_dbl().m, Budget{200, 12});
  CHECK(dbl.states[0].injective == Tri::yes);
  CHECK(dbl.states[0].clopen == Tri::budget_exceeded);
  CHECK_FALSE(dbl.all_pass);

  InvertibilityReport xb = is_partially_invertible(make_xb().m);
  CHECK(xb.all_pass);
  for (const StateInvertibility& s : xb.states) {
    CHECK(s.injective == Tri::yes);
    CHECK(s.clopen == Tri::yes);
  }

  InvertibilityReport co = is_partially_invertible(collapsing_machine().m);
  CHECK_FALSE(co.all_pass);
  CHECK(co.states[0].injective == Tri::no);
}

TEST_CASE("antichain toolbox") {
  CHECK(is_maximal_antichain(make_antichain(2, {Word("0"), Word("10"), Word("11")})));
  CHECK_FALSE(is_maximal_antichain(make_antichain(2, {Word("0"), Word("11")})));

  CHECK(antichain_complement(make_antichain(2, {Word("0")})).words == std::vector<Word>{Word("1")});
  CHECK(antichain_complement(make_antichain(2, {Word("00"), Word("1")})).words ==
        std::vector<Word>{Word("01")});
  CHECK(antichain_complement(make_antichain(2, {Word()})).words.empty());

  CHECK(canonical_antichain(make_antichain(2, {Word("00"), Word("01"), Word("1")})).words ==
        std::vector<Word>{Word()});
  CHECK(canonical_antichain(make_antichain(2, {Word("00"), Word("01"), Word("10")})).words ==
        (std::vector<Word>{Word("0"), Word("10")}));

  try {
    make_antichain(2, {Word("0"), Word("01")});
    FAIL("expected overlapping cones to be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}
