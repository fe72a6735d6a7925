#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "gpg/word.hpp"

using namespace gpg;
using namespace gpgtest;

TEST_CASE("normalization on P3") {
  GraphProduct gp = path3();
  CHECK(gp.print_word(gp.parse_word("b a")) == "a b");
  CHECK(gp.print_word(gp.parse_word("a b a^-1")) == "b");
  CHECK(gp.print_word(gp.parse_word("a^2 a^-1 c")) == "a c");
  CHECK(gp.parse_word("a a^-1").is_identity());
  CHECK(gp.print_word(gp.identity()) == "e");

  // a and c do not commute: order preserved
  CHECK(gp.print_word(gp.parse_word("c a")) == "c a");

  CHECK_THROWS_AS(gp.parse_word("q^2"), Error);
  CHECK_THROWS_AS(gp.normalize({Syllable{0, GroupElem{}}}), Error);
}

TEST_CASE("word literals for all group kinds") {
  GraphProduct gp = k3_mixed();
  CHECK(gp.print_word(gp.parse_word("b^2 b^2")) == "b");
  CHECK_THROWS_AS(gp.parse_word("b^3"), Error);  // identity in Z/3
  CHECK(gp.print_word(gp.parse_word("a^-2 b c^3")) == "a^-2 b c^3");

  SimplicialGraph g({"x"}, {});
  GraphProduct fp(g, {VertexGroup::free_group(2)});
  NormalForm w = fp.parse_word("x[abA]");
  CHECK(fp.print_word(w) == "x[abA]");
  CHECK(fp.word_length(w) == 3);
  CHECK(fp.multiply(w, fp.invert(w)).is_identity());
  CHECK_THROWS_AS(fp.parse_word("x[aA]"), Error);  // identity syllable
}

TEST_CASE("word lengths") {
  GraphProduct gp = path3();
  CHECK(gp.word_length(gp.parse_word("a^3 b^-2")) == 5);

  GraphProduct k3 = k3_mixed();
  CHECK(k3.word_length(k3.parse_word("b^2")) == 1);  // 2 = -1 in Z/3

  GraphProduct p4 = path4();
  NormalForm abcd = p4.parse_word("a b c d");
  CHECK(p4.word_length(p4.power(abcd, 2)) == 8);
}

TEST_CASE("canonical form is the ShortLex shuffle representative") {
  // (abcd)^2 stays alternating: consecutive a..a do not merge across c,d
  GraphProduct p4 = path4();
  NormalForm g = p4.power(p4.parse_word("a b c d"), 2);
  CHECK(p4.print_word(g) == "a b c d a b c d");

  // commuting pair sorts by vertex
  GraphProduct z2 = zz();
  CHECK(z2.print_word(z2.parse_word("b^2 a")) == "a b^2");
}

TEST_CASE("support and parabolic membership") {
  GraphProduct p4 = path4();
  NormalForm g = p4.parse_word("a c^2");
  CHECK(p4.support(g) == p4.graph().set_of({"a", "c"}));
  CHECK(p4.in_parabolic(g, p4.graph().set_of({"a", "c"})));
  CHECK(p4.in_parabolic(g, p4.graph().set_of({"a", "b", "c"})));
  CHECK(!p4.in_parabolic(g, p4.graph().set_of({"a", "b"})));
}

TEST_CASE("star decomposition") {
  GraphProduct p3 = path3();
  auto d = p3.decompose_star_element(p3.parse_word("a b a"),
                                     p3.graph().set_of({"a"}));
  CHECK(p3.print_word(d.h) == "a^2");
  CHECK(p3.graph().name(d.v) == "b");
  CHECK(p3.print_word(d.k) == "b");
  CHECK(p3.graph().name(d.w) == "a");

  GraphProduct p4 = path4();
  auto d2 = p4.decompose_star_element(p4.parse_word("a c b"),
                                      p4.graph().set_of({"a", "c"}));
  CHECK(p4.print_word(d2.h) == "a c");
  CHECK(p4.print_word(d2.k) == "b");
  CHECK(p4.graph().name(d2.v) == "b");
  CHECK(p4.graph().name(d2.w) == "a");

  CHECK_THROWS_AS(
      p4.decompose_star_element(p4.parse_word("a d"), p4.graph().set_of({"a"})),
      Error);  // d outside st(a)
  SimplicialGraph f2g({"a", "b"}, {});
  GraphProduct f2p(f2g, {VertexGroup::integers(), VertexGroup::integers()});
  CHECK_THROWS_AS(
      f2p.decompose_star_element(f2p.parse_word("a"), f2g.set_of({"a"})),
      Error);  // empty link
}

TEST_CASE("group axioms under normalization, randomized") {
  std::mt19937 rng(20260814);
  for (GraphProduct gp : {path3(), path4(), zz(), f2(), k3_mixed()}) {
    for (int trial = 0; trial < 300; ++trial) {
      NormalForm x = random_element(gp, rng, 6);
      NormalForm y = random_element(gp, rng, 6);
      NormalForm z = random_element(gp, rng, 6);
      CHECK(gp.multiply(x, gp.invert(x)).is_identity());
      CHECK(gp.multiply(gp.multiply(x, y), z) ==
            gp.multiply(x, gp.multiply(y, z)));
      // canonical form is stable under renormalization
      CHECK(gp.normalize(x.syl) == x);
    }
  }
}

TEST_CASE("shuffle equivalence lands on one canonical form") {
  std::mt19937 rng(7);
  GraphProduct p4 = path4();
  for (int trial = 0; trial < 500; ++trial) {
    NormalForm x = random_element(p4, rng, 8);
    // random adjacent transpositions of commuting syllables
    std::vector<Syllable> w = x.syl;
    for (int k = 0; k < 20 && w.size() > 1; ++k) {
      std::uniform_int_distribution<size_t> at(0, w.size() - 2);
      size_t i = at(rng);
      if (p4.commute(w[i].v, w[i + 1].v)) std::swap(w[i], w[i + 1]);
    }
    CHECK(p4.normalize(w) == x);
  }
}

TEST_CASE("A(P3) is F2 x Z: middle vertex is central") {
  GraphProduct p3 = path3();
  std::mt19937 rng(11);
  NormalForm b = p3.parse_word("b");
  for (int trial = 0; trial < 200; ++trial) {
    NormalForm x = random_element(p3, rng, 6);
    CHECK(p3.multiply(x, b) == p3.multiply(b, x));
  }
  // while a and c generate a free group: [a,c] != id
  NormalForm a = p3.parse_word("a"), c = p3.parse_word("c");
  NormalForm comm = p3.multiply(p3.multiply(a, c),
                                p3.multiply(p3.invert(a), p3.invert(c)));
  CHECK(!comm.is_identity());
}

TEST_CASE("mixed ambients are rejected") {
  GraphProduct one = path3();
  GraphProduct two = path4();
  NormalForm x = one.parse_word("a");
  CHECK_THROWS_AS(two.multiply(x, two.parse_word("d")), Error);
  // structurally equal ambients interoperate
  GraphProduct three = path3();
  CHECK(three.print_word(three.multiply(x, three.parse_word("b"))) == "a b");
}
