#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "gpg/graph.hpp"

using namespace gpg;

TEST_CASE("links and stars on paths") {
  SimplicialGraph p3({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  VertexSet b = p3.set_of({"b"});
  CHECK(p3.link(b) == p3.set_of({"a", "c"}));
  CHECK(p3.star(b) == p3.all());

  SimplicialGraph p4({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  CHECK(p4.link(p4.set_of({"b", "c"})) == 0);
  CHECK(p4.link(p4.set_of({"a", "c"})) == p4.set_of({"b"}));
  CHECK(p4.star(p4.set_of({"a", "c"})) == p4.set_of({"a", "b", "c"}));

  // empty subgraph convention
  CHECK(p4.link(0) == p4.all());
  CHECK(p4.star(0) == p4.all());
}

TEST_CASE("subgraph enumeration and the coning family") {
  SimplicialGraph p3({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  CHECK(enumerate_subgraphs(p3).size() == 7);

  auto fam3 = coning_family(p3);  // mask order
  REQUIRE(fam3.size() == 4);
  CHECK(fam3[0] == p3.set_of({"a"}));
  CHECK(fam3[1] == p3.set_of({"b"}));
  CHECK(fam3[2] == p3.set_of({"c"}));
  CHECK(fam3[3] == p3.set_of({"a", "c"}));

  SimplicialGraph p4({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  auto fam4 = coning_family(p4);
  std::vector<VertexSet> expect = {
      p4.set_of({"a"}),      p4.set_of({"b"}), p4.set_of({"a", "c"}),
      p4.set_of({"c"}),      p4.set_of({"d"}), p4.set_of({"b", "d"})};
  std::sort(fam4.begin(), fam4.end());
  std::sort(expect.begin(), expect.end());
  CHECK(fam4 == expect);

  // two isolated vertices: every link is empty
  SimplicialGraph f2({"a", "b"}, {});
  CHECK(coning_family(f2).empty());
  CHECK(f2.has_isolated_vertices());

  SimplicialGraph big(
      {"v01", "v02", "v03", "v04", "v05", "v06", "v07", "v08", "v09", "v10",
       "v11", "v12", "v13", "v14", "v15", "v16", "v17"},
      {});
  CHECK_THROWS_AS(enumerate_subgraphs(big), Error);
}

TEST_CASE("link of a full join decomposes") {
  // property: v in lk(S) iff S subset lk(v)
  SimplicialGraph c5({"a", "b", "c", "d", "f"},
                     {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "f"}, {"f", "a"}});
  for (VertexSet s : enumerate_subgraphs(c5)) {
    VertexSet lk = c5.link(s);
    for (VertexId v = 0; v < c5.size(); ++v) {
      bool in_link = (lk & bit(v)) != 0;
      bool dominates = (s & bit(v)) == 0 && (s & ~c5.neighbors(v)) == 0;
      CHECK(in_link == dominates);
    }
  }
}
