#pragma once

#include <random>
#include <vector>

#include "gpg/word.hpp"

namespace gpgtest {

using namespace gpg;

inline GraphProduct path3() {
  SimplicialGraph g({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  return GraphProduct(g, {VertexGroup::integers(), VertexGroup::integers(),
                          VertexGroup::integers()});
}

inline GraphProduct path4() {
  SimplicialGraph g({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  return GraphProduct(g, {VertexGroup::integers(), VertexGroup::integers(),
                          VertexGroup::integers(), VertexGroup::integers()});
}

inline GraphProduct path5() {
  SimplicialGraph g({"a", "b", "c", "d", "f"},
                    {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "f"}});
  return GraphProduct(g, std::vector<VertexGroup>(5, VertexGroup::integers()));
}

inline GraphProduct cycle5() {
  SimplicialGraph g({"a", "b", "c", "d", "f"},
                    {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "f"}, {"f", "a"}});
  return GraphProduct(g, std::vector<VertexGroup>(5, VertexGroup::integers()));
}

inline GraphProduct zz() {  // Z x Z
  SimplicialGraph g({"a", "b"}, {{"a", "b"}});
  return GraphProduct(g, {VertexGroup::integers(), VertexGroup::integers()});
}

inline GraphProduct f2() {  // free product Z * Z
  SimplicialGraph g({"a", "b"}, {});
  return GraphProduct(g, {VertexGroup::integers(), VertexGroup::integers()});
}

inline GraphProduct k3_mixed() {  // triangle, Z x Z/3 x Z
  SimplicialGraph g({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  return GraphProduct(g, {VertexGroup::integers(), VertexGroup::cyclic(3),
                          VertexGroup::integers()});
}

// Random unnormalized word over the ambient, used by property tests.
inline std::vector<Syllable> random_word(const GraphProduct& gp,
                                         std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<uint32_t> vert(
      0, static_cast<uint32_t>(gp.vertex_count()) - 1);
  std::vector<Syllable> w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    VertexId v = vert(rng);
    const VertexGroup& grp = gp.group(v);
    GroupElem e;
    switch (grp.kind()) {
      case GroupKind::Integer: {
        std::uniform_int_distribution<int> exp(-3, 3);
        e.n = exp(rng);
        if (e.n == 0) e.n = 1;
        break;
      }
      case GroupKind::Cyclic:
      case GroupKind::Table: {
        std::uniform_int_distribution<int64_t> idx(1, grp.order() - 1);
        e.n = idx(rng);
        break;
      }
      case GroupKind::Free: {
        std::uniform_int_distribution<int> l(1, 3);
        std::uniform_int_distribution<int> letter(1, grp.rank());
        std::uniform_int_distribution<int> sign(0, 1);
        int m = l(rng);
        for (int j = 0; j < m; ++j) {
          int32_t x = letter(rng) * (sign(rng) ? 1 : -1);
          if (!e.w.empty() && e.w.back() == -x)
            e.w.pop_back();
          else
            e.w.push_back(x);
        }
        if (e.w.empty()) e.w = {1};
        break;
      }
    }
    w.push_back(Syllable{v, e});
  }
  return w;
}

inline NormalForm random_element(const GraphProduct& gp, std::mt19937& rng,
                                 int max_len) {
  return gp.normalize(random_word(gp, rng, max_len));
}

}  // namespace gpgtest
