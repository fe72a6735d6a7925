#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "gpg/errors.hpp"
#include "gpg/graph.hpp"
#include "gpg/vertex_group.hpp"

namespace gpg {

// Quasi-geodesic / quasi-isometry constants.
struct QGParams {
  double lambda = 1.0;
  double eps = 0.0;

  QGParams() = default;
  QGParams(double l, double e) : lambda(l), eps(e) {
    if (l < 1.0 || e < 0.0)
      fail(Errc::InvalidConfig, "QG constants need lambda >= 1, eps >= 0");
  }
};

struct Syllable {
  VertexId v = 0;
  GroupElem e;

  bool operator==(const Syllable& o) const { return v == o.v && e == o.e; }
};

class GraphProduct;

// Canonical form of a group element: the ShortLex-least representative of
// its commutation class of reduced syllable words.  Instances are only
// produced by GraphProduct, which guarantees canonicity.
struct NormalForm {
  const GraphProduct* ambient = nullptr;
  std::vector<Syllable> syl;

  bool is_identity() const { return syl.empty(); }
  size_t size() const { return syl.size(); }
  bool operator==(const NormalForm& o) const { return syl == o.syl; }
};

// Graph product of vertex groups over a simplicial graph.  Provides the
// word engine: normalization, arithmetic, lengths, supports, star
// decompositions and the word-literal syntax used by the CLI.
class GraphProduct {
 public:
  GraphProduct(SimplicialGraph graph, std::vector<VertexGroup> groups)
      : graph_(std::move(graph)), groups_(std::move(groups)) {
    if (groups_.size() != graph_.size())
      fail(Errc::InvalidConfig, "one vertex group required per vertex");
  }

  const SimplicialGraph& graph() const { return graph_; }
  const VertexGroup& group(VertexId v) const { return groups_[v]; }
  size_t vertex_count() const { return graph_.size(); }

  bool all_groups_infinite() const {
    for (const auto& g : groups_)
      if (!g.is_infinite()) return false;
    return true;
  }

  bool commute(VertexId a, VertexId b) const {
    return a != b && graph_.adjacent(a, b);
  }

  NormalForm identity() const { return NormalForm{this, {}}; }

  // --- normalization -----------------------------------------------------

  NormalForm normalize(std::vector<Syllable> word) const {
    for (const Syllable& s : word) {
      if (s.v >= graph_.size())
        fail(Errc::InvalidSyllable, "unknown vertex index in syllable");
      if (!groups_[s.v].is_valid(s.e))
        fail(Errc::InvalidSyllable,
             "invalid element for vertex '" + graph_.name(s.v) + "'");
      if (groups_[s.v].is_identity(s.e))
        fail(Errc::InvalidSyllable,
             "identity syllable at vertex '" + graph_.name(s.v) + "'");
    }
    return finish(std::move(word));
  }

  NormalForm multiply(const NormalForm& a, const NormalForm& b) const {
    check_ambient(a);
    check_ambient(b);
    std::vector<Syllable> w = a.syl;
    w.insert(w.end(), b.syl.begin(), b.syl.end());
    return finish(std::move(w));
  }

  NormalForm invert(const NormalForm& a) const {
    check_ambient(a);
    std::vector<Syllable> w;
    w.reserve(a.syl.size());
    for (auto it = a.syl.rbegin(); it != a.syl.rend(); ++it)
      w.push_back(Syllable{it->v, groups_[it->v].inv(it->e)});
    return finish(std::move(w));
  }

  NormalForm power(const NormalForm& a, int64_t n) const {
    NormalForm base = n < 0 ? invert(a) : a;
    if (n < 0) n = -n;
    NormalForm acc = identity();
    for (int64_t i = 0; i < n; ++i) acc = multiply(acc, base);
    return acc;
  }

  VertexSet support(const NormalForm& a) const {
    VertexSet s = 0;
    for (const Syllable& x : a.syl) s |= bit(x.v);
    return s;
  }

  bool in_parabolic(const NormalForm& a, VertexSet lambda) const {
    return (support(a) & ~lambda) == 0;
  }

  int64_t word_length(const NormalForm& a) const {
    int64_t n = 0;
    for (const Syllable& s : a.syl) n += groups_[s.v].length(s.e);
    return n;
  }

  // ShortLex order on canonical forms: word length, then syllable count,
  // then syllable-wise (vertex, element).
  int compare(const NormalForm& a, const NormalForm& b) const {
    int64_t la = word_length(a), lb = word_length(b);
    if (la != lb) return la < lb ? -1 : 1;
    if (a.syl.size() != b.syl.size())
      return a.syl.size() < b.syl.size() ? -1 : 1;
    for (size_t i = 0; i < a.syl.size(); ++i) {
      if (a.syl[i].v != b.syl[i].v) return a.syl[i].v < b.syl[i].v ? -1 : 1;
      int c = groups_[a.syl[i].v].compare(a.syl[i].e, b.syl[i].e);
      if (c != 0) return c;
    }
    return 0;
  }

  uint64_t hash(const NormalForm& a) const {
    uint64_t h = 1469598103934665603ull;
    for (const Syllable& s : a.syl) {
      h ^= s.v + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
      h ^= groups_[s.v].hash(s.e);
      h *= 1099511628211ull;
    }
    return h;
  }

  // --- trace divisors ----------------------------------------------------

  // Maximal left divisor of `a` supported in the vertex set `region`:
  // syllable i belongs iff its vertex lies in `region` and every earlier
  // non-commuting syllable already belongs.  Single left-to-right pass.
  std::vector<bool> left_divisor_mask(const NormalForm& a,
                                      VertexSet region) const {
    std::vector<bool> in(a.syl.size(), false);
    for (size_t i = 0; i < a.syl.size(); ++i) {
      if (!(region & bit(a.syl[i].v))) continue;
      bool ok = true;
      for (size_t j = 0; j < i; ++j)
        if (!in[j] && !commute(a.syl[j].v, a.syl[i].v)) {
          ok = false;
          break;
        }
      in[i] = ok;
    }
    return in;
  }

  std::vector<bool> right_divisor_mask(const NormalForm& a,
                                       VertexSet region) const {
    size_t n = a.syl.size();
    std::vector<bool> in(n, false);
    for (size_t ii = n; ii-- > 0;) {
      if (!(region & bit(a.syl[ii].v))) continue;
      bool ok = true;
      for (size_t j = ii + 1; j < n; ++j)
        if (!in[j] && !commute(a.syl[j].v, a.syl[ii].v)) {
          ok = false;
          break;
        }
      in[ii] = ok;
    }
    return in;
  }

  // Splits `a` as prefix * rest along a selection mask (the mask must be a
  // left-divisor mask for the product to hold without cancellation).
  std::pair<NormalForm, NormalForm> split(const NormalForm& a,
                                          const std::vector<bool>& mask) const {
    std::vector<Syllable> in, out;
    for (size_t i = 0; i < a.syl.size(); ++i)
      (mask[i] ? in : out).push_back(a.syl[i]);
    return {finish(std::move(in)), finish(std::move(out))};
  }

  // g = h * k with h supported in Lambda and k in lk(Lambda).  Requires a
  // nonempty link; h lies in st(v) for every v in lk(Lambda) and k in st(w)
  // for every w in Lambda, so both factors are single-star elements.
  struct StarDecomposition {
    NormalForm h;
    VertexId v;
    NormalForm k;
    VertexId w;
  };

  StarDecomposition decompose_star_element(const NormalForm& g,
                                           VertexSet lambda) const {
    check_ambient(g);
    if (lambda == 0)
      fail(Errc::EmptyLink, "star decomposition needs a nonempty subgraph");
    VertexSet lk = graph_.link(lambda);
    if (lk == 0)
      fail(Errc::EmptyLink, "subgraph " + graph_.describe(lambda) +
                                " has empty link");
    VertexSet st = lambda | lk;
    if (!in_parabolic(g, st))
      fail(Errc::NotInStar, "element not supported in st(" +
                                graph_.describe(lambda) + ")");
    std::vector<Syllable> hs, ks;
    for (const Syllable& s : g.syl)
      ((lambda & bit(s.v)) ? hs : ks).push_back(s);
    StarDecomposition d;
    d.h = finish(std::move(hs));
    d.k = finish(std::move(ks));
    d.v = static_cast<VertexId>(std::countr_zero(lk));
    d.w = static_cast<VertexId>(std::countr_zero(lambda));
    return d;
  }

  // --- word literals -----------------------------------------------------

  // Token syntax: `a` / `a^-3` (Z and cyclic), `a[xyX]` (free groups,
  // letters a..z with capitals for inverses), `a{3}` (table groups).
  // Tokens are whitespace separated; `e` or the empty string is identity.
  NormalForm parse_word(const std::string& text) const {
    std::vector<Syllable> word;
    size_t i = 0;
    auto skip_ws = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    };
    skip_ws();
    while (i < text.size()) {
      size_t start = i;
      while (i < text.size() &&
             !std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      std::string tok = text.substr(start, i - start);
      skip_ws();
      if (tok == "e" && word.empty() && i >= text.size()) break;
      word.push_back(parse_token(tok));
    }
    return normalize(std::move(word));
  }

  std::string print_word(const NormalForm& a) const {
    if (a.syl.empty()) return "e";
    std::string out;
    for (const Syllable& s : a.syl) {
      if (!out.empty()) out += ' ';
      out += print_syllable(s);
    }
    return out;
  }

  std::string print_syllable(const Syllable& s) const {
    const std::string& name = graph_.name(s.v);
    switch (groups_[s.v].kind()) {
      case GroupKind::Integer:
      case GroupKind::Cyclic:
        if (s.e.n == 1) return name;
        return name + "^" + std::to_string(s.e.n);
      case GroupKind::Table:
        return name + "{" + std::to_string(s.e.n) + "}";
      case GroupKind::Free: {
        std::string w;
        for (int32_t x : s.e.w)
          w += x > 0 ? static_cast<char>('a' + x - 1)
                     : static_cast<char>('A' - x - 1);
        return name + "[" + w + "]";
      }
    }
    return name;
  }

  // Ambient standard generators as syllables, in (vertex, element) order.
  std::vector<Syllable> generators() const {
    std::vector<Syllable> out;
    for (VertexId v = 0; v < graph_.size(); ++v)
      for (const GroupElem& e : groups_[v].generators())
        out.push_back(Syllable{v, e});
    return out;
  }

  bool operator==(const GraphProduct& o) const {
    if (!(graph_ == o.graph_)) return false;
    for (size_t i = 0; i < groups_.size(); ++i) {
      if (groups_[i].kind() != o.groups_[i].kind() ||
          groups_[i].order() != o.groups_[i].order() ||
          groups_[i].rank() != o.groups_[i].rank())
        return false;
      if (groups_[i].kind() == GroupKind::Table &&
          groups_[i].mul_table() != o.groups_[i].mul_table())
        return false;
    }
    return true;
  }

  void check_ambient(const NormalForm& a) const {
    if (a.ambient == this) return;
    if (a.ambient == nullptr || !(*a.ambient == *this))
      fail(Errc::MixedAmbient, "normal form belongs to a different ambient");
  }

 private:
  // Merge pass + greedy ShortLex sort, repeated to a fixpoint.  The merge
  // pass bubbles each syllable left across commuting ones and merges it into
  // an earlier syllable of the same vertex; identity results are dropped.
  NormalForm finish(std::vector<Syllable> w) const {
    bool changed = true;
    while (changed) {
      changed = reduce(w);
      canonical_sort(w);
    }
    return NormalForm{this, std::move(w)};
  }

  bool reduce(std::vector<Syllable>& w) const {
    bool any = false;
    bool again = true;
    while (again) {
      again = false;
      for (size_t i = 1; i < w.size() && !again; ++i) {
        for (size_t jj = i; jj-- > 0;) {
          if (w[jj].v == w[i].v) {
            GroupElem merged = groups_[w[i].v].mul(w[jj].e, w[i].e);
            w.erase(w.begin() + static_cast<long>(i));
            if (groups_[w[jj].v].is_identity(merged))
              w.erase(w.begin() + static_cast<long>(jj));
            else
              w[jj].e = merged;
            any = again = true;
            break;
          }
          if (!commute(w[jj].v, w[i].v)) break;
        }
      }
    }
    return any;
  }

  // Left-greedy linearization: repeatedly emit the least available syllable,
  // where available means every earlier remaining syllable commutes with it.
  // Available syllables have pairwise distinct vertices, so comparing by
  // vertex suffices; elements only matter for determinism elsewhere.
  void canonical_sort(std::vector<Syllable>& w) const {
    std::vector<Syllable> out;
    out.reserve(w.size());
    std::vector<bool> used(w.size(), false);
    for (size_t step = 0; step < w.size(); ++step) {
      size_t best = w.size();
      for (size_t i = 0; i < w.size(); ++i) {
        if (used[i]) continue;
        bool avail = true;
        for (size_t j = 0; j < i && avail; ++j)
          if (!used[j] && !commute(w[j].v, w[i].v)) avail = false;
        if (avail && (best == w.size() || w[i].v < w[best].v)) best = i;
      }
      used[best] = true;
      out.push_back(w[best]);
    }
    w = std::move(out);
  }

  Syllable parse_token(const std::string& tok) const {
    size_t p = tok.find_first_of("^[{");
    std::string name = tok.substr(0, p);
    if (name.empty())
      fail(Errc::InvalidSyllable, "malformed token '" + tok + "'");
    VertexId v;
    try {
      v = graph_.index_of(name);
    } catch (const Error&) {
      fail(Errc::InvalidSyllable, "unknown vertex '" + name + "'");
    }
    const VertexGroup& grp = groups_[v];
    GroupElem e;
    if (p == std::string::npos) {
      switch (grp.kind()) {
        case GroupKind::Integer:
        case GroupKind::Cyclic:
          e.n = 1;
          break;
        case GroupKind::Free:
          e.w = {1};
          break;
        case GroupKind::Table:
          fail(Errc::InvalidSyllable,
               "table group element needs index syntax '" + name + "{i}'");
      }
    } else if (tok[p] == '^') {
      if (grp.kind() != GroupKind::Integer && grp.kind() != GroupKind::Cyclic)
        fail(Errc::InvalidSyllable, "exponent syntax needs Z or cyclic vertex");
      int64_t exp = parse_int(tok.substr(p + 1), tok);
      if (grp.kind() == GroupKind::Cyclic) {
        exp %= grp.order();
        if (exp < 0) exp += grp.order();
      }
      e.n = exp;
    } else if (tok[p] == '[') {
      if (grp.kind() != GroupKind::Free || tok.back() != ']')
        fail(Errc::InvalidSyllable, "bracket syntax needs a free-group vertex");
      for (size_t i = p + 1; i + 1 < tok.size(); ++i) {
        char c = tok[i];
        int32_t letter;
        if (c >= 'a' && c <= 'z')
          letter = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z')
          letter = -(c - 'A' + 1);
        else
          fail(Errc::InvalidSyllable, "bad free-group letter in '" + tok + "'");
        if (!e.w.empty() && e.w.back() == -letter)
          e.w.pop_back();
        else
          e.w.push_back(letter);
      }
    } else {
      if (grp.kind() != GroupKind::Table || tok.back() != '}')
        fail(Errc::InvalidSyllable, "brace syntax needs a table-group vertex");
      e.n = parse_int(tok.substr(p + 1, tok.size() - p - 2), tok);
    }
    if (!grp.is_valid(e))
      fail(Errc::InvalidSyllable, "element out of range in '" + tok + "'");
    if (grp.is_identity(e))
      fail(Errc::InvalidSyllable, "identity syllable '" + tok + "'");
    return Syllable{v, e};
  }

  static int64_t parse_int(const std::string& s, const std::string& tok) {
    try {
      size_t pos = 0;
      int64_t v = std::stoll(s, &pos);
      if (pos != s.size() && s[pos] != ']' && s[pos] != '}')
        fail(Errc::InvalidSyllable, "malformed number in '" + tok + "'");
      return v;
    } catch (const std::exception&) {
      fail(Errc::InvalidSyllable, "malformed number in '" + tok + "'");
    }
  }

  SimplicialGraph graph_;
  std::vector<VertexGroup> groups_;
};

struct NormalFormHash {
  const GraphProduct* gp;
  size_t operator()(const NormalForm& a) const {
    return static_cast<size_t>(gp->hash(a));
  }
};

struct NormalFormEq {
  bool operator()(const NormalForm& a, const NormalForm& b) const {
    return a.syl == b.syl;
  }
};

}  // namespace gpg
