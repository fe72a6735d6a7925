#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <variant>
#include <vector>

#include "gpg/errors.hpp"

namespace gpg {

// One element of a vertex group.  The interpretation depends on the group
// kind: `n` carries an integer exponent (Z), a residue (cyclic) or a table
// index; `w` carries a reduced free word as signed 1-based letter indices.
struct GroupElem {
  int64_t n = 0;
  std::vector<int32_t> w;

  bool operator==(const GroupElem& o) const { return n == o.n && w == o.w; }
};

enum class GroupKind { Integer, Cyclic, Free, Table };

// Vertex group description plus element arithmetic.  Cyclic and table groups
// get exact word lengths from a BFS table over their (symmetrized) generator
// sets; Z and free groups use the obvious closed forms.
class VertexGroup {
 public:
  static VertexGroup integers() {
    VertexGroup g;
    g.kind_ = GroupKind::Integer;
    return g;
  }

  static VertexGroup cyclic(int64_t n) {
    if (n < 2) fail(Errc::InvalidConfig, "cyclic group needs order >= 2");
    VertexGroup g;
    g.kind_ = GroupKind::Cyclic;
    g.order_ = n;
    g.build_cyclic_lengths();
    return g;
  }

  static VertexGroup free_group(int rank) {
    if (rank < 1) fail(Errc::InvalidConfig, "free group needs rank >= 1");
    VertexGroup g;
    g.kind_ = GroupKind::Free;
    g.rank_ = rank;
    return g;
  }

  // `table[i][j]` is the product of elements i and j; index 0 is the
  // identity.  An empty generator list defaults to all nonidentity elements.
  static VertexGroup table(std::vector<std::vector<uint32_t>> table,
                           std::vector<uint32_t> generators = {}) {
    VertexGroup g;
    g.kind_ = GroupKind::Table;
    g.table_ = std::move(table);
    g.order_ = static_cast<int64_t>(g.table_.size());
    g.validate_table();
    if (generators.empty())
      for (uint32_t i = 1; i < g.order_; ++i) generators.push_back(i);
    g.table_gens_ = std::move(generators);
    g.build_table_lengths();
    return g;
  }

  GroupKind kind() const { return kind_; }
  int64_t order() const { return order_; }  // 0 when infinite
  int rank() const { return rank_; }
  bool is_infinite() const {
    return kind_ == GroupKind::Integer || kind_ == GroupKind::Free;
  }

  bool is_identity(const GroupElem& e) const {
    return kind_ == GroupKind::Free ? e.w.empty() : e.n == 0;
  }

  bool is_valid(const GroupElem& e) const {
    switch (kind_) {
      case GroupKind::Integer:
        return e.w.empty();
      case GroupKind::Cyclic:
      case GroupKind::Table:
        return e.w.empty() && e.n >= 0 && e.n < order_;
      case GroupKind::Free:
        if (e.n != 0) return false;
        for (size_t i = 0; i < e.w.size(); ++i) {
          int32_t a = e.w[i];
          if (a == 0 || a > rank_ || a < -rank_) return false;
          if (i > 0 && e.w[i - 1] == -a) return false;  // must be reduced
        }
        return true;
    }
    return false;
  }

  GroupElem identity() const { return GroupElem{}; }

  GroupElem mul(const GroupElem& a, const GroupElem& b) const {
    GroupElem r;
    switch (kind_) {
      case GroupKind::Integer:
        r.n = a.n + b.n;
        break;
      case GroupKind::Cyclic:
        r.n = (a.n + b.n) % order_;
        break;
      case GroupKind::Table:
        r.n = table_[a.n][b.n];
        break;
      case GroupKind::Free: {
        r.w = a.w;
        for (int32_t x : b.w) {
          if (!r.w.empty() && r.w.back() == -x)
            r.w.pop_back();
          else
            r.w.push_back(x);
        }
        break;
      }
    }
    return r;
  }

  GroupElem inv(const GroupElem& a) const {
    GroupElem r;
    switch (kind_) {
      case GroupKind::Integer:
        r.n = -a.n;
        break;
      case GroupKind::Cyclic:
        r.n = a.n == 0 ? 0 : order_ - a.n;
        break;
      case GroupKind::Table:
        r.n = table_inv_[a.n];
        break;
      case GroupKind::Free:
        for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) r.w.push_back(-*it);
        break;
    }
    return r;
  }

  // Word length with respect to the group's generating set.
  int64_t length(const GroupElem& e) const {
    switch (kind_) {
      case GroupKind::Integer:
        return e.n < 0 ? -e.n : e.n;
      case GroupKind::Cyclic:
      case GroupKind::Table:
        return lengths_[e.n];
      case GroupKind::Free:
        return static_cast<int64_t>(e.w.size());
    }
    return 0;
  }

  // Deterministic total order: by length first, then by a fixed encoding
  // order.  Needed for ShortLex tie-breaks on syllables of equal vertex.
  int compare(const GroupElem& a, const GroupElem& b) const {
    int64_t la = length(a), lb = length(b);
    if (la != lb) return la < lb ? -1 : 1;
    switch (kind_) {
      case GroupKind::Integer: {
        // positive before negative at equal magnitude
        if (a.n == b.n) return 0;
        int64_t ma = a.n < 0 ? -a.n : a.n, mb = b.n < 0 ? -b.n : b.n;
        if (ma != mb) return ma < mb ? -1 : 1;
        return a.n > 0 ? -1 : 1;
      }
      case GroupKind::Cyclic:
      case GroupKind::Table:
        return a.n == b.n ? 0 : (a.n < b.n ? -1 : 1);
      case GroupKind::Free: {
        for (size_t i = 0; i < a.w.size(); ++i) {
          int32_t x = a.w[i], y = b.w[i];
          if (x == y) continue;
          int32_t mx = x < 0 ? -x : x, my = y < 0 ? -y : y;
          if (mx != my) return mx < my ? -1 : 1;
          return x > 0 ? -1 : 1;
        }
        return 0;
      }
    }
    return 0;
  }

  // Symmetrized generating set, in element order.  For Z this is {1,-1}; the
  // ball builders step through these one at a time.
  std::vector<GroupElem> generators() const {
    std::vector<GroupElem> out;
    switch (kind_) {
      case GroupKind::Integer: {
        GroupElem p, m;
        p.n = 1;
        m.n = -1;
        out = {p, m};
        break;
      }
      case GroupKind::Cyclic:
      case GroupKind::Table: {
        std::vector<uint32_t> gens =
            kind_ == GroupKind::Cyclic ? std::vector<uint32_t>{1} : table_gens_;
        std::vector<bool> seen(order_, false);
        for (uint32_t g : gens) {
          GroupElem e;
          e.n = g;
          if (!seen[g] && g != 0) {
            seen[g] = true;
            out.push_back(e);
          }
          GroupElem i = inv(e);
          if (i.n != 0 && !seen[i.n]) {
            seen[i.n] = true;
            out.push_back(i);
          }
        }
        std::sort(out.begin(), out.end(),
                  [&](const GroupElem& a, const GroupElem& b) {
                    return compare(a, b) < 0;
                  });
        break;
      }
      case GroupKind::Free: {
        for (int i = 1; i <= rank_; ++i) {
          GroupElem p, m;
          p.w = {i};
          m.w = {-i};
          out.push_back(p);
          out.push_back(m);
        }
        break;
      }
    }
    return out;
  }

  uint64_t hash(const GroupElem& e) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(e.n));
    for (int32_t x : e.w) mix(static_cast<uint64_t>(static_cast<int64_t>(x)));
    return h;
  }

  // Shortest decomposition of `e` into generator steps, for geodesic
  // spelling.  Cyclic and table groups read the BFS parent table.
  std::vector<GroupElem> generator_path(const GroupElem& e) const {
    std::vector<GroupElem> steps;
    switch (kind_) {
      case GroupKind::Integer: {
        GroupElem s;
        s.n = e.n > 0 ? 1 : -1;
        for (int64_t i = 0; i < length(e); ++i) steps.push_back(s);
        break;
      }
      case GroupKind::Free:
        for (int32_t x : e.w) {
          GroupElem s;
          s.w = {x};
          steps.push_back(s);
        }
        break;
      case GroupKind::Cyclic:
      case GroupKind::Table: {
        int64_t cur = e.n;
        while (cur != 0) {
          GroupElem step;
          step.n = parent_step_[cur];
          // cur = prev * step, so prev = cur * step^-1
          GroupElem prev = mul((GroupElem{cur, {}}), inv(step));
          steps.push_back(step);
          cur = prev.n;
        }
        std::reverse(steps.begin(), steps.end());
        break;
      }
    }
    return steps;
  }

  const std::vector<std::vector<uint32_t>>& mul_table() const { return table_; }

 private:
  void build_cyclic_lengths() {
    lengths_.assign(order_, -1);
    parent_step_.assign(order_, 0);
    lengths_[0] = 0;
    std::deque<int64_t> q{0};
    GroupElem one;
    one.n = 1;
    std::vector<GroupElem> gens = {one, inv(one)};
    if (gens[1].n == gens[0].n) gens.pop_back();
    bfs_lengths(q, gens);
  }

  void build_table_lengths() {
    table_inv_.assign(order_, 0);
    for (int64_t i = 0; i < order_; ++i) {
      bool found = false;
      for (int64_t j = 0; j < order_; ++j)
        if (table_[i][j] == 0) {
          table_inv_[i] = static_cast<uint32_t>(j);
          found = true;
          break;
        }
      if (!found) fail(Errc::InvalidConfig, "table group element lacks inverse");
    }
    lengths_.assign(order_, -1);
    parent_step_.assign(order_, 0);
    lengths_[0] = 0;
    std::deque<int64_t> q{0};
    std::vector<GroupElem> gens;
    std::vector<bool> seen(order_, false);
    for (uint32_t g : table_gens_) {
      if (g == 0 || g >= order_)
        fail(Errc::InvalidConfig, "table group generator out of range");
      for (uint32_t x : {g, table_inv_[g]})
        if (!seen[x] && x != 0) {
          seen[x] = true;
          GroupElem e;
          e.n = x;
          gens.push_back(e);
        }
    }
    bfs_lengths(q, gens);
    for (int64_t i = 0; i < order_; ++i)
      if (lengths_[i] < 0)
        fail(Errc::InvalidConfig, "table group generators do not generate");
  }

  void bfs_lengths(std::deque<int64_t>& q, const std::vector<GroupElem>& gens) {
    while (!q.empty()) {
      int64_t x = q.front();
      q.pop_front();
      for (const GroupElem& g : gens) {
        GroupElem cur;
        cur.n = x;
        int64_t y = mul(cur, g).n;
        if (lengths_[y] < 0) {
          lengths_[y] = lengths_[x] + 1;
          parent_step_[y] = g.n;
          q.push_back(y);
        }
      }
    }
  }

  void validate_table() {
    if (order_ < 1) fail(Errc::InvalidConfig, "empty multiplication table");
    for (const auto& row : table_)
      if (static_cast<int64_t>(row.size()) != order_)
        fail(Errc::InvalidConfig, "multiplication table is not square");
    for (int64_t i = 0; i < order_; ++i) {
      if (table_[0][i] != i || table_[i][0] != i)
        fail(Errc::InvalidConfig, "table index 0 is not an identity");
      for (int64_t j = 0; j < order_; ++j)
        if (table_[i][j] >= order_)
          fail(Errc::InvalidConfig, "table entry out of range");
    }
    // rows and columns must be permutations
    for (int64_t i = 0; i < order_; ++i) {
      std::vector<bool> row(order_, false), col(order_, false);
      for (int64_t j = 0; j < order_; ++j) {
        row[table_[i][j]] = true;
        col[table_[j][i]] = true;
      }
      for (int64_t j = 0; j < order_; ++j)
        if (!row[j] || !col[j])
          fail(Errc::InvalidConfig, "table rows/columns are not permutations");
    }
    // associativity: full check for small orders, spot-check otherwise
    int64_t n = order_;
    if (n <= 24) {
      for (int64_t a = 0; a < n; ++a)
        for (int64_t b = 0; b < n; ++b)
          for (int64_t c = 0; c < n; ++c)
            if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
              fail(Errc::InvalidConfig, "multiplication table not associative");
    } else {
      uint64_t s = 88172645463325252ull;
      for (int t = 0; t < 4096; ++t) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        int64_t a = s % n, b = (s >> 16) % n, c = (s >> 32) % n;
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail(Errc::InvalidConfig, "multiplication table not associative");
      }
    }
  }

  GroupKind kind_ = GroupKind::Integer;
  int64_t order_ = 0;
  int rank_ = 0;
  std::vector<std::vector<uint32_t>> table_;
  std::vector<uint32_t> table_gens_;
  std::vector<uint32_t> table_inv_;
  std::vector<int64_t> lengths_;       // cyclic/table word lengths
  std::vector<int64_t> parent_step_;   // BFS step that discovered each element
};

}  // namespace gpg
