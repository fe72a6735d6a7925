#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace gpg {

struct DeltaReport {
  int64_t delta_num = 0;  // delta = delta_num / 2
  bool exhaustive = true;
  uint64_t quadruples = 0;
  uint64_t seed = 0;
  std::array<uint32_t, 4> witness{0, 0, 0, 0};

  double delta() const { return static_cast<double>(delta_num) / 2.0; }
};

namespace detail {

inline unsigned __int128 count4(unsigned __int128 m) {
  return m * (m - 1) / 2 * (m - 2) / 3 * (m - 3) / 4;
}

}  // namespace detail

// Largest pairing sum minus the median one; equals twice the four-point
// defect of the quadruple.
inline int64_t pairing_defect(int64_t dxy, int64_t dzw, int64_t dxz,
                              int64_t dyw, int64_t dxw, int64_t dyz) {
  int64_t s1 = dxy + dzw, s2 = dxz + dyw, s3 = dxw + dyz;
  int64_t hi = std::max({s1, s2, s3});
  int64_t mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
  return hi - mid;
}

// Exhaustive four-point scan of a full distance matrix.  When idmap is given
// the witness is reported through it (the matrix rows are a sampled subset of
// a larger point set).
inline DeltaReport delta_scan(const std::vector<std::vector<int64_t>>& d,
                              const uint32_t* idmap = nullptr) {
  DeltaReport rep;
  const uint32_t n = static_cast<uint32_t>(d.size());
  auto id = [&](uint32_t i) { return idmap ? idmap[i] : i; };
  for (uint32_t x = 0; x < n; ++x)
    for (uint32_t y = x + 1; y < n; ++y)
      for (uint32_t z = y + 1; z < n; ++z)
        for (uint32_t w = z + 1; w < n; ++w) {
          ++rep.quadruples;
          int64_t v = pairing_defect(d[x][y], d[z][w], d[x][z], d[y][w],
                                     d[x][w], d[y][z]);
          if (v > rep.delta_num) {
            rep.delta_num = v;
            rep.witness = {id(x), id(y), id(z), id(w)};
          }
        }
  return rep;
}

}  // namespace gpg
