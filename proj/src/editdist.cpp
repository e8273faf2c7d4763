#include "cpcer/editdist.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace cpcer {

namespace {

std::uint64_t dp_distance(TokenView a, TokenView b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m == 0) return n;
  if (n == 0) return m;

  std::vector<std::uint64_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    std::uint64_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::uint64_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[n];
}

// Myers' bit-vector algorithm, evaluated in horizontal stripes of 64 pattern
// rows. Each stripe streams the whole text, handing the per-column horizontal
// deltas (-1/0/+1) down to the next stripe, so memory stays O(|text|)
// regardless of pattern length or alphabet size.
std::uint64_t myers_distance(TokenView pattern, TokenView text) {
  const std::size_t m = pattern.size();
  const std::size_t n = text.size();
  if (m == 0) return n;
  if (n == 0) return m;

  std::unordered_map<char32_t, std::uint32_t> id_of;
  id_of.reserve(m * 2);
  std::vector<std::uint32_t> pat_ids(m);
  std::uint32_t next_id = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto [it, inserted] = id_of.try_emplace(pattern[i], next_id);
    if (inserted) ++next_id;
    pat_ids[i] = it->second;
  }
  const std::uint32_t absent = next_id;  // text tokens outside the pattern alphabet
  std::vector<std::uint32_t> text_ids(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto it = id_of.find(text[j]);
    text_ids[j] = it == id_of.end() ? absent : it->second;
  }

  std::vector<std::uint64_t> eq(static_cast<std::size_t>(next_id) + 1, 0);
  std::vector<std::int8_t> hdelta(n, +1);  // top boundary: D[0][j] - D[0][j-1]

  const std::size_t stripes = (m + 63) / 64;
  for (std::size_t s = 0; s < stripes; ++s) {
    const std::size_t row0 = s * 64;
    const std::size_t width = std::min<std::size_t>(64, m - row0);
    const std::uint64_t last_bit = 1ULL << (width - 1);
    for (std::size_t r = 0; r < width; ++r) eq[pat_ids[row0 + r]] |= 1ULL << r;

    std::uint64_t vp = ~0ULL;
    std::uint64_t vn = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t eq_j = eq[text_ids[j]];
      const std::int8_t hin = hdelta[j];
      const std::uint64_t xv = eq_j | vn;
      if (hin < 0) eq_j |= 1ULL;
      const std::uint64_t xh = (((eq_j & vp) + vp) ^ vp) | eq_j;
      std::uint64_t ph = vn | ~(xh | vp);
      std::uint64_t mh = vp & xh;
      std::int8_t hout = 0;
      if (ph & last_bit) {
        hout = +1;
      } else if (mh & last_bit) {
        hout = -1;
      }
      ph <<= 1;
      mh <<= 1;
      if (hin < 0) {
        mh |= 1ULL;
      } else if (hin > 0) {
        ph |= 1ULL;
      }
      vp = mh | ~(xv | ph);
      vn = ph & xv;
      hdelta[j] = hout;
    }
    for (std::size_t r = 0; r < width; ++r) eq[pat_ids[row0 + r]] = 0;
  }

  std::int64_t dist = static_cast<std::int64_t>(m);
  for (std::size_t j = 0; j < n; ++j) dist += hdelta[j];
  return static_cast<std::uint64_t>(dist);
}

}  // namespace

EditDistanceResult edit_distance_dp(TokenView a, TokenView b) {
  return {dp_distance(a, b), a.size(), b.size()};
}

EditDistanceResult edit_distance_fast(TokenView a, TokenView b) {
  // The shorter side becomes the bit-vector pattern: fewer stripes.
  const std::uint64_t d = a.size() <= b.size() ? myers_distance(a, b) : myers_distance(b, a);
  return {d, a.size(), b.size()};
}

EditDistanceResult edit_distance(TokenView a, TokenView b, DistanceEngine engine) {
  return engine == DistanceEngine::kBitParallel ? edit_distance_fast(a, b)
                                                : edit_distance_dp(a, b);
}

double cer(TokenView ref, TokenView hyp, DistanceEngine engine) {
  if (ref.empty()) throw EmptyReference("CER undefined: reference has no tokens");
  const auto r = edit_distance(ref, hyp, engine);
  return static_cast<double>(r.distance) / static_cast<double>(r.ref_length);
}

}  // namespace cpcer
