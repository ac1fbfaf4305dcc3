#include "ftik/dyadic.hpp"

namespace ftik::dyadic {

std::string DyadicInterval::pattern(int bits) const {
  std::string out;
  out.reserve(static_cast<std::size_t>(bits));
  const int64_t base = lo();
  for (int b = bits - 1; b >= 0; --b) {
    if (b < level) {
      out.push_back('*');
    } else {
      out.push_back(((base >> b) & 1) ? '1' : '0');
    }
  }
  return out;
}

int bits_for(int64_t domain_size) {
  int m = 0;
  while ((int64_t{1} << m) < domain_size) ++m;
  return m;
}

std::vector<DyadicInterval> truncations(int64_t x, int bits) {
  if (bits < 0 || bits > 62 || x < 0 || x >= (int64_t{1} << bits)) {
    throw RangeError("x = " + std::to_string(x) + " outside [0, 2^" + std::to_string(bits) + ")");
  }
  std::vector<DyadicInterval> out;
  out.reserve(static_cast<std::size_t>(bits) + 1);
  for (int p = 0; p <= bits; ++p) out.push_back({p, x >> p});
  return out;
}

int maximal_decomposition_into(int64_t lo, int64_t hi, int bits,
                               std::span<DyadicInterval, kMaxPieces> out) noexcept {
  int count = 0;
  while (lo < hi) {
    int p = 0;
    // Grow while the block stays aligned, inside [lo, hi) and inside the domain.
    while (p < bits && (lo & ((int64_t{1} << (p + 1)) - 1)) == 0 && lo + (int64_t{1} << (p + 1)) <= hi) ++p;
    out[count++] = DyadicInterval{p, lo >> p};
    lo += int64_t{1} << p;
  }
  return count;
}

std::vector<DyadicInterval> maximal_decomposition(int64_t lo, int64_t hi, int bits) {
  if (bits < 0 || bits > kMaxBits || lo < 0 || hi < lo || hi > (int64_t{1} << bits)) {
    throw RangeError("bounds [" + std::to_string(lo) + ", " + std::to_string(hi) + ") outside [0, 2^" +
                     std::to_string(bits) + "]");
  }
  std::array<DyadicInterval, kMaxPieces> buf;
  const int n = maximal_decomposition_into(lo, hi, bits, buf);
  return {buf.begin(), buf.begin() + n};
}

}  // namespace ftik::dyadic
