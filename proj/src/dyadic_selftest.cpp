#include <random>

#include "ftik/dyadic.hpp"

namespace ftik::dyadic {

SelftestReport table_selftest(int dim, int cases, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](int64_t bound) { return static_cast<int64_t>(rng() % static_cast<uint64_t>(bound)); };
  SelftestReport report{dim, cases, 0};
  for (int c = 0; c < cases; ++c) {
    const int bits = static_cast<int>(below(8));
    const int64_t domain = int64_t{1} << bits;
    const auto q = static_cast<std::size_t>(below(201));
    std::vector<Coord> coords(q * static_cast<std::size_t>(dim));
    std::vector<int64_t> weights(q);
    for (auto& x : coords) x = static_cast<Coord>(below(domain));
    for (auto& w : weights) w = below(9) - 3;
    const TableOptions options{.leaf_capacity = static_cast<std::size_t>(c % 2 == 0 ? 0 : below(8)),
                               .node_limit = 0};
    const auto table = WeightTable<int64_t>::build(dim, bits, coords, weights, options);

    std::vector<Range> rect(dim);
    for (auto& r : rect) {
      int64_t a = below(domain + 1);
      int64_t b = below(domain + 1);
      if (a > b) std::swap(a, b);
      r = Range{a, b};
    }
    int64_t naive = 0;
    for (std::size_t i = 0; i < q; ++i) {
      bool inside = true;
      for (int j = 0; j < dim; ++j) inside = inside && rect[j].contains(coords[i * dim + j]);
      if (inside) naive += weights[i];
    }
    if (table.query(rect) == naive) ++report.passed;
  }
  return report;
}

}  // namespace ftik::dyadic
