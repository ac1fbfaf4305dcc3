#pragma once

// Dyadic intervals [2^p q, 2^p (q+1)), the truncation chain of a point,
// maximal dyadic decompositions of integer ranges, and a weighted look-up
// table over dyadic rectangles answering rectangle sums with a bounded number
// of lookups.

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ftik::dyadic {

using Coord = int32_t;

// Half-open integer range [lo, hi).
struct Range {
  int64_t lo = 0;
  int64_t hi = 0;

  [[nodiscard]] bool empty() const noexcept { return hi <= lo; }
  [[nodiscard]] bool contains(int64_t x) const noexcept { return lo <= x && x < hi; }
  bool operator==(const Range&) const = default;
};

struct DyadicInterval {
  int level = 0;      // log2 of the length: number of free low bits
  int64_t index = 0;  // block index

  [[nodiscard]] int64_t lo() const noexcept { return index << level; }
  [[nodiscard]] int64_t hi() const noexcept { return (index + 1) << level; }
  [[nodiscard]] int64_t length() const noexcept { return int64_t{1} << level; }
  [[nodiscard]] bool contains(int64_t x) const noexcept { return lo() <= x && x < hi(); }
  [[nodiscard]] bool contains(const DyadicInterval& o) const noexcept {
    return level >= o.level && (o.index >> (level - o.level)) == index;
  }
  [[nodiscard]] Range range() const noexcept { return {lo(), hi()}; }

  // Binary prefix followed by `level` stars, e.g. "10**" for [8, 12) with 4 bits.
  [[nodiscard]] std::string pattern(int bits) const;

  bool operator==(const DyadicInterval&) const = default;
};

using DyadicRectangle = std::vector<DyadicInterval>;

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Smallest m with 2^m >= size (0 for sizes <= 1).
int bits_for(int64_t domain_size);

// The m+1 nested dyadic intervals containing x, from {x} up to [0, 2^m).
std::vector<DyadicInterval> truncations(int64_t x, int bits);

// Disjoint maximal dyadic pieces covering [lo, hi), left to right.
std::vector<DyadicInterval> maximal_decomposition(int64_t lo, int64_t hi, int bits);

inline constexpr int kMaxBits = 23;
inline constexpr int kMaxDim = 16;
inline constexpr int kMaxPieces = 2 * kMaxBits + 2;

// Allocation-free variant for hot paths; returns the piece count. `lo`/`hi`
// must already lie in [0, 2^bits].
int maximal_decomposition_into(int64_t lo, int64_t hi, int bits,
                               std::span<DyadicInterval, kMaxPieces> out) noexcept;

class TableLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TableOptions {
  // Prefix rectangles holding at most this many points are kept as point
  // lists and filtered at query time instead of being expanded into dyadic
  // sub-rectangles. Zero expands everything.
  std::size_t leaf_capacity = 0;
  // Abort the build once this many nodes exist. Zero means unlimited.
  std::size_t node_limit = 0;
};

template <class W>
struct WeightTraits {
  static bool is_zero(const W& w) { return w == W{}; }
};

// Map from dyadic rectangles of [0, 2^bits)^dim to the summed weight of the
// points they contain.
//
// Storage is nested by coordinate: a node at depth j stands for a rectangle
// whose first j sides are dyadic and whose remaining sides are the full range;
// its children are the nonempty dyadic refinements of side j. Depth-`dim`
// nodes are the table entries. With leaf_capacity = 0 every nonempty dyadic
// rectangle is an entry, so each point lands in exactly (bits+1)^dim entries.
template <class W>
class WeightTable {
 public:
  WeightTable(int dim, int bits, TableOptions options = {}) : dim_(dim), bits_(bits), options_(options) {
    if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("table dimension out of range");
    if (bits < 0 || bits > kMaxBits) throw std::invalid_argument("table bits out of range");
  }

  // `coords` holds weights.size() points, `dim` coordinates each, row-major.
  static WeightTable build(int dim, int bits, std::vector<Coord> coords, std::vector<W> weights,
                           TableOptions options = {}) {
    WeightTable table(dim, bits, options);
    if (coords.size() != weights.size() * static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("coordinate count does not match point count");
    }
    const int64_t limit = int64_t{1} << bits;
    for (Coord c : coords) {
      if (c < 0 || c >= limit) {
        throw RangeError("coordinate " + std::to_string(c) + " outside [0, " + std::to_string(limit) + ")");
      }
    }
    table.coords_ = std::move(coords);
    table.weights_ = std::move(weights);
    std::vector<uint32_t> ids(table.weights_.size());
    for (uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
    table.root_ = table.build_node(0, std::move(ids));
    return table;
  }

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] int bits() const noexcept { return bits_; }
  [[nodiscard]] std::size_t point_count() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t entry_count() const noexcept { return entry_weights_.size(); }
  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t bucket_count() const noexcept { return buckets_; }

  // Calls fn(weight) for every stored weight making up the sum over `rect`;
  // returns the number of child lookups performed. Upper bounds are clamped
  // to 2^bits.
  template <class Fn>
  std::size_t visit(std::span<const Range> rect, Fn&& fn) const {
    if (static_cast<int>(rect.size()) != dim_) throw std::invalid_argument("rectangle dimension mismatch");
    const int64_t limit = int64_t{1} << bits_;
    // Scratch is per thread; fn must not re-enter visit on the same thread.
    thread_local QueryState q;
    for (int j = 0; j < dim_; ++j) {
      if (rect[j].lo < 0 || rect[j].hi < rect[j].lo) {
        throw RangeError("query bounds [" + std::to_string(rect[j].lo) + ", " + std::to_string(rect[j].hi) +
                         ") invalid");
      }
      q.bounds[j] = Range{std::min(rect[j].lo, limit), std::min(rect[j].hi, limit)};
      if (q.bounds[j].empty()) return 0;
      q.count[j] = -1;  // decomposed lazily
    }
    if (root_ == kAbsent) return 0;
    std::size_t lookups = 0;
    visit_node(root_, 0, q, fn, lookups);
    return lookups;
  }

  [[nodiscard]] W query(std::span<const Range> rect) const {
    W total{};
    visit(rect, [&](const W& w) { total += w; });
    return total;
  }

  // Summed weight of one dyadic rectangle (zero when nothing is stored).
  [[nodiscard]] W at(std::span<const DyadicInterval> rect) const {
    if (static_cast<int>(rect.size()) != dim_) throw std::invalid_argument("rectangle dimension mismatch");
    std::vector<Range> ranges;
    for (const auto& d : rect) {
      if (d.level > bits_ || d.index < 0 || d.hi() > (int64_t{1} << bits_)) {
        throw RangeError("dyadic interval outside the table domain");
      }
      ranges.push_back(d.range());
    }
    W total{};
    uint32_t node = root_;
    for (int j = 0; j < dim_ && node != kAbsent; ++j) {
      if (nodes_[node].kind == Kind::bucket) {
        sum_bucket(node, j, ranges, [&](const W& w) { total += w; });
        return total;
      }
      node = child(node, rect[j]);
    }
    if (node != kAbsent) total += entry_weights_[nodes_[node].begin];
    return total;
  }

  // Every materialized entry with its rectangle.
  [[nodiscard]] std::vector<std::pair<DyadicRectangle, W>> entries() const {
    std::vector<std::vector<std::pair<DyadicInterval, uint32_t>>> kids(nodes_.size());
    for (const auto& [key, c] : children_) {
      const auto parent = static_cast<uint32_t>(key >> kCodeBits);
      kids[parent].emplace_back(decode(static_cast<uint32_t>(key & kCodeMask)), c);
    }
    std::vector<std::pair<DyadicRectangle, W>> out;
    if (root_ == kAbsent) return out;
    DyadicRectangle path;
    auto walk = [&](auto&& self, uint32_t node) -> void {
      if (nodes_[node].kind == Kind::entry) {
        out.emplace_back(path, entry_weights_[nodes_[node].begin]);
        return;
      }
      for (const auto& [d, c] : kids[node]) {
        path.push_back(d);
        self(self, c);
        path.pop_back();
      }
    };
    walk(walk, root_);
    return out;
  }

 private:
  enum class Kind : uint8_t { internal, entry, bucket };

  struct Node {
    uint32_t begin = 0;  // entry: index into entry_weights_; bucket: offset into bucket_ids_
    uint32_t count = 0;  // bucket: number of points
    Kind kind = Kind::internal;
  };

  struct QueryState {
    std::array<Range, kMaxDim> bounds;
    std::array<int, kMaxDim> count;
    std::array<std::array<DyadicInterval, kMaxPieces>, kMaxDim> pieces;
  };

  static constexpr uint32_t kAbsent = UINT32_MAX;
  static constexpr int kCodeBits = kMaxBits + 1;
  static constexpr uint64_t kCodeMask = (uint64_t{1} << kCodeBits) - 1;

  // Heap numbering: the interval of level p and index q is 2^(bits-p) + q.
  [[nodiscard]] uint32_t encode(const DyadicInterval& d) const noexcept {
    return (uint32_t{1} << (bits_ - d.level)) + static_cast<uint32_t>(d.index);
  }
  [[nodiscard]] DyadicInterval decode(uint32_t code) const noexcept {
    int width = 0;
    while ((code >> (width + 1)) != 0) ++width;
    return DyadicInterval{bits_ - width, static_cast<int64_t>(code - (uint32_t{1} << width))};
  }
  [[nodiscard]] uint32_t child(uint32_t node, const DyadicInterval& d) const {
    const auto it = children_.find((uint64_t{node} << kCodeBits) | encode(d));
    return it == children_.end() ? kAbsent : it->second;
  }

  [[nodiscard]] Coord coord(uint32_t id, int j) const noexcept {
    return coords_[static_cast<std::size_t>(id) * dim_ + j];
  }

  uint32_t new_node(Node node) {
    if (options_.node_limit != 0 && nodes_.size() >= options_.node_limit) {
      throw TableLimitExceeded("look-up table exceeded " + std::to_string(options_.node_limit) + " nodes");
    }
    nodes_.push_back(node);
    return static_cast<uint32_t>(nodes_.size() - 1);
  }

  uint32_t build_node(int depth, std::vector<uint32_t> ids) {
    if (ids.empty()) return kAbsent;
    if (depth == dim_) {
      W sum{};
      for (uint32_t id : ids) sum += weights_[id];
      if (WeightTraits<W>::is_zero(sum)) return kAbsent;
      entry_weights_.push_back(std::move(sum));
      return new_node(Node{static_cast<uint32_t>(entry_weights_.size() - 1), 0, Kind::entry});
    }
    if (options_.leaf_capacity != 0 && ids.size() <= options_.leaf_capacity) {
      // Sorted by the first unresolved coordinate so scans can start and stop early.
      std::sort(ids.begin(), ids.end(),
                [&](uint32_t a, uint32_t b) { return coord(a, depth) < coord(b, depth); });
      const auto offset = static_cast<uint32_t>(bucket_ids_.size());
      bucket_ids_.insert(bucket_ids_.end(), ids.begin(), ids.end());
      // Column-major within the bucket: all of side 0, then all of side 1, ...
      bucket_coords_.resize(static_cast<std::size_t>(offset + ids.size()) * dim_);
      for (int j = 0; j < dim_; ++j) {
        Coord* column = bucket_coords_.data() + static_cast<std::size_t>(offset) * dim_ + j * ids.size();
        for (std::size_t t = 0; t < ids.size(); ++t) column[t] = coord(ids[t], j);
      }
      ++buckets_;
      return new_node(Node{offset, static_cast<uint32_t>(ids.size()), Kind::bucket});
    }
    const uint32_t self = new_node(Node{});
    std::sort(ids.begin(), ids.end(),
              [&](uint32_t a, uint32_t b) { return coord(a, depth) < coord(b, depth); });
    // Truncation chain of side `depth`: runs of equal x >> p for p = 0..bits.
    for (int p = 0; p <= bits_; ++p) {
      std::size_t i = 0;
      while (i < ids.size()) {
        const int64_t block = coord(ids[i], depth) >> p;
        std::size_t j = i + 1;
        while (j < ids.size() && (coord(ids[j], depth) >> p) == block) ++j;
        std::vector<uint32_t> run(ids.begin() + static_cast<std::ptrdiff_t>(i),
                                  ids.begin() + static_cast<std::ptrdiff_t>(j));
        const uint32_t c = build_node(depth + 1, std::move(run));
        if (c != kAbsent) children_.emplace((uint64_t{self} << kCodeBits) | encode({p, block}), c);
        i = j;
      }
    }
    return self;
  }

  template <class Fn>
  void sum_bucket(uint32_t node, int depth, std::span<const Range> bounds, Fn&& fn) const {
    const Node& n = nodes_[node];
    const Coord* base = bucket_coords_.data() + static_cast<std::size_t>(n.begin) * dim_;
    const Coord* lead = base + static_cast<std::size_t>(depth) * n.count;
    const auto first = static_cast<uint32_t>(std::lower_bound(lead, lead + n.count, bounds[depth].lo) - lead);
    const auto last = static_cast<uint32_t>(std::lower_bound(lead + first, lead + n.count, bounds[depth].hi) - lead);
    // x in [lo, hi) as one unsigned comparison per side.
    std::array<uint32_t, kMaxDim> lo{}, width{};
    for (int j = depth + 1; j < dim_; ++j) {
      lo[j] = static_cast<uint32_t>(bounds[j].lo);
      width[j] = static_cast<uint32_t>(bounds[j].hi - bounds[j].lo);
    }
    for (uint32_t t = first; t < last; ++t) {
      bool inside = true;
      for (int j = depth + 1; j < dim_; ++j) {
        inside &= static_cast<uint32_t>(base[static_cast<std::size_t>(j) * n.count + t]) - lo[j] < width[j];
      }
      if (inside) fn(weights_[bucket_ids_[n.begin + t]]);
    }
  }

  template <class Fn>
  void visit_node(uint32_t node, int depth, QueryState& q, Fn& fn, std::size_t& lookups) const {
    const Node& n = nodes_[node];
    if (n.kind == Kind::entry) {
      fn(entry_weights_[n.begin]);
      return;
    }
    if (n.kind == Kind::bucket) {
      sum_bucket(node, depth, std::span<const Range>(q.bounds.data(), dim_), fn);
      return;
    }
    if (q.count[depth] < 0) {
      q.count[depth] = maximal_decomposition_into(q.bounds[depth].lo, q.bounds[depth].hi, bits_, q.pieces[depth]);
    }
    for (int i = 0; i < q.count[depth]; ++i) {
      ++lookups;
      const uint32_t c = child(node, q.pieces[depth][i]);
      if (c != kAbsent) visit_node(c, depth + 1, q, fn, lookups);
    }
  }

  int dim_;
  int bits_;
  TableOptions options_;
  std::vector<Coord> coords_;
  std::vector<W> weights_;
  std::vector<Node> nodes_;
  std::vector<W> entry_weights_;
  std::vector<uint32_t> bucket_ids_;
  std::vector<Coord> bucket_coords_;  // dim_ coordinates per bucket point
  std::size_t buckets_ = 0;
  absl::flat_hash_map<uint64_t, uint32_t> children_;
  uint32_t root_ = kAbsent;
};

struct SelftestReport {
  int dim = 0;
  int cases = 0;
  int passed = 0;
};

// Random point sets (up to 200 points, up to 7 bits) and rectangles; compares
// table sums against filtering the points directly.
SelftestReport table_selftest(int dim, int cases, uint64_t seed);

}  // namespace ftik::dyadic
