#pragma once

// phi_k(K): the sum of all reparametrized k-arrow subdiagrams of K, computed
// by enumeration or by the split E + F formula, where the F half is read off a
// dyadic look-up table (theta_K) of all f-arrow subdiagrams keyed by their
// sorted endpoint positions.

#include <absl/container/inlined_vector.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ftik/dyadic.hpp"
#include "ftik/gauss.hpp"
#include "ftik/gd_vector.hpp"

namespace ftik {

enum class Method { brute, fast };

std::string_view to_string(Method m);

struct SplitChoice {
  int e = 0;
  int f = 0;

  // e = ceil(k/2), f = floor(k/2).
  static SplitChoice balanced(int k) { return {(k + 1) / 2, k / 2}; }
  bool operator==(const SplitChoice&) const = default;
};

struct PhiStats {
  uint64_t subdiagrams = 0;    // subsets enumerated (k-subsets, or E and F subsets)
  uint64_t table_points = 0;
  uint64_t table_entries = 0;
  uint64_t table_nodes = 0;
  uint64_t table_queries = 0;
  uint64_t table_lookups = 0;
  uint64_t wall_ns = 0;
  uint64_t terms = 0;

  PhiStats& operator+=(const PhiStats& o);
};

struct PhiResult {
  int k = 0;
  GDVector vector;
  Method method = Method::brute;
  SplitChoice split;
  PhiStats stats;
};

struct EngineOptions {
  int threads = 1;
  // Passed through to the theta_K table.
  dyadic::TableOptions table{.leaf_capacity = 1024, .node_limit = 0};
  // Shrink rectangle sides that are implied by the sorted support of theta_K.
  bool relax_sorted = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class NonIntegralResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeadlineExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sparse integer counts over interned diagram types; the weight stored in
// theta_K. Terms are kept sorted by type id.
struct TypeCounts {
  absl::InlinedVector<std::pair<uint32_t, int64_t>, 1> terms;

  static TypeCounts single(uint32_t type) {
    TypeCounts t;
    t.terms.emplace_back(type, 1);
    return t;
  }
  TypeCounts& operator+=(const TypeCounts& other);
  bool operator==(const TypeCounts&) const = default;
};

struct ThetaTable {
  int f = 0;
  int n = 0;
  dyadic::WeightTable<TypeCounts> table;
  std::vector<GaussDiagram> types;  // psi(F) per type id
  std::vector<DiagramKey> type_keys;

  // Sum of theta_K over a rectangle of 2f half-open ranges.
  [[nodiscard]] GDVector sum(std::span<const dyadic::Range> rect) const;
};

// One point per f-subset F: its 2f endpoint positions in increasing order,
// together with psi(F).
struct ThetaPoint {
  std::vector<int> ends;
  DiagramKey key;
};
std::vector<ThetaPoint> theta_points(const GaussDiagram& K, int f);

ThetaTable theta_K(const GaussDiagram& K, int f, dyadic::TableOptions options = {});

PhiResult phi_k_brute(const GaussDiagram& K, int k, const EngineOptions& options = {});

// Throws std::invalid_argument unless split.e + split.f == k, and
// NonIntegralResult if the overcount does not divide out exactly.
PhiResult phi_k_fast(const GaussDiagram& K, int k, SplitChoice split, const EngineOptions& options = {});

PhiResult phi_k(const GaussDiagram& K, int k, Method method, const EngineOptions& options = {});

// phi_1 + ... + phi_k, k >= 1. The fast method uses the balanced split per term.
PhiResult phi_le_k(const GaussDiagram& K, int k, Method method, const EngineOptions& options = {});

// Brute force when its estimated cost is below the table-based estimate.
Method choose_method(int n, int k);

uint64_t binomial(int n, int k);

}  // namespace ftik
