#include "ftik/phi.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace ftik {

std::string_view to_string(Method m) { return m == Method::brute ? "brute" : "fast"; }

PhiStats& PhiStats::operator+=(const PhiStats& o) {
  subdiagrams += o.subdiagrams;
  table_points += o.table_points;
  table_entries += o.table_entries;
  table_nodes += o.table_nodes;
  table_queries += o.table_queries;
  table_lookups += o.table_lookups;
  wall_ns += o.wall_ns;
  terms += o.terms;
  return *this;
}

TypeCounts& TypeCounts::operator+=(const TypeCounts& other) {
  for (const auto& [id, c] : other.terms) {
    auto it = std::lower_bound(terms.begin(), terms.end(), id,
                               [](const auto& term, uint32_t key) { return term.first < key; });
    if (it != terms.end() && it->first == id) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    } else if (c != 0) {
      terms.insert(it, {id, c});
    }
  }
  return *this;
}

uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(worker, workers) on `threads` threads, rethrowing the first failure.
template <class Fn>
void run_workers(int threads, Fn&& fn) {
  threads = std::max(threads, 1);
  if (threads == 1) {
    fn(0, 1);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          fn(w, threads);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_deadline(const EngineOptions& options) {
  if (options.deadline && Clock::now() > *options.deadline) {
    throw DeadlineExceeded("computation exceeded its deadline");
  }
}

// Integer counts keyed by diagram key, one instance per worker.
class KeyCounter {
 public:
  uint32_t intern(const std::string& key) {
    auto [it, inserted] = ids_.try_emplace(key, static_cast<uint32_t>(keys_.size()));
    if (inserted) {
      keys_.push_back(key);
      counts_.push_back(0);
    }
    return it->second;
  }
  void add(uint32_t id, int64_t c) { counts_[id] += c; }

  void merge_into(std::map<std::string, int64_t>& out) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (counts_[i] != 0) out[keys_[i]] += counts_[i];
    }
  }

 private:
  absl::flat_hash_map<std::string, uint32_t> ids_;
  std::vector<std::string> keys_;
  std::vector<int64_t> counts_;
};

GDVector divide_out(const std::map<std::string, int64_t>& counts, uint64_t divisor) {
  GDVector out;
  const auto d = static_cast<int64_t>(divisor);
  for (const auto& [key, c] : counts) {
    if (c % d != 0) {
      throw NonIntegralResult("coefficient " + std::to_string(c) + " of '" + key + "' is not divisible by " +
                              std::to_string(d));
    }
    out.add_term(DiagramKey(key), Coefficient(c / d));
  }
  return out;
}

// Per-coordinate gap structure of a placement map: coordinates sharing a gap
// form a group; sorted tuples only need the outer bounds of each group.
struct Placement {
  std::vector<int> gaps;
  std::vector<uint8_t> group_first;
  std::vector<uint8_t> group_last;
  std::vector<int> group_size;  // indexed by coordinate
};

std::vector<Placement> prepare_placements(int e, int f) {
  std::vector<Placement> out;
  for (const auto& lambda : enumerate_placements(e, f)) {
    Placement p;
    p.gaps.assign(lambda.gaps().begin(), lambda.gaps().end());
    const int len = static_cast<int>(p.gaps.size());
    p.group_first.resize(len);
    p.group_last.resize(len);
    p.group_size.resize(len);
    for (int i = 0; i < len; ++i) {
      p.group_first[i] = i == 0 || p.gaps[i - 1] != p.gaps[i];
      p.group_last[i] = i + 1 == len || p.gaps[i + 1] != p.gaps[i];
    }
    for (int i = 0; i < len;) {
      int j = i;
      while (j < len && p.gaps[j] == p.gaps[i]) ++j;
      for (int t = i; t < j; ++t) p.group_size[t] = j - i;
      i = j;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

GDVector ThetaTable::sum(std::span<const dyadic::Range> rect) const {
  std::map<uint32_t, int64_t> acc;
  table.visit(rect, [&](const TypeCounts& w) {
    for (const auto& [id, c] : w.terms) acc[id] += c;
  });
  GDVector out;
  for (const auto& [id, c] : acc) out.add_term(type_keys[id], Coefficient(c));
  return out;
}

std::vector<ThetaPoint> theta_points(const GaussDiagram& K, int f) {
  std::vector<ThetaPoint> out;
  std::string key;
  std::vector<int> scratch;
  for (SubsetCursor cursor(K.size(), f); cursor.valid(); cursor.advance()) {
    psi_key_into(K, cursor.current(), key, scratch);
    out.push_back(ThetaPoint{scratch, DiagramKey(key)});
  }
  return out;
}

ThetaTable theta_K(const GaussDiagram& K, int f, dyadic::TableOptions options) {
  if (f < 0) throw std::invalid_argument("f must be non-negative");
  const int bits = dyadic::bits_for(K.length());
  std::vector<dyadic::Coord> coords;
  std::vector<TypeCounts> weights;
  std::vector<GaussDiagram> types;
  std::vector<DiagramKey> type_keys;
  absl::flat_hash_map<std::string, uint32_t> ids;

  const uint64_t count = binomial(K.size(), f);
  coords.reserve(count * static_cast<uint64_t>(2 * f));
  weights.reserve(count);
  std::string key;
  std::vector<int> ends;
  for (SubsetCursor cursor(K.size(), f); cursor.valid(); cursor.advance()) {
    psi_key_into(K, cursor.current(), key, ends);
    auto [it, inserted] = ids.try_emplace(key, static_cast<uint32_t>(types.size()));
    if (inserted) {
      types.push_back(parse_gauss_code(key));
      type_keys.emplace_back(key);
    }
    coords.insert(coords.end(), ends.begin(), ends.end());
    weights.push_back(TypeCounts::single(it->second));
  }
  auto table = dyadic::WeightTable<TypeCounts>::build(2 * f, bits, std::move(coords), std::move(weights), options);
  return ThetaTable{f, K.size(), std::move(table), std::move(types), std::move(type_keys)};
}

PhiResult phi_k_brute(const GaussDiagram& K, int k, const EngineOptions& options) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  const auto start = Clock::now();
  const int threads = std::max(options.threads, 1);
  std::vector<KeyCounter> counters(threads);
  std::vector<uint64_t> visited(threads, 0);

  run_workers(threads, [&](int w, int workers) {
    std::string key;
    std::vector<int> scratch;
    KeyCounter& counter = counters[w];
    uint64_t index = 0;
    for (SubsetCursor cursor(K.size(), k); cursor.valid(); cursor.advance(), ++index) {
      if (index % static_cast<uint64_t>(workers) != static_cast<uint64_t>(w)) continue;
      if ((index & 0xFFFF) == 0) check_deadline(options);
      psi_key_into(K, cursor.current(), key, scratch);
      counter.add(counter.intern(key), 1);
      ++visited[w];
    }
  });

  std::map<std::string, int64_t> merged;
  PhiResult result;
  for (int w = 0; w < threads; ++w) {
    counters[w].merge_into(merged);
    result.stats.subdiagrams += visited[w];
  }
  result.k = k;
  result.method = Method::brute;
  result.split = SplitChoice{k, 0};
  result.vector = divide_out(merged, 1);
  result.stats.terms = result.vector.size();
  result.stats.wall_ns =
      static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
  return result;
}

PhiResult phi_k_fast(const GaussDiagram& K, int k, SplitChoice split, const EngineOptions& options) {
  if (k < 0 || split.e < 0 || split.f < 0 || split.e + split.f != k) {
    throw std::invalid_argument("split must satisfy e + f = k with e, f >= 0");
  }
  const auto start = Clock::now();
  const int n = K.size();
  const int e = split.e;
  const int f = split.f;

  PhiResult result;
  result.k = k;
  result.method = Method::fast;
  result.split = split;
  auto finish = [&] {
    result.stats.terms = result.vector.size();
    result.stats.wall_ns =
        static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
    return result;
  };
  if (k > n) return finish();

  const int threads = std::max(options.threads, 1);
  std::map<std::string, int64_t> merged;

  if (f == 0) {
    // A single (empty) placement and an empty inner sum: every E contributes psi(E).
    result.stats = {};
    std::vector<KeyCounter> counters(threads);
    run_workers(threads, [&](int w, int workers) {
      std::string key;
      std::vector<int> scratch;
      uint64_t index = 0;
      for (SubsetCursor cursor(n, e); cursor.valid(); cursor.advance(), ++index) {
        if (index % static_cast<uint64_t>(workers) != static_cast<uint64_t>(w)) continue;
        if ((index & 0xFFFF) == 0) check_deadline(options);
        psi_key_into(K, cursor.current(), key, scratch);
        counters[w].add(counters[w].intern(key), 1);
      }
    });
    for (auto& c : counters) c.merge_into(merged);
    result.stats.subdiagrams = binomial(n, e);
    result.vector = divide_out(merged, binomial(k, e));
    return finish();
  }

  const ThetaTable theta = theta_K(K, f, options.table);
  check_deadline(options);
  const auto placements = prepare_placements(e, f);
  const int64_t end_marker = K.length();  // E_{2e} = 2n
  const int64_t domain = int64_t{1} << theta.table.bits();
  const std::size_t type_count = theta.types.size();

  struct WorkerState {
    KeyCounter results;
    uint64_t queries = 0;
    uint64_t lookups = 0;
  };
  std::vector<WorkerState> states(threads);

  run_workers(threads, [&](int w, int workers) {
    WorkerState& st = states[w];
    absl::flat_hash_map<std::string, uint32_t> etype_ids;
    std::vector<GaussDiagram> etypes;
    absl::flat_hash_map<std::tuple<uint32_t, uint32_t, uint32_t>, uint32_t> memo;
    std::vector<int64_t> acc(type_count, 0);
    std::vector<uint32_t> touched;
    std::vector<dyadic::Range> gaps(2 * e + 1);
    std::vector<dyadic::Range> rect(2 * f);
    std::string key;
    std::vector<int> ends;

    uint64_t index = 0;
    for (SubsetCursor cursor(n, e); cursor.valid(); cursor.advance(), ++index) {
      if (index % static_cast<uint64_t>(workers) != static_cast<uint64_t>(w)) continue;
      if ((index & 0x3F) == 0) check_deadline(options);

      psi_key_into(K, cursor.current(), key, ends);
      auto [eit, fresh] = etype_ids.try_emplace(key, static_cast<uint32_t>(etypes.size()));
      if (fresh) etypes.push_back(parse_gauss_code(key));
      const uint32_t etype = eit->second;

      // Gap g is the open interval (E_{g-1}, E_g) with E_{-1} = -1, E_{2e} = 2n.
      for (int g = 0; g <= 2 * e; ++g) {
        const int64_t left = g == 0 ? -1 : ends[g - 1];
        const int64_t right = g == 2 * e ? end_marker : ends[g];
        gaps[g] = dyadic::Range{left + 1, right};
      }

      for (uint32_t li = 0; li < placements.size(); ++li) {
        const Placement& p = placements[li];
        bool feasible = true;
        for (int i = 0; i < 2 * f && feasible; ++i) {
          const dyadic::Range& gap = gaps[p.gaps[i]];
          feasible = gap.hi - gap.lo >= p.group_size[i];
          if (options.relax_sorted) {
            rect[i] = dyadic::Range{p.group_first[i] ? gap.lo : 0, p.group_last[i] ? gap.hi : domain};
          } else {
            rect[i] = gap;
          }
        }
        if (!feasible) continue;

        ++st.queries;
        st.lookups += theta.table.visit(rect, [&](const TypeCounts& weight) {
          for (const auto& [id, c] : weight.terms) {
            if (acc[id] == 0) touched.push_back(id);
            acc[id] += c;
          }
        });

        for (uint32_t ftype : touched) {
          auto [mit, missing] = memo.try_emplace(std::tuple{etype, li, ftype}, 0);
          if (missing) {
            const GaussDiagram merged_diagram =
                superimpose(etypes[etype], theta.types[ftype], PlacementMap(p.gaps));
            mit->second = st.results.intern(serialize(merged_diagram).text());
          }
          st.results.add(mit->second, acc[ftype]);
          acc[ftype] = 0;
        }
        touched.clear();
      }
    }
  });

  for (auto& st : states) {
    st.results.merge_into(merged);
    result.stats.table_queries += st.queries;
    result.stats.table_lookups += st.lookups;
  }
  result.stats.subdiagrams = binomial(n, e) + binomial(n, f);
  result.stats.table_points = theta.table.point_count();
  result.stats.table_entries = theta.table.entry_count();
  result.stats.table_nodes = theta.table.node_count();
  result.vector = divide_out(merged, binomial(k, e));
  return finish();
}

PhiResult phi_k(const GaussDiagram& K, int k, Method method, const EngineOptions& options) {
  if (method == Method::brute) return phi_k_brute(K, k, options);
  return phi_k_fast(K, k, SplitChoice::balanced(k), options);
}

PhiResult phi_le_k(const GaussDiagram& K, int k, Method method, const EngineOptions& options) {
  if (k < 1) throw std::invalid_argument("phi_le_k needs k >= 1");
  PhiResult total;
  total.k = k;
  total.method = method;
  total.split = method == Method::fast ? SplitChoice::balanced(k) : SplitChoice{k, 0};
  for (int i = 1; i <= k; ++i) {
    PhiResult part = phi_k(K, i, method, options);
    total.vector += part.vector;
    total.stats += part.stats;
  }
  total.stats.terms = total.vector.size();
  return total;
}

Method choose_method(int n, int k) {
  if (k <= 0 || n < 2 * k) return Method::brute;
  const SplitChoice s = SplitChoice::balanced(k);
  if (s.f == 0) return Method::fast;
  // Rough per-operation costs measured on this implementation, in units of one
  // brute-force subdiagram.
  const double m = dyadic::bits_for(2 * static_cast<int64_t>(n));
  const double per_query = 0.4 * std::pow(m + 1, s.f);
  const double brute = static_cast<double>(binomial(n, k));
  const double build = static_cast<double>(binomial(n, s.f)) * std::pow(m + 1, s.f);
  const double queries = static_cast<double>(binomial(n, s.e)) * static_cast<double>(binomial(2 * k, 2 * s.f));
  return build + queries * per_query < brute ? Method::fast : Method::brute;
}

}  // namespace ftik
