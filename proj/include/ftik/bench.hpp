#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ftik/gauss.hpp"
#include "ftik/phi.hpp"

namespace ftik {

struct BenchRecord {
  int n = 0;
  int k = 0;
  Method method = Method::brute;
  SplitChoice split;
  uint64_t wall_ns = 0;  // median over repetitions
  uint64_t table_entries = 0;
  uint64_t table_queries = 0;
  uint64_t terms = 0;
};

inline constexpr const char* kBenchCsvHeader = "n,k,method,e,f,wall_ns,table_entries,table_queries,terms";

std::string to_csv(const BenchRecord& r);

// Roughly geometric, strictly increasing sizes from nmin to nmax inclusive.
std::vector<int> geometric_sizes(int nmin, int nmax, int steps);

// Runs phi_k `reps` times on K and keeps the median wall time.
BenchRecord bench_phi(const GaussDiagram& K, int k, Method method, int reps, const EngineOptions& options = {});

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ftik
