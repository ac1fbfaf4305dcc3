#include "ftik/bench.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftik {

std::string to_csv(const BenchRecord& r) {
  return std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::string(to_string(r.method)) + "," +
         std::to_string(r.split.e) + "," + std::to_string(r.split.f) + "," + std::to_string(r.wall_ns) + "," +
         std::to_string(r.table_entries) + "," + std::to_string(r.table_queries) + "," + std::to_string(r.terms);
}

std::vector<int> geometric_sizes(int nmin, int nmax, int steps) {
  if (nmin < 1 || nmax < nmin || steps < 1) throw std::invalid_argument("need 1 <= nmin <= nmax and steps >= 1");
  std::vector<int> out;
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    const int n = static_cast<int>(std::lround(nmin * std::pow(static_cast<double>(nmax) / nmin, t)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

BenchRecord bench_phi(const GaussDiagram& K, int k, Method method, int reps, const EngineOptions& options) {
  std::vector<uint64_t> times;
  PhiResult last;
  for (int r = 0; r < std::max(reps, 1); ++r) {
    last = phi_k(K, k, method, options);
    times.push_back(last.stats.wall_ns);
  }
  std::sort(times.begin(), times.end());
  BenchRecord rec;
  rec.n = K.size();
  rec.k = k;
  rec.method = method;
  rec.split = last.split;
  rec.wall_ns = times[times.size() / 2];
  rec.table_entries = last.stats.table_entries;
  rec.table_queries = last.stats.table_queries;
  rec.terms = last.stats.terms;
  return rec;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ftik
