#include "ftik/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "ftik/bench.hpp"
#include "ftik/dyadic.hpp"
#include "ftik/invariants.hpp"
#include "ftik/phi.hpp"

namespace ftik::cli {

using nlohmann::ordered_json;

int threads_from_env() {
  const char* env = std::getenv("FTIK_THREADS");
  int t = env ? std::atoi(env) : 0;
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(t, 1);
}

namespace {

struct Line {
  int number;
  std::string text;
};

// Non-comment lines of a Gauss-code stream; blank lines are empty diagrams.
std::vector<Line> read_code_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  int number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!text.empty() && text.front() == '#') continue;
    lines.push_back({number, text});
  }
  return lines;
}

std::string describe(const GaussCodeError& e, int line) {
  return "line " + std::to_string(line) + ": token " + std::to_string(e.token_index() + 1) + " '" + e.token() +
         "': " + e.what();
}

ordered_json terms_json(const GDVector& v) {
  ordered_json terms = ordered_json::array();
  for (const auto& [key, c] : v.terms()) terms.push_back(ordered_json{{"diagram", key.text()}, {"coeff", to_string(c)}});
  return terms;
}

ordered_json result_json(const PhiResult& r, bool timing) {
  ordered_json stats{{"subdiagrams", r.stats.subdiagrams},     {"table_points", r.stats.table_points},
                     {"table_entries", r.stats.table_entries}, {"table_nodes", r.stats.table_nodes},
                     {"table_queries", r.stats.table_queries}, {"table_lookups", r.stats.table_lookups},
                     {"terms", r.stats.terms}};
  if (timing) stats["wall_ns"] = r.stats.wall_ns;
  return ordered_json{{"k", r.k},
                      {"method", std::string(to_string(r.method))},
                      {"e", r.split.e},
                      {"f", r.split.f},
                      {"terms", terms_json(r.vector)},
                      {"stats", std::move(stats)}};
}

std::optional<Method> method_from(const std::string& name, int n, int k) {
  if (name == "brute") return Method::brute;
  if (name == "fast") return Method::fast;
  if (name == "auto") return choose_method(n, k);
  return std::nullopt;
}

// Input from --in when given, otherwise the provided stream.
struct Input {
  std::ifstream file;
  std::istream* stream;

  Input(const std::string& path, std::istream& fallback) : stream(&fallback) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw CLI::ValidationError("--in", "cannot open " + path);
      stream = &file;
    }
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite type invariants of Gauss diagrams"};
  app.require_subcommand(1);

  EngineOptions engine;
  engine.threads = threads_from_env();
  std::size_t leaf_capacity = engine.table.leaf_capacity;
  app.add_option("--leaf-capacity", leaf_capacity, "Point-list cutoff inside the look-up table (0 = none)");

  // phi
  auto* phi_cmd = app.add_subcommand("phi", "Compute phi_k for each input Gauss code");
  int phi_k_value = 0;
  std::string phi_method = "auto";
  std::optional<int> phi_e;
  std::string phi_in;
  bool phi_le = false;
  bool phi_timing = false;
  phi_cmd->add_option("--k", phi_k_value, "Arrow count")->required()->check(CLI::NonNegativeNumber);
  phi_cmd->add_option("--method", phi_method, "brute|fast|auto")->check(CLI::IsMember({"brute", "fast", "auto"}));
  phi_cmd->add_option("--e", phi_e, "Size of the enumerated half (fast method)");
  phi_cmd->add_option("--in", phi_in, "Input file (default stdin)");
  phi_cmd->add_flag("--le", phi_le, "Compute phi_1 + ... + phi_k instead");
  phi_cmd->add_flag("--timing", phi_timing, "Include wall time in stats");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a finite type invariant");
  std::string eval_functional;
  std::string eval_method = "auto";
  std::string eval_in;
  eval_cmd->add_option("--functional", eval_functional, "Built-in name (v2) or JSON file")->required();
  eval_cmd->add_option("--method", eval_method, "brute|fast|auto")->check(CLI::IsMember({"brute", "fast", "auto"}));
  eval_cmd->add_option("--in", eval_in, "Input file (default stdin)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Compare fast and brute phi on random diagrams");
  int verify_k = 3, verify_n = 8, verify_trials = 100;
  uint64_t verify_seed = 1;
  verify_cmd->add_option("--k", verify_k)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--n", verify_n)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--trials", verify_trials)->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", verify_seed);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time phi_k over geometrically spaced n");
  int bench_k = 4, bench_nmin = 16, bench_nmax = 64, bench_steps = 5, bench_reps = 3;
  std::string bench_method = "both";
  uint64_t bench_seed = 1;
  bench_cmd->add_option("--k", bench_k)->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--nmin", bench_nmin)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--nmax", bench_nmax)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--steps", bench_steps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", bench_reps, "Repetitions per size (median reported)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--method", bench_method, "brute|fast|auto|both")
      ->check(CLI::IsMember({"brute", "fast", "auto", "both"}));
  bench_cmd->add_option("--seed", bench_seed);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Print seeded random Gauss codes");
  int gen_n = 0, gen_count = 1;
  uint64_t gen_seed = 1;
  gen_cmd->add_option("--n", gen_n)->required()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--count", gen_count)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen_seed);

  // table-selftest
  auto* selftest_cmd = app.add_subcommand("table-selftest", "Check look-up table sums against direct filtering");
  int selftest_cases = 1000;
  uint64_t selftest_seed = 1;
  selftest_cmd->add_option("--cases", selftest_cases)->check(CLI::NonNegativeNumber);
  selftest_cmd->add_option("--seed", selftest_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  engine.table.leaf_capacity = leaf_capacity;

  try {
    if (*phi_cmd) {
      if (phi_e && phi_method == "brute") {
        err << "--e only applies to the fast method\n";
        return kParseError;
      }
      if (phi_e && (*phi_e < 0 || *phi_e > phi_k_value)) {
        err << "--e must lie in [0, k]\n";
        return kParseError;
      }
      if (phi_le && (phi_k_value < 1 || phi_e)) {
        err << "--le needs k >= 1 and no --e\n";
        return kParseError;
      }
      Input input(phi_in, in);
      for (const auto& line : read_code_lines(*input.stream)) {
        GaussDiagram K;
        try {
          K = parse_gauss_code(line.text);
        } catch (const GaussCodeError& e) {
          err << describe(e, line.number) << "\n";
          return kParseError;
        }
        PhiResult r;
        if (phi_le) {
          r = phi_le_k(K, phi_k_value, *method_from(phi_method, K.size(), phi_k_value), engine);
        } else if (phi_e) {
          r = phi_k_fast(K, phi_k_value, SplitChoice{*phi_e, phi_k_value - *phi_e}, engine);
        } else {
          r = phi_k(K, phi_k_value, *method_from(phi_method, K.size(), phi_k_value), engine);
        }
        out << result_json(r, phi_timing).dump() << "\n";
      }
      return kOk;
    }

    if (*eval_cmd) {
      Functional omega;
      try {
        omega = load_functional(eval_functional);
      } catch (const UnknownFunctional& e) {
        err << e.what() << "\n";
        return kUnknownFunctional;
      }
      Input input(eval_in, in);
      for (const auto& line : read_code_lines(*input.stream)) {
        GaussDiagram K;
        try {
          K = parse_gauss_code(line.text);
        } catch (const GaussCodeError& e) {
          err << describe(e, line.number) << "\n";
          return kParseError;
        }
        const Method method = *method_from(eval_method, K.size(), std::max(omega.k, 1));
        const Coefficient value = evaluate(omega, K, method, engine);
        out << ordered_json{{"input", line.text}, {"value", to_string(value)}}.dump() << "\n";
      }
      return kOk;
    }

    if (*verify_cmd) {
      int passed = 0;
      for (int t = 0; t < verify_trials; ++t) {
        const uint64_t seed = verify_seed + static_cast<uint64_t>(t);
        const GaussDiagram K = random_diagram(verify_n, seed);
        bool ok = true;
        for (int i = 0; i <= verify_k && ok; ++i) {
          const GDVector expected = phi_k_brute(K, i, engine).vector;
          for (int e = 0; e <= i && ok; ++e) {
            if (phi_k_fast(K, i, SplitChoice{e, i - e}, engine).vector != expected) {
              err << "mismatch: seed=" << seed << " k=" << i << " e=" << e << " code=\"" << serialize(K).text()
                  << "\"\n";
              ok = false;
            }
          }
        }
        passed += ok ? 1 : 0;
      }
      out << passed << "/" << verify_trials << " pass\n";
      return passed == verify_trials ? kOk : kMismatch;
    }

    if (*bench_cmd) {
      if (bench_nmax < bench_nmin) {
        err << "--nmax must be at least --nmin\n";
        return kParseError;
      }
      std::vector<std::string> methods;
      if (bench_method == "both") {
        methods = {"brute", "fast"};
      } else {
        methods = {bench_method};
      }
      out << kBenchCsvHeader << "\n";
      for (const auto& name : methods) {
        std::vector<double> xs, ys;
        for (int n : geometric_sizes(bench_nmin, bench_nmax, bench_steps)) {
          const GaussDiagram K = random_diagram(n, bench_seed);
          const Method method = *method_from(name, n, bench_k);
          const BenchRecord rec = bench_phi(K, bench_k, method, bench_reps, engine);
          out << to_csv(rec) << "\n" << std::flush;
          xs.push_back(n);
          ys.push_back(std::max<double>(static_cast<double>(rec.wall_ns), 1.0));
        }
        if (xs.size() >= 2) err << "slope " << name << ": " << loglog_slope(xs, ys) << "\n";
      }
      return kOk;
    }

    if (*gen_cmd) {
      for (int i = 0; i < gen_count; ++i) {
        out << serialize(random_diagram(gen_n, gen_seed + static_cast<uint64_t>(i))).text() << "\n";
      }
      return kOk;
    }

    if (*selftest_cmd) {
      bool all = true;
      for (int dim = 1; dim <= 4; ++dim) {
        const auto report = dyadic::table_selftest(dim, selftest_cases, selftest_seed + static_cast<uint64_t>(dim));
        out << "dim " << dim << ": " << report.passed << "/" << report.cases << " pass\n";
        all = all && report.passed == report.cases;
      }
      return all ? kOk : kMismatch;
    }
  } catch (const NonIntegralResult& e) {
    err << e.what() << "\n";
    return kNonIntegral;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kParseError;
  }
  return kOk;
}

}  // namespace ftik::cli
