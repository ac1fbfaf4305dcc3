#include "ftik/invariants.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace ftik {

Coefficient Functional::weight(const DiagramKey& key) const {
  const auto it = weights.find(key);
  return it == weights.end() ? Coefficient(0) : it->second;
}

Coefficient Functional::apply(const GDVector& v) const {
  Coefficient total = 0;
  // Iterate the smaller side.
  if (v.size() <= weights.size()) {
    for (const auto& [key, c] : v.terms()) total += c * weight(key);
  } else {
    for (const auto& [key, w] : weights) total += w * v.coefficient(key);
  }
  return total;
}

Coefficient evaluate(const Functional& omega, const GaussDiagram& K, Method method, const EngineOptions& options) {
  Coefficient value = 0;
  if (omega.include_phi0) value += omega.weight(DiagramKey{});
  if (omega.k >= 1) value += omega.apply(phi_le_k(K, omega.k, method, options).vector);
  return value;
}

namespace {

Functional interleaved_pattern(bool tail_first) {
  Functional omega;
  omega.k = 2;
  const char a = tail_first ? 'O' : 'U';
  const char b = tail_first ? 'U' : 'O';
  for (Sign s : {Sign::plus, Sign::minus}) {
    for (Sign t : {Sign::plus, Sign::minus}) {
      std::string key;
      key += a;
      key += '1';
      key += to_char(s);
      key += ' ';
      key += b;
      key += '2';
      key += to_char(t);
      key += ' ';
      key += b;
      key += '1';
      key += to_char(s);
      key += ' ';
      key += a;
      key += '2';
      key += to_char(t);
      omega.weights.emplace(DiagramKey(key), Coefficient(to_int(s) * to_int(t)));
    }
  }
  return omega;
}

// Positions as a sequence of (arrow, role); arrows are rebuilt from it.
using Sequence = std::vector<Endpoint>;

Sequence to_sequence(const GaussDiagram& K) {
  Sequence seq(K.length());
  for (int p = 0; p < K.length(); ++p) seq[p] = K.at(p);
  return seq;
}

GaussDiagram from_sequence(const Sequence& seq, const std::vector<Sign>& signs) {
  // Arrow ids in `seq` may have gaps after deletions; keep their relative order.
  std::vector<int> ids;
  for (const auto& ep : seq) ids.push_back(ep.arrow);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Arrow> arrows(ids.size());
  for (int p = 0; p < static_cast<int>(seq.size()); ++p) {
    const int a = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), seq[p].arrow) - ids.begin());
    (seq[p].role == Role::tail ? arrows[a].tail : arrows[a].head) = p;
    arrows[a].sign = signs[seq[p].arrow];
  }
  return GaussDiagram(std::move(arrows));
}

std::vector<Sign> signs_of(const GaussDiagram& K) {
  std::vector<Sign> s;
  for (const auto& a : K.arrows()) s.push_back(a.sign);
  return s;
}

void check_gap(const GaussDiagram& K, int gap) {
  if (gap < 0 || gap > K.length()) {
    throw MoveError(MoveError::Kind::invalid_gap,
                    "gap " + std::to_string(gap) + " outside [0, " + std::to_string(K.length()) + "]");
  }
}

void check_position(const GaussDiagram& K, int pos) {
  if (pos < 0 || pos + 1 >= K.length()) {
    throw MoveError(MoveError::Kind::pattern_not_found,
                    "positions " + std::to_string(pos) + ", " + std::to_string(pos + 1) + " not in the diagram");
  }
}

}  // namespace

Functional v2_functional() { return interleaved_pattern(true); }
Functional v2_functional_reversed() { return interleaved_pattern(false); }

GaussDiagram apply_move(const GaussDiagram& K, const MoveSpec& move) {
  Sequence seq = to_sequence(K);
  std::vector<Sign> signs = signs_of(K);
  const int n = K.size();

  switch (move.kind) {
    case MoveKind::r1_insert: {
      check_gap(K, move.first);
      const Endpoint tail{n, Role::tail};
      const Endpoint head{n, Role::head};
      signs.push_back(move.sign);
      const std::vector<Endpoint> pair = move.tail_first ? std::vector{tail, head} : std::vector{head, tail};
      seq.insert(seq.begin() + move.first, pair.begin(), pair.end());
      break;
    }
    case MoveKind::r2_insert: {
      check_gap(K, move.first);
      check_gap(K, move.second);
      if (move.first == move.second) {
        throw MoveError(MoveError::Kind::invalid_gap, "R2 tails and heads must go into different gaps");
      }
      const int alpha = n;
      const int beta = n + 1;
      signs.push_back(move.sign);
      signs.push_back(-move.sign);
      const std::vector<Endpoint> tails{{alpha, Role::tail}, {beta, Role::tail}};
      const std::vector<Endpoint> heads = move.variant == R2Variant::parallel
                                              ? std::vector<Endpoint>{{alpha, Role::head}, {beta, Role::head}}
                                              : std::vector<Endpoint>{{beta, Role::head}, {alpha, Role::head}};
      // Insert into the later gap first so the earlier gap index stays valid.
      if (move.first > move.second) {
        seq.insert(seq.begin() + move.first, tails.begin(), tails.end());
        seq.insert(seq.begin() + move.second, heads.begin(), heads.end());
      } else {
        seq.insert(seq.begin() + move.second, heads.begin(), heads.end());
        seq.insert(seq.begin() + move.first, tails.begin(), tails.end());
      }
      break;
    }
    case MoveKind::r1_delete: {
      check_position(K, move.first);
      if (seq[move.first].arrow != seq[move.first + 1].arrow) {
        throw MoveError(MoveError::Kind::pattern_not_found,
                        "no R1 arrow at positions " + std::to_string(move.first) + ", " +
                            std::to_string(move.first + 1));
      }
      seq.erase(seq.begin() + move.first, seq.begin() + move.first + 2);
      break;
    }
    case MoveKind::r2_delete: {
      check_position(K, move.first);
      check_position(K, move.second);
      const Endpoint t0 = seq[move.first];
      const Endpoint t1 = seq[move.first + 1];
      const Endpoint h0 = seq[move.second];
      const Endpoint h1 = seq[move.second + 1];
      const bool ok = t0.role == Role::tail && t1.role == Role::tail && h0.role == Role::head &&
                      h1.role == Role::head && t0.arrow != t1.arrow &&
                      ((h0.arrow == t0.arrow && h1.arrow == t1.arrow) ||
                       (h0.arrow == t1.arrow && h1.arrow == t0.arrow)) &&
                      signs[t0.arrow] == -signs[t1.arrow];
      if (!ok) {
        throw MoveError(MoveError::Kind::pattern_not_found,
                        "no R2 pair with tails at " + std::to_string(move.first) + " and heads at " +
                            std::to_string(move.second));
      }
      const int hi = std::max(move.first, move.second);
      const int lo = std::min(move.first, move.second);
      seq.erase(seq.begin() + hi, seq.begin() + hi + 2);
      seq.erase(seq.begin() + lo, seq.begin() + lo + 2);
      break;
    }
  }
  return from_sequence(seq, signs);
}

MoveSpec inverse_move(const GaussDiagram& K, const MoveSpec& insertion) {
  (void)K;
  MoveSpec del = insertion;
  switch (insertion.kind) {
    case MoveKind::r1_insert:
      del.kind = MoveKind::r1_delete;
      break;
    case MoveKind::r2_insert:
      del.kind = MoveKind::r2_delete;
      if (insertion.first < insertion.second) {
        del.second = insertion.second + 2;
      } else {
        del.first = insertion.first + 2;
      }
      break;
    default:
      throw std::invalid_argument("inverse_move expects an insertion");
  }
  return del;
}

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

MoveSpec random_insertion(const GaussDiagram& K, std::mt19937_64& rng) {
  const auto gaps = static_cast<uint64_t>(K.length()) + 1;
  MoveSpec m;
  m.sign = uniform_below(rng, 2) ? Sign::plus : Sign::minus;
  if (uniform_below(rng, 2) == 0 || gaps < 2) {
    m.kind = MoveKind::r1_insert;
    m.first = static_cast<int>(uniform_below(rng, gaps));
    m.tail_first = uniform_below(rng, 2) == 0;
  } else {
    m.kind = MoveKind::r2_insert;
    m.first = static_cast<int>(uniform_below(rng, gaps));
    m.second = static_cast<int>(uniform_below(rng, gaps - 1));
    if (m.second >= m.first) ++m.second;
    m.variant = uniform_below(rng, 2) ? R2Variant::parallel : R2Variant::antiparallel;
  }
  return m;
}

GaussDiagram random_diagram(int n, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<int> positions(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < 2 * n; ++i) positions[i] = i;
  for (int i = 2 * n - 1; i > 0; --i) {
    std::swap(positions[i], positions[uniform_below(rng, static_cast<uint64_t>(i) + 1)]);
  }
  std::vector<Arrow> arrows(n);
  for (int a = 0; a < n; ++a) {
    int tail = positions[2 * a];
    int head = positions[2 * a + 1];
    if (uniform_below(rng, 2)) std::swap(tail, head);
    arrows[a] = Arrow{tail, head, uniform_below(rng, 2) ? Sign::plus : Sign::minus};
  }
  return GaussDiagram(std::move(arrows));
}

}  // namespace ftik
