#pragma once

// Finite type invariants as linear functionals on phi_{<=k}, the built-in
// type-2 invariant, and the diagram generators used to exercise them:
// Reidemeister 1/2 insertions and deletions, and seeded random diagrams.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ftik/gauss.hpp"
#include "ftik/gd_vector.hpp"
#include "ftik/phi.hpp"

namespace ftik {

struct Functional {
  int k = 0;
  std::map<DiagramKey, Coefficient> weights;
  bool include_phi0 = false;

  [[nodiscard]] Coefficient weight(const DiagramKey& key) const;
  // Linear extension to a formal combination.
  [[nodiscard]] Coefficient apply(const GDVector& v) const;
};

Coefficient evaluate(const Functional& omega, const GaussDiagram& K, Method method = Method::fast,
                     const EngineOptions& options = {});

// Counts two-arrow subdiagrams whose endpoints read, left to right: tail of A,
// head of B, head of A, tail of B; each weighted by the product of the signs.
Functional v2_functional();

// The same pattern with heads and tails exchanged.
Functional v2_functional_reversed();

class UnknownFunctional : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"k": int, "include_phi0": bool, "weights": [{"diagram": key, "coeff": rational}]}
Functional functional_from_json(std::string_view text);
std::string functional_to_json(const Functional& omega);

// "v2" or a path to a JSON file.
Functional load_functional(const std::string& name_or_path);

enum class MoveKind { r1_insert, r1_delete, r2_insert, r2_delete };
enum class R2Variant { parallel, antiparallel };

// Insertions address gaps (gap g precedes position g, 0 <= g <= 2n); deletions
// address positions of the pattern to remove.
struct MoveSpec {
  MoveKind kind = MoveKind::r1_insert;
  // r1_insert: gap; r2_insert: gap receiving both tails;
  // r1_delete: position of the first endpoint; r2_delete: position of the first tail.
  int first = 0;
  // r2_insert: gap receiving both heads; r2_delete: position of the first head.
  int second = 0;
  bool tail_first = true;  // r1_insert: tail precedes head
  // r1_insert: the new sign; r2_insert: sign of the arrow whose tail comes first.
  Sign sign = Sign::plus;
  R2Variant variant = R2Variant::parallel;
};

class MoveError : public std::invalid_argument {
 public:
  enum class Kind { invalid_gap, pattern_not_found };
  MoveError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  [[nodiscard]] Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

GaussDiagram apply_move(const GaussDiagram& K, const MoveSpec& move);

// The deletion undoing `insertion` once it has been applied to K.
MoveSpec inverse_move(const GaussDiagram& K, const MoveSpec& insertion);

// A uniformly drawn R1 or R2 insertion valid for K.
MoveSpec random_insertion(const GaussDiagram& K, std::mt19937_64& rng);

// Uniform perfect matching of 0..2n-1 with uniform orientations and signs.
// Deterministic in (n, seed) across platforms.
GaussDiagram random_diagram(int n, uint64_t seed);

// Uniform integer in [0, bound) from raw engine output.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound);

}  // namespace ftik
