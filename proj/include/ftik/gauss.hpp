#pragma once

// Gauss diagrams of long knots: arrows on integer endpoint positions, the
// canonical text form used as both map key and interchange format, the
// forgetful map psi, placement maps and superimposition.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftik {

enum class Sign : int8_t { plus = 1, minus = -1 };

constexpr Sign operator-(Sign s) noexcept {
  return s == Sign::plus ? Sign::minus : Sign::plus;
}
constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr char to_char(Sign s) noexcept { return s == Sign::plus ? '+' : '-'; }

// Tails sit on the over-strand, heads on the under-strand.
enum class Role : uint8_t { tail, head };

struct Arrow {
  int tail = 0;
  int head = 0;
  Sign sign = Sign::plus;

  bool operator==(const Arrow&) const = default;
};

struct Endpoint {
  int arrow = -1;
  Role role = Role::tail;
};

class GaussDiagram {
 public:
  GaussDiagram() = default;

  // Throws std::invalid_argument unless the 2n endpoints are exactly 0..2n-1.
  explicit GaussDiagram(std::vector<Arrow> arrows);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(arrows_.size()); }
  [[nodiscard]] int length() const noexcept { return 2 * size(); }
  [[nodiscard]] bool empty() const noexcept { return arrows_.empty(); }

  [[nodiscard]] std::span<const Arrow> arrows() const noexcept { return arrows_; }
  [[nodiscard]] const Arrow& arrow(int i) const { return arrows_.at(i); }
  [[nodiscard]] Endpoint at(int position) const { return endpoints_.at(position); }

  bool operator==(const GaussDiagram& other) const { return arrows_ == other.arrows_; }

 private:
  std::vector<Arrow> arrows_;
  std::vector<Endpoint> endpoints_;
};

// Canonical serialization of a diagram. Equal keys <=> equal diagrams.
class DiagramKey {
 public:
  DiagramKey() = default;
  explicit DiagramKey(std::string text) : text_(std::move(text)) {}

  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] bool empty() const noexcept { return text_.empty(); }
  // Number of arrows, i.e. half the token count.
  [[nodiscard]] int arrow_count() const noexcept;

  auto operator<=>(const DiagramKey&) const = default;

 private:
  std::string text_;
};

class GaussCodeError : public std::runtime_error {
 public:
  enum class Kind { malformed_token, label_not_paired, sign_mismatch };

  GaussCodeError(Kind kind, int token_index, std::string token, const std::string& what)
      : std::runtime_error(what), kind_(kind), token_index_(token_index), token_(std::move(token)) {}

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  // Zero-based index of the offending token (first occurrence for pairing errors).
  [[nodiscard]] int token_index() const noexcept { return token_index_; }
  [[nodiscard]] const std::string& token() const noexcept { return token_; }

 private:
  Kind kind_;
  int token_index_;
  std::string token_;
};

// Tokens are O<label><sign> / U<label><sign>; labels are arbitrary positive
// integers. Arrows come out ordered by the first appearance of their label.
GaussDiagram parse_gauss_code(std::string_view text);

DiagramKey serialize(const GaussDiagram& diagram);

// Re-parses and re-serializes, turning any valid code into its canonical key.
DiagramKey canonical_key(std::string_view text);

// The diagram with every sign flipped.
GaussDiagram mirror_signs(const GaussDiagram& diagram);

class Subdiagram {
 public:
  // `chosen` must be strictly increasing arrow indices of `parent`.
  Subdiagram(const GaussDiagram& parent, std::vector<int> chosen);

  [[nodiscard]] const GaussDiagram& parent() const noexcept { return *parent_; }
  [[nodiscard]] std::span<const int> chosen() const noexcept { return chosen_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(chosen_.size()); }

  // Endpoint positions in the parent's parametrization, increasing.
  [[nodiscard]] std::vector<int> endpoints() const;

 private:
  const GaussDiagram* parent_;
  std::vector<int> chosen_;
};

GaussDiagram psi(const Subdiagram& sub);

// psi(sub) serialized, without materializing the intermediate diagram. `chosen`
// must be increasing; `scratch` is reused between calls.
void psi_key_into(const GaussDiagram& parent, std::span<const int> chosen, std::string& out,
                  std::vector<int>& scratch);

class PlacementMap {
 public:
  PlacementMap() = default;
  explicit PlacementMap(std::vector<int> gaps) : gaps_(std::move(gaps)) {}

  [[nodiscard]] std::span<const int> gaps() const noexcept { return gaps_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(gaps_.size()); }
  [[nodiscard]] int operator[](int i) const { return gaps_[i]; }

  bool operator==(const PlacementMap&) const = default;

 private:
  std::vector<int> gaps_;
};

// Inserts the endpoints of `inserted` into the gaps of `base`: endpoint i goes
// into gap lambda[i], where gap j precedes base position j. Throws
// std::invalid_argument on a length mismatch, out-of-range or decreasing map.
GaussDiagram superimpose(const GaussDiagram& base, const GaussDiagram& inserted,
                         const PlacementMap& lambda);

// Every non-decreasing map [0, 2*ell) -> [0, 2*k], in lexicographic order.
std::vector<PlacementMap> enumerate_placements(int k, int ell);

template <class Fn>
void for_each_placement(int k, int ell, Fn&& fn) {
  for (const auto& lambda : enumerate_placements(k, ell)) fn(lambda);
}

// Steps through the size-subsets of {0..n-1} in lexicographic order.
class SubsetCursor {
 public:
  SubsetCursor(int n, int size);

  [[nodiscard]] bool valid() const noexcept { return valid_; }
  [[nodiscard]] std::span<const int> current() const noexcept { return indices_; }
  void advance();

 private:
  int n_;
  std::vector<int> indices_;
  bool valid_;
};

template <class Fn>
void for_each_subdiagram(const GaussDiagram& diagram, int size, Fn&& fn) {
  for (SubsetCursor cursor(diagram.size(), size); cursor.valid(); cursor.advance()) {
    const auto cur = cursor.current();
    fn(Subdiagram(diagram, std::vector<int>(cur.begin(), cur.end())));
  }
}

std::vector<Subdiagram> enumerate_subdiagrams(const GaussDiagram& diagram, int size);

}  // namespace ftik
