#pragma once

// Exact formal linear combinations of Gauss diagrams.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ftik/gauss.hpp"

namespace ftik {

using Coefficient = boost::multiprecision::cpp_rational;

// "p/q" in lowest terms, or an integer string when q == 1.
std::string to_string(const Coefficient& c);

// Accepts "p", "-p", "p/q". Throws std::invalid_argument on anything else or q == 0.
Coefficient parse_coefficient(std::string_view text);

class GDVector {
 public:
  using Terms = std::map<DiagramKey, Coefficient>;

  GDVector() = default;
  GDVector(std::initializer_list<std::pair<const DiagramKey, Coefficient>> terms);

  // The single term 1 * key.
  static GDVector unit(DiagramKey key);

  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  // Zero when absent.
  [[nodiscard]] Coefficient coefficient(const DiagramKey& key) const;

  // Adds c * key, dropping the term if it cancels.
  void add_term(const DiagramKey& key, const Coefficient& c);

  GDVector& operator+=(const GDVector& other);
  GDVector& operator*=(const Coefficient& c);

  // Largest arrow count among the keys; nullopt for the zero vector.
  [[nodiscard]] std::optional<int> max_arrows() const;

  bool operator==(const GDVector&) const = default;

 private:
  Terms terms_;
};

GDVector add(const GDVector& a, const GDVector& b);
GDVector scale(const GDVector& a, const Coefficient& c);
Coefficient mass(const GDVector& a);

inline GDVector operator+(const GDVector& a, const GDVector& b) { return add(a, b); }

}  // namespace ftik
