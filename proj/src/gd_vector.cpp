#include "ftik/gd_vector.hpp"

#include <algorithm>
#include <stdexcept>

namespace ftik {

std::string to_string(const Coefficient& c) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(c) == 1) return numerator(c).str();
  return numerator(c).str() + "/" + denominator(c).str();
}

Coefficient parse_coefficient(std::string_view text) {
  using boost::multiprecision::cpp_int;
  auto parse_int = [&](std::string_view s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size() ||
        !std::all_of(s.begin() + i, s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    cpp_int v(std::string(s.substr(i)));
    return (i == 1 && s[0] == '-') ? cpp_int(-v) : v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Coefficient(parse_int(text, true));
  const cpp_int num = parse_int(text.substr(0, slash), true);
  const cpp_int den = parse_int(text.substr(slash + 1), false);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Coefficient(num, den);
}

GDVector::GDVector(std::initializer_list<std::pair<const DiagramKey, Coefficient>> terms) {
  for (const auto& [key, c] : terms) add_term(key, c);
}

GDVector GDVector::unit(DiagramKey key) {
  GDVector v;
  v.terms_.emplace(std::move(key), Coefficient(1));
  return v;
}

Coefficient GDVector::coefficient(const DiagramKey& key) const {
  const auto it = terms_.find(key);
  return it == terms_.end() ? Coefficient(0) : it->second;
}

void GDVector::add_term(const DiagramKey& key, const Coefficient& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

GDVector& GDVector::operator+=(const GDVector& other) {
  for (const auto& [key, c] : other.terms_) add_term(key, c);
  return *this;
}

GDVector& GDVector::operator*=(const Coefficient& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coeff] : terms_) coeff *= c;
  return *this;
}

std::optional<int> GDVector::max_arrows() const {
  std::optional<int> best;
  for (const auto& [key, c] : terms_) best = std::max(best.value_or(0), key.arrow_count());
  return best;
}

GDVector add(const GDVector& a, const GDVector& b) {
  GDVector out = a;
  out += b;
  return out;
}

GDVector scale(const GDVector& a, const Coefficient& c) {
  GDVector out = a;
  out *= c;
  return out;
}

Coefficient mass(const GDVector& a) {
  Coefficient total = 0;
  for (const auto& [key, c] : a.terms()) total += c;
  return total;
}

}  // namespace ftik
