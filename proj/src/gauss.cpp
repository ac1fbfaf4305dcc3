#include "ftik/gauss.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <utility>

namespace ftik {

GaussDiagram::GaussDiagram(std::vector<Arrow> arrows) : arrows_(std::move(arrows)) {
  const int len = length();
  endpoints_.assign(len, Endpoint{});
  auto place = [&](int pos, int arrow, Role role) {
    if (pos < 0 || pos >= len) {
      throw std::invalid_argument("endpoint position " + std::to_string(pos) + " outside [0, " +
                                  std::to_string(len) + ")");
    }
    if (endpoints_[pos].arrow != -1) {
      throw std::invalid_argument("endpoint position " + std::to_string(pos) + " used twice");
    }
    endpoints_[pos] = Endpoint{arrow, role};
  };
  for (int i = 0; i < size(); ++i) {
    place(arrows_[i].tail, i, Role::tail);
    place(arrows_[i].head, i, Role::head);
  }
}

int DiagramKey::arrow_count() const noexcept {
  int tokens = 0;
  bool in_token = false;
  for (char c : text_) {
    const bool space = c == ' ' || c == '\t';
    if (!space && !in_token) ++tokens;
    in_token = !space;
  }
  return tokens / 2;
}

namespace {

struct Token {
  Role role;
  uint64_t label;
  Sign sign;
};

bool parse_token(std::string_view tok, Token& out) {
  if (tok.size() < 3) return false;
  if (tok.front() == 'O') {
    out.role = Role::tail;
  } else if (tok.front() == 'U') {
    out.role = Role::head;
  } else {
    return false;
  }
  if (tok.back() == '+') {
    out.sign = Sign::plus;
  } else if (tok.back() == '-') {
    out.sign = Sign::minus;
  } else {
    return false;
  }
  const std::string_view digits = tok.substr(1, tok.size() - 2);
  if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.label);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return false;
  return out.label > 0;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.push_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

void append_token(std::string& out, Role role, int label, Sign sign) {
  if (!out.empty()) out.push_back(' ');
  out.push_back(role == Role::tail ? 'O' : 'U');
  char buf[16];
  const auto res = std::to_chars(buf, buf + sizeof buf, label);
  out.append(buf, res.ptr);
  out.push_back(to_char(sign));
}

}  // namespace

GaussDiagram parse_gauss_code(std::string_view text) {
  using Kind = GaussCodeError::Kind;
  const auto tokens = split_tokens(text);

  struct Slot {
    int arrow;
    int first_token;
    int tail = -1;
    int head = -1;
    Sign sign;
  };
  std::map<uint64_t, Slot> slots;
  std::vector<uint64_t> order;

  for (int pos = 0; pos < static_cast<int>(tokens.size()); ++pos) {
    const std::string token(tokens[pos]);
    Token tok{};
    if (!parse_token(tokens[pos], tok)) {
      throw GaussCodeError(Kind::malformed_token, pos, token, "malformed token '" + token + "'");
    }
    auto [it, inserted] = slots.try_emplace(
        tok.label, Slot{static_cast<int>(order.size()), pos, -1, -1, tok.sign});
    if (inserted) order.push_back(tok.label);
    Slot& slot = it->second;
    int& target = tok.role == Role::tail ? slot.tail : slot.head;
    if (target != -1) {
      throw GaussCodeError(Kind::label_not_paired, pos, token,
                           "label " + std::to_string(tok.label) + " has two " +
                               (tok.role == Role::tail ? "O" : "U") + " tokens");
    }
    if (!inserted && slot.sign != tok.sign) {
      throw GaussCodeError(Kind::sign_mismatch, pos, token,
                           "O and U tokens of label " + std::to_string(tok.label) +
                               " disagree on sign");
    }
    target = pos;
  }

  std::vector<Arrow> arrows(order.size());
  for (const auto& [label, slot] : slots) {
    if (slot.tail == -1 || slot.head == -1) {
      const std::string token(tokens[slot.first_token]);
      throw GaussCodeError(Kind::label_not_paired, slot.first_token, token,
                           "label " + std::to_string(label) + " lacks its " +
                               (slot.tail == -1 ? "O" : "U") + " token");
    }
    arrows[slot.arrow] = Arrow{slot.tail, slot.head, slot.sign};
  }
  return GaussDiagram(std::move(arrows));
}

DiagramKey serialize(const GaussDiagram& diagram) {
  std::string out;
  out.reserve(static_cast<std::size_t>(diagram.length()) * 4);
  std::vector<int> label(diagram.size(), 0);
  int next = 1;
  for (int pos = 0; pos < diagram.length(); ++pos) {
    const Endpoint ep = diagram.at(pos);
    if (label[ep.arrow] == 0) label[ep.arrow] = next++;
    append_token(out, ep.role, label[ep.arrow], diagram.arrow(ep.arrow).sign);
  }
  return DiagramKey(std::move(out));
}

DiagramKey canonical_key(std::string_view text) { return serialize(parse_gauss_code(text)); }

GaussDiagram mirror_signs(const GaussDiagram& diagram) {
  std::vector<Arrow> arrows(diagram.arrows().begin(), diagram.arrows().end());
  for (auto& a : arrows) a.sign = -a.sign;
  return GaussDiagram(std::move(arrows));
}

Subdiagram::Subdiagram(const GaussDiagram& parent, std::vector<int> chosen)
    : parent_(&parent), chosen_(std::move(chosen)) {
  for (std::size_t i = 0; i < chosen_.size(); ++i) {
    if (chosen_[i] < 0 || chosen_[i] >= parent.size() || (i > 0 && chosen_[i] <= chosen_[i - 1])) {
      throw std::invalid_argument("subdiagram indices must be increasing arrow indices");
    }
  }
}

std::vector<int> Subdiagram::endpoints() const {
  std::vector<int> out;
  out.reserve(chosen_.size() * 2);
  for (int a : chosen_) {
    out.push_back(parent_->arrow(a).tail);
    out.push_back(parent_->arrow(a).head);
  }
  std::sort(out.begin(), out.end());
  return out;
}

GaussDiagram psi(const Subdiagram& sub) {
  const auto positions = sub.endpoints();
  const auto& parent = sub.parent();
  // Rank of each parent position among the chosen endpoints.
  auto rank = [&](int pos) {
    return static_cast<int>(std::lower_bound(positions.begin(), positions.end(), pos) -
                            positions.begin());
  };
  std::vector<Arrow> arrows;
  arrows.reserve(sub.chosen().size());
  for (int a : sub.chosen()) {
    const Arrow& src = parent.arrow(a);
    arrows.push_back(Arrow{rank(src.tail), rank(src.head), src.sign});
  }
  return GaussDiagram(std::move(arrows));
}

void psi_key_into(const GaussDiagram& parent, std::span<const int> chosen, std::string& out,
                  std::vector<int>& scratch) {
  out.clear();
  scratch.clear();
  for (int a : chosen) {
    scratch.push_back(parent.arrow(a).tail);
    scratch.push_back(parent.arrow(a).head);
  }
  std::sort(scratch.begin(), scratch.end());
  // Arrow -> label, assigned on first appearance. `chosen` is tiny here.
  int labelled[64];
  int labels = 0;
  const bool small = chosen.size() <= 64;
  std::vector<int> big;
  for (int pos : scratch) {
    const Endpoint ep = parent.at(pos);
    int label = 0;
    if (small) {
      for (int i = 0; i < labels; ++i) {
        if (labelled[i] == ep.arrow) {
          label = i + 1;
          break;
        }
      }
      if (label == 0) {
        labelled[labels++] = ep.arrow;
        label = labels;
      }
    } else {
      auto it = std::find(big.begin(), big.end(), ep.arrow);
      if (it == big.end()) {
        big.push_back(ep.arrow);
        label = static_cast<int>(big.size());
      } else {
        label = static_cast<int>(it - big.begin()) + 1;
      }
    }
    append_token(out, ep.role, label, parent.arrow(ep.arrow).sign);
  }
}

GaussDiagram superimpose(const GaussDiagram& base, const GaussDiagram& inserted,
                         const PlacementMap& lambda) {
  const int k = base.size();
  const int ell = inserted.size();
  if (lambda.size() != 2 * ell) {
    throw std::invalid_argument("placement map has length " + std::to_string(lambda.size()) +
                                ", expected " + std::to_string(2 * ell));
  }
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0 || lambda[i] > 2 * k) {
      throw std::invalid_argument("placement value " + std::to_string(lambda[i]) +
                                  " outside [0, " + std::to_string(2 * k) + "]");
    }
    if (i > 0 && lambda[i] < lambda[i - 1]) {
      throw std::invalid_argument("placement map is not non-decreasing");
    }
  }

  std::vector<int> base_pos(base.length());
  std::vector<int> ins_pos(inserted.length());
  int next = 0;
  int i = 0;
  for (int gap = 0; gap <= 2 * k; ++gap) {
    while (i < lambda.size() && lambda[i] == gap) ins_pos[i++] = next++;
    if (gap < 2 * k) base_pos[gap] = next++;
  }

  std::vector<Arrow> arrows;
  arrows.reserve(k + ell);
  for (const Arrow& a : base.arrows()) arrows.push_back(Arrow{base_pos[a.tail], base_pos[a.head], a.sign});
  for (const Arrow& a : inserted.arrows()) arrows.push_back(Arrow{ins_pos[a.tail], ins_pos[a.head], a.sign});
  return GaussDiagram(std::move(arrows));
}

std::vector<PlacementMap> enumerate_placements(int k, int ell) {
  std::vector<PlacementMap> out;
  if (k < 0 || ell < 0) return out;
  std::vector<int> cur(2 * ell, 0);
  const int top = 2 * k;
  while (true) {
    out.emplace_back(cur);
    // Next non-decreasing sequence in lexicographic order.
    int j = 2 * ell - 1;
    while (j >= 0 && cur[j] == top) --j;
    if (j < 0) break;
    const int v = cur[j] + 1;
    for (int t = j; t < 2 * ell; ++t) cur[t] = v;
  }
  return out;
}

SubsetCursor::SubsetCursor(int n, int size) : n_(n), valid_(size >= 0 && size <= n) {
  if (valid_) {
    indices_.resize(size);
    for (int i = 0; i < size; ++i) indices_[i] = i;
  }
}

void SubsetCursor::advance() {
  const int size = static_cast<int>(indices_.size());
  int j = size - 1;
  while (j >= 0 && indices_[j] == n_ - size + j) --j;
  if (j < 0) {
    valid_ = false;
    return;
  }
  ++indices_[j];
  for (int t = j + 1; t < size; ++t) indices_[t] = indices_[t - 1] + 1;
}

std::vector<Subdiagram> enumerate_subdiagrams(const GaussDiagram& diagram, int size) {
  std::vector<Subdiagram> out;
  for_each_subdiagram(diagram, size, [&](Subdiagram s) { out.push_back(std::move(s)); });
  return out;
}

}  // namespace ftik
