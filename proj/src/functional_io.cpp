#include <json.hpp>

#include <fstream>
#include <sstream>

#include "ftik/invariants.hpp"

namespace ftik {

using nlohmann::json;

Functional functional_from_json(std::string_view text) {
  const json doc = json::parse(text);
  Functional omega;
  omega.k = doc.at("k").get<int>();
  if (omega.k < 0) throw std::invalid_argument("functional k must be non-negative");
  omega.include_phi0 = doc.value("include_phi0", false);
  for (const auto& w : doc.at("weights")) {
    const DiagramKey key = canonical_key(w.at("diagram").get<std::string>());
    if (key.arrow_count() > omega.k) {
      throw std::invalid_argument("weight key '" + key.text() + "' has more than k arrows");
    }
    const auto& coeff = w.at("coeff");
    const Coefficient c = coeff.is_string() ? parse_coefficient(coeff.get<std::string>())
                                            : Coefficient(coeff.get<int64_t>());
    if (c == 0) continue;
    auto [it, inserted] = omega.weights.try_emplace(key, c);
    if (!inserted) it->second += c;
  }
  return omega;
}

std::string functional_to_json(const Functional& omega) {
  json weights = json::array();
  for (const auto& [key, c] : omega.weights) {
    weights.push_back(json{{"diagram", key.text()}, {"coeff", to_string(c)}});
  }
  json doc{{"k", omega.k}, {"include_phi0", omega.include_phi0}, {"weights", std::move(weights)}};
  return doc.dump();
}

Functional load_functional(const std::string& name_or_path) {
  if (name_or_path == "v2") return v2_functional();
  std::ifstream in(name_or_path);
  if (!in) throw UnknownFunctional("unknown functional '" + name_or_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return functional_from_json(buf.str());
  } catch (const json::exception& e) {
    throw UnknownFunctional("cannot read functional '" + name_or_path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UnknownFunctional("cannot read functional '" + name_or_path + "': " + e.what());
  }
}

}  // namespace ftik
