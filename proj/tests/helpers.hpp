#pragma once

#include "pfm/measure.hpp"

#include <initializer_list>
#include <string>
#include <utility>

namespace testing_support {

using namespace pfm;

/// Discrete space on the first n letters.
inline SpacePtr letters(std::size_t n, std::string id = "X") {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  return FiniteSpace::discrete(std::move(names), std::move(id));
}

/// Points on a line at the given integer positions, named a, b, c, ...
inline SpacePtr line(std::vector<long long> pos, std::string id = "L") {
  std::vector<std::string> names;
  std::vector<std::vector<Rational>> d(pos.size(), std::vector<Rational>(pos.size()));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    names.emplace_back(1, static_cast<char>('a' + i));
    for (std::size_t j = 0; j < pos.size(); ++j) d[i][j] = Rational(pos[i] > pos[j] ? pos[i] - pos[j] : pos[j] - pos[i]);
  }
  return std::make_shared<const FiniteSpace>(std::move(names), std::move(d), std::move(id));
}

inline Rational q(const char* text) { return parse_rational(text); }

/// m(space, {{"a", "1/2"}, {"b", "1/2"}})
inline Measure m(const SpacePtr& space, std::initializer_list<std::pair<const char*, const char*>> atoms) {
  std::vector<std::pair<std::string, Rational>> raw;
  for (const auto& [p, w] : atoms) raw.emplace_back(p, q(w));
  return canonicalize(space, raw);
}

inline PointId at(const SpacePtr& space, const char* name) { return space->index_of(name); }

}  // namespace testing_support
