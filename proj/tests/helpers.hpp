#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsr/data.hpp"

namespace fsr::test {

// color (categorical), weight (continuous), y (target); rows
// (red, 1.5, 1), (blue, 2.0, 0), (red, 0.5, 1).
inline Dataset three_rows() {
  return Dataset({FeatureColumn::categorical("color", {0, 1, 0}, {"red", "blue"}),
                  FeatureColumn::continuous("weight", {1.5, 2.0, 0.5})},
                 LabelVector::from_values({1, 0, 1}), "y");
}

inline Dataset parse(const std::string& text, const LoadOptions& options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options);
}

// `columns` independent binary categorical columns and Bern(rate) labels.
inline Dataset random_binary(std::size_t m, std::size_t columns, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution label(rate);
  std::vector<FeatureColumn> features;
  for (std::size_t c = 0; c < columns; ++c) {
    std::vector<std::int32_t> codes(m);
    for (auto& code : codes) code = coin(rng) ? 1 : 0;
    features.push_back(FeatureColumn::categorical("b" + std::to_string(c), std::move(codes), {"0", "1"}));
  }
  std::vector<int> y(m);
  for (auto& v : y) v = label(rng) ? 1 : 0;
  return Dataset(std::move(features), LabelVector::from_values(y));
}

inline LabelVector random_labels(std::size_t m, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution label(rate);
  std::vector<int> y(m);
  for (auto& v : y) v = label(rng) ? 1 : 0;
  return LabelVector::from_values(y);
}

}  // namespace fsr::test
