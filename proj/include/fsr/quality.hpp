#pragma once

#include <cstddef>

#include "fsr/data.hpp"
#include "fsr/language.hpp"

namespace fsr {

struct QualityStat {
  double value = 0.0;      ///< (positives - support * center) / m
  double frequency = 0.0;  ///< support / m
  std::size_t positives = 0;
  std::size_t support = 0;

  friend bool operator==(const QualityStat&, const QualityStat&) = default;
};

/// The single arithmetic path for every centered quality in the engine:
/// integer counts first, then one multiply and one divide.
inline double quality_from_counts(std::size_t positives, std::size_t support, std::size_t m, double center) {
  return (static_cast<double>(positives) - static_cast<double>(support) * center) / static_cast<double>(m);
}

/// (1/m) * sum over the cover of (label_i - center). With center = mu(D) this
/// is the observed quality; with a resampled label vector and center = the
/// lower target bracket it is the shifted quality used for deviations.
QualityStat empirical_quality(const Cover& cover, const LabelVector& labels, double center);

/// f^alpha * (mean label on cover - mean label); 0 on an empty cover.
double alpha_quality(const Cover& cover, const LabelVector& labels, double alpha);

}  // namespace fsr
