#include "ksstab/actuation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ksstab {

ActuatorSet::ActuatorSet(int count, double fraction, double length)
    : fraction_(fraction), length_(length) {
  if (count < 1) {
    throw std::invalid_argument("actuator count must be >= 1 (got " + std::to_string(count) + ")");
  }
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("actuator fraction r must lie in (0, 1) (got " +
                                std::to_string(fraction) + ")");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("domain length must be positive");
  }
  const double m = static_cast<double>(count);
  half_width_ = fraction * length / (2.0 * m);

  // The upper half is mirrored from the lower half so c_j + c_{M+1-j} == L.
  centers_.resize(static_cast<std::size_t>(count));
  const int lower_half = (count + 1) / 2;
  for (int j = 1; j <= lower_half; ++j) {
    centers_[static_cast<std::size_t>(j - 1)] = static_cast<double>(2 * j - 1) * length / (2.0 * m);
  }
  for (int j = lower_half + 1; j <= count; ++j) {
    centers_[static_cast<std::size_t>(j - 1)] = length - centers_[static_cast<std::size_t>(count - j)];
  }
}

void ActuatorSet::check_index(int j) const {
  if (j < 1 || j > count()) {
    throw std::out_of_range("actuator index " + std::to_string(j) + " outside [1, " +
                            std::to_string(count()) + "]");
  }
}

double ActuatorSet::center(int j) const {
  check_index(j);
  return centers_[static_cast<std::size_t>(j - 1)];
}

Interval ActuatorSet::support(int j) const {
  const double c = center(j);
  return {c - half_width_, c + half_width_};
}

double ActuatorSet::value(int j, double x) const {
  return support(j).contains(x) ? 1.0 : 0.0;
}

double ActuatorSet::normalization() const noexcept {
  return std::sqrt(static_cast<double>(count()) / (fraction_ * length_));
}

double ActuatorSet::normalized_value(int j, double x) const {
  return normalization() * value(j, x);
}

ActuatorSet build_actuators(int count, double fraction, double length) {
  return ActuatorSet(count, fraction, length);
}

}  // namespace ksstab
