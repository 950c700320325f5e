#pragma once

#include <span>
#include <vector>

namespace ksstab {

/// Open interval (lower, upper).
struct Interval {
  double lower;
  double upper;

  bool contains(double x) const noexcept { return x > lower && x < upper; }
  double measure() const noexcept { return upper - lower; }
};

/// M indicator actuators 1_{omega_j} on [0, L), omega_j centered at
/// c_j = (2j - 1) L / (2M) with half width r L / (2M).
///
/// The supports are pairwise disjoint, mirror symmetric (c_{M+1-j} = L - c_j)
/// and cover a fraction r of the domain.
class ActuatorSet {
 public:
  ActuatorSet(int count, double fraction, double length);

  int count() const noexcept { return static_cast<int>(centers_.size()); }
  double fraction() const noexcept { return fraction_; }
  double length() const noexcept { return length_; }
  double half_width() const noexcept { return half_width_; }

  double center(int j) const;
  std::span<const double> centers() const noexcept { return centers_; }
  Interval support(int j) const;

  /// Indicator value; endpoints of the open support evaluate to 0.
  double value(int j, double x) const;

  /// Indicator scaled to unit L2 norm, i.e. (M / (r L))^{1/2} on the support.
  double normalized_value(int j, double x) const;
  double normalization() const noexcept;

 private:
  void check_index(int j) const;

  double fraction_;
  double length_;
  double half_width_;
  std::vector<double> centers_;
};

ActuatorSet build_actuators(int count, double fraction, double length);

}  // namespace ksstab
