#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wrinkle/geometry.hpp"

namespace wrinkle {

// Landmark group names used by the eye-region metrics.
namespace groups {
inline constexpr const char* upper_left_eyelid = "upper_left_eyelid";
inline constexpr const char* lower_left_eyelid = "lower_left_eyelid";
inline constexpr const char* upper_right_eyelid = "upper_right_eyelid";
inline constexpr const char* lower_right_eyelid = "lower_right_eyelid";
inline constexpr const char* eyelids[] = {upper_left_eyelid, lower_left_eyelid, upper_right_eyelid,
                                          lower_right_eyelid};
}  // namespace groups

struct LandmarkSet {
  std::vector<Vec2> points;                          // pixels
  std::map<std::string, std::vector<int>> groups;    // named index subsets
  double bbox_diagonal = 0;                          // pixels
  std::optional<double> interocular;                 // pixels

  // Throws DataError on out-of-range indices or non-positive scales.
  void validate() const;
  std::vector<Vec2> group_points(const std::string& name) const;
};

struct Polyline {
  std::vector<Vec2> points;

  // At least two points, consecutive points distinct.
  void validate() const;
};

using NamedPolylines = std::map<std::string, Polyline>;

enum class EyeCondition { both_closed, left_wink, right_wink };
// index_aligned pairs upper[i] with lower[i]; nearest_x pairs each upper
// landmark with the lower landmark closest in x (for mismatched schemes).
enum class LidPairing { index_aligned, nearest_x };

EyeCondition parse_eye_condition(const std::string& tag);
// "index" or "nearest-x"; throws ConfigError otherwise.
LidPairing parse_lid_pairing(const std::string& tag);
const char* to_string(EyeCondition condition);

// Normalized errors are returned as fractions by the *_ratio functions and
// scaled by 100 by the plain ones.
inline constexpr double kPercent = 100.0;

// Minimum distance from p to any segment of the polyline.
double point_to_polyline(Vec2 p, const Polyline& line);

// Mean point-to-polyline distance over every eyelid landmark of pred, each
// measured against the polyline of the same group, over bbox_diagonal.
double eyelid_error_ratio(const LandmarkSet& pred, const NamedPolylines& gt);
inline double eyelid_error(const LandmarkSet& pred, const NamedPolylines& gt) {
  return kPercent * eyelid_error_ratio(pred, gt);
}

// Mean distance between paired upper/lower lid landmarks of one eye.
double eye_aperture(const LandmarkSet& pred, bool left_eye,
                    LidPairing pairing = LidPairing::index_aligned);

double eye_opening_error_ratio(const LandmarkSet& pred, EyeCondition condition,
                               LidPairing pairing = LidPairing::index_aligned);
inline double eye_opening_error(const LandmarkSet& pred, EyeCondition condition,
                                LidPairing pairing = LidPairing::index_aligned) {
  return kPercent * eye_opening_error_ratio(pred, condition, pairing);
}

// Mean per-point distance over gt.interocular.
double nme_ratio(const LandmarkSet& pred, const LandmarkSet& gt);
inline double nme(const LandmarkSet& pred, const LandmarkSet& gt) {
  return kPercent * nme_ratio(pred, gt);
}

double interocular_distance(std::span<const Vec2> points, int left_outer_corner,
                            int right_outer_corner);

// Percentage of errors strictly above threshold.
double failure_rate(std::span<const double> errors, double threshold = 10.0);

}  // namespace wrinkle
