#include "wrinkle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wrinkle/error.hpp"

namespace wrinkle {

void LandmarkSet::validate() const {
  const auto n = static_cast<int>(points.size());
  for (const auto& [name, indices] : groups)
    for (const int i : indices)
      if (i < 0 || i >= n)
        throw DataError("landmarks: group '" + name + "' index " + std::to_string(i) +
                        " out of range (" + std::to_string(n) + " points)");
  if (!(bbox_diagonal > 0.0) || !std::isfinite(bbox_diagonal))
    throw DataError("landmarks: bbox diagonal must be > 0");
  if (interocular && (!(*interocular > 0.0) || !std::isfinite(*interocular)))
    throw DataError("landmarks: interocular distance must be > 0");
}

std::vector<Vec2> LandmarkSet::group_points(const std::string& name) const {
  const auto it = groups.find(name);
  if (it == groups.end()) throw DataError("landmarks: missing group '" + name + "'");
  std::vector<Vec2> out;
  out.reserve(it->second.size());
  for (const int i : it->second) out.push_back(points.at(i));
  return out;
}

void Polyline::validate() const {
  if (points.size() < 2) throw DataError("polyline needs at least 2 points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] == points[i - 1]) throw DataError("polyline has repeated consecutive points");
}

EyeCondition parse_eye_condition(const std::string& tag) {
  if (tag == "both-closed") return EyeCondition::both_closed;
  if (tag == "left-wink") return EyeCondition::left_wink;
  if (tag == "right-wink") return EyeCondition::right_wink;
  throw DataError("unknown eye condition '" + tag + "'");
}

LidPairing parse_lid_pairing(const std::string& tag) {
  if (tag == "index") return LidPairing::index_aligned;
  if (tag == "nearest-x") return LidPairing::nearest_x;
  throw ConfigError("lid pairing must be 'index' or 'nearest-x', got '" + tag + "'");
}

const char* to_string(EyeCondition condition) {
  switch (condition) {
    case EyeCondition::both_closed: return "both-closed";
    case EyeCondition::left_wink: return "left-wink";
    case EyeCondition::right_wink: return "right-wink";
  }
  return "both-closed";
}

double point_to_polyline(Vec2 p, const Polyline& line) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    const Vec2 a = line.points[i];
    const Vec2 ab = line.points[i + 1] - a;
    const double len2 = dot(ab, ab);
    const double s = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, distance(p, a + s * ab));
  }
  if (line.points.size() == 1) best = distance(p, line.points[0]);
  return best;
}

double eyelid_error_ratio(const LandmarkSet& pred, const NamedPolylines& gt) {
  pred.validate();
  double sum = 0.0;
  std::size_t count = 0;
  for (const char* name : groups::eyelids) {
    if (!pred.groups.contains(name)) continue;
    const auto it = gt.find(name);
    if (it == gt.end())
      throw DataError(std::string("eyelid error: no ground-truth polyline for group '") + name + "'");
    it->second.validate();
    for (const auto& p : pred.group_points(name)) {
      sum += point_to_polyline(p, it->second);
      ++count;
    }
  }
  if (count == 0) throw DataError("eyelid error: prediction has no eyelid landmarks");
  return sum / static_cast<double>(count) / pred.bbox_diagonal;
}

double eye_aperture(const LandmarkSet& pred, bool left_eye, LidPairing pairing) {
  const auto upper = pred.group_points(left_eye ? groups::upper_left_eyelid : groups::upper_right_eyelid);
  const auto lower = pred.group_points(left_eye ? groups::lower_left_eyelid : groups::lower_right_eyelid);
  if (upper.empty() || lower.empty()) throw DataError("eye aperture: empty eyelid group");
  double sum = 0.0;
  if (pairing == LidPairing::index_aligned) {
    if (upper.size() != lower.size())
      throw DataError("eye aperture: upper/lower eyelid groups have different sizes (" +
                      std::to_string(upper.size()) + " vs " + std::to_string(lower.size()) + ")");
    for (std::size_t i = 0; i < upper.size(); ++i) sum += distance(upper[i], lower[i]);
  } else {
    for (const auto& u : upper) {
      const auto nearest = std::min_element(lower.begin(), lower.end(), [&](Vec2 a, Vec2 b) {
        return std::abs(a.x - u.x) < std::abs(b.x - u.x);
      });
      sum += distance(u, *nearest);
    }
  }
  return sum / static_cast<double>(upper.size());
}

double eye_opening_error_ratio(const LandmarkSet& pred, EyeCondition condition, LidPairing pairing) {
  pred.validate();
  double aperture = 0.0;
  switch (condition) {
    case EyeCondition::both_closed:
      aperture = 0.5 * (eye_aperture(pred, true, pairing) + eye_aperture(pred, false, pairing));
      break;
    case EyeCondition::left_wink: aperture = eye_aperture(pred, true, pairing); break;
    case EyeCondition::right_wink: aperture = eye_aperture(pred, false, pairing); break;
  }
  return aperture / pred.bbox_diagonal;
}

double nme_ratio(const LandmarkSet& pred, const LandmarkSet& gt) {
  if (pred.points.size() != gt.points.size())
    throw DataError("nme: point count mismatch (" + std::to_string(pred.points.size()) + " vs " +
                    std::to_string(gt.points.size()) + ")");
  if (pred.points.empty()) throw DataError("nme: no landmarks");
  if (!gt.interocular) throw DataError("nme: ground truth has no interocular distance");
  if (!(*gt.interocular > 0.0)) throw DataError("nme: interocular distance must be > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.points.size(); ++i) sum += distance(pred.points[i], gt.points[i]);
  return sum / static_cast<double>(pred.points.size()) / *gt.interocular;
}

double interocular_distance(std::span<const Vec2> points, int left_outer_corner,
                            int right_outer_corner) {
  const auto n = static_cast<int>(points.size());
  if (left_outer_corner < 0 || left_outer_corner >= n || right_outer_corner < 0 ||
      right_outer_corner >= n)
    throw DataError("interocular: eye-corner index out of range");
  return distance(points[left_outer_corner], points[right_outer_corner]);
}

double failure_rate(std::span<const double> errors, double threshold) {
  if (errors.empty()) throw DataError("failure rate: no errors given");
  const auto failures =
      std::count_if(errors.begin(), errors.end(), [&](double e) { return e > threshold; });
  return kPercent * static_cast<double>(failures) / static_cast<double>(errors.size());
}

}  // namespace wrinkle
