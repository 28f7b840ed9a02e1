#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wrinkle/metrics.hpp"

namespace wrinkle {

// One image of an evaluation manifest. The manifest is a JSON array of
//
//   { "image_id": "...",
//     "condition": "open" | "both-closed" | "left-wink" | "right-wink",
//     "bbox": [x0, y0, x1, y1]            (or "bbox_diagonal": d),
//     "pred": { "points": [[x, y], ...], "groups": { "<name>": [i, ...] } },
//     "gt":   { "points": [[x, y], ...], "interocular": d,
//               "polylines": { "<eyelid group>": [[x, y], ...] } } }
//
// "condition" and "gt" (and each of its members) are optional; a metric is
// computed only when its inputs are present.
struct EvalRecord {
  std::string image_id;
  std::optional<EyeCondition> condition;  // empty for open eyes
  LandmarkSet pred;
  std::optional<LandmarkSet> gt;          // points (+ interocular)
  NamedPolylines gt_polylines;
};

struct EvalOptions {
  double failure_threshold = 10.0;  // on NME, in percent
  LidPairing pairing = LidPairing::index_aligned;
  // Outer eye-corner indices into the ground-truth points; when set they
  // define the interocular distance instead of the manifest value.
  std::optional<std::pair<int, int>> eye_corners;
};

struct ImageResult {
  std::string image_id;
  std::optional<EyeCondition> condition;
  std::optional<double> nme;                // percent of interocular
  std::optional<double> eyelid_error;       // percent of bbox diagonal
  std::optional<double> eye_opening_error;  // percent of bbox diagonal
};

struct MetricSummary {
  std::size_t count = 0;
  std::optional<double> mean;
};

struct EvalReport {
  std::vector<ImageResult> images;  // sorted by image_id
  MetricSummary nme, eyelid_error, eye_opening_error;
  double failure_threshold = 10.0;
  std::optional<double> failure_rate;  // over images with an NME
};

// Throws DataError naming the record index on schema violations and
// reporting the byte offset on JSON syntax errors.
std::vector<EvalRecord> parse_eval_manifest(std::string_view json_text);
std::vector<EvalRecord> load_eval_manifest(const std::filesystem::path& path);

ImageResult evaluate_record(const EvalRecord& record, const EvalOptions& options);
EvalReport evaluate(const std::vector<EvalRecord>& records, const EvalOptions& options, int jobs = 1);

std::string report_csv(const EvalReport& report);
std::string report_summary_json(const EvalReport& report);

}  // namespace wrinkle
