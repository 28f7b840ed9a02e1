#include "wrinkle/eval_manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wrinkle/error.hpp"
#include "wrinkle/parallel.hpp"

namespace wrinkle {

namespace {

using nlohmann::json;

std::vector<Vec2> parse_points(const json& j) {
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw DataError("point must be [x, y]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

std::map<std::string, std::vector<int>> parse_groups(const json& j) {
  std::map<std::string, std::vector<int>> out;
  for (const auto& [name, indices] : j.items()) out[name] = indices.get<std::vector<int>>();
  return out;
}

double parse_bbox_diagonal(const json& record) {
  if (record.contains("bbox_diagonal")) return record["bbox_diagonal"].get<double>();
  if (record.contains("bbox")) {
    const auto& b = record["bbox"];
    if (!b.is_array() || b.size() != 4) throw DataError("bbox must be [x0, y0, x1, y1]");
    return std::hypot(b[2].get<double>() - b[0].get<double>(),
                      b[3].get<double>() - b[1].get<double>());
  }
  throw DataError("missing bbox");
}

EvalRecord parse_record(const json& j) {
  if (!j.is_object()) throw DataError("record must be an object");
  EvalRecord r;
  r.image_id = j.at("image_id").get<std::string>();
  if (j.contains("condition")) {
    const auto tag = j["condition"].get<std::string>();
    if (tag != "open") r.condition = parse_eye_condition(tag);
  }
  const double diagonal = parse_bbox_diagonal(j);
  const auto& pred = j.at("pred");
  r.pred.points = parse_points(pred.at("points"));
  if (pred.contains("groups")) r.pred.groups = parse_groups(pred["groups"]);
  r.pred.bbox_diagonal = diagonal;
  r.pred.validate();
  if (j.contains("gt")) {
    const auto& gt = j["gt"];
    if (gt.contains("points")) {
      LandmarkSet set;
      set.points = parse_points(gt["points"]);
      if (gt.contains("groups")) set.groups = parse_groups(gt["groups"]);
      if (gt.contains("interocular")) set.interocular = gt["interocular"].get<double>();
      set.bbox_diagonal = diagonal;
      set.validate();
      r.gt = std::move(set);
    }
    if (gt.contains("polylines")) {
      for (const auto& [name, pts] : gt["polylines"].items()) {
        Polyline line{parse_points(pts)};
        line.validate();
        r.gt_polylines[name] = std::move(line);
      }
    }
  }
  return r;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return {};
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

MetricSummary summarize(const std::vector<ImageResult>& images,
                        std::optional<double> ImageResult::*member) {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& img : images) {
    if (!(img.*member)) continue;
    sum += *(img.*member);
    ++s.count;
  }
  if (s.count > 0) s.mean = sum / static_cast<double>(s.count);
  return s;
}

}  // namespace

std::vector<EvalRecord> parse_eval_manifest(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError("eval manifest: JSON parse error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
  if (!doc.is_array()) throw DataError("eval manifest: top level must be an array of records");
  std::vector<EvalRecord> records;
  records.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      records.push_back(parse_record(doc[i]));
    } catch (const json::exception& e) {
      throw DataError("eval manifest: record " + std::to_string(i) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("eval manifest: record " + std::to_string(i) + ": " + e.what());
    }
  }
  return records;
}

std::vector<EvalRecord> load_eval_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_eval_manifest(buffer.str());
}

ImageResult evaluate_record(const EvalRecord& record, const EvalOptions& options) {
  ImageResult out;
  out.image_id = record.image_id;
  out.condition = record.condition;
  if (record.gt) {
    LandmarkSet gt = *record.gt;
    if (options.eye_corners)
      gt.interocular =
          interocular_distance(gt.points, options.eye_corners->first, options.eye_corners->second);
    out.nme = nme(record.pred, gt);
  }
  const bool has_eyelids = std::any_of(std::begin(groups::eyelids), std::end(groups::eyelids),
                                       [&](const char* g) { return record.pred.groups.contains(g); });
  if (!record.gt_polylines.empty() && has_eyelids)
    out.eyelid_error = eyelid_error(record.pred, record.gt_polylines);
  if (record.condition)
    out.eye_opening_error = eye_opening_error(record.pred, *record.condition, options.pairing);
  return out;
}

EvalReport evaluate(const std::vector<EvalRecord>& records, const EvalOptions& options, int jobs) {
  EvalReport report;
  report.failure_threshold = options.failure_threshold;
  report.images.resize(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    try {
      report.images[i] = evaluate_record(records[i], options);
    } catch (const DataError& e) {
      throw DataError("record " + std::to_string(i) + " (" + records[i].image_id + "): " + e.what());
    }
  });
  std::stable_sort(report.images.begin(), report.images.end(),
                   [](const ImageResult& a, const ImageResult& b) { return a.image_id < b.image_id; });

  report.nme = summarize(report.images, &ImageResult::nme);
  report.eyelid_error = summarize(report.images, &ImageResult::eyelid_error);
  report.eye_opening_error = summarize(report.images, &ImageResult::eye_opening_error);
  std::vector<double> nmes;
  for (const auto& img : report.images)
    if (img.nme) nmes.push_back(*img.nme);
  if (!nmes.empty()) report.failure_rate = failure_rate(nmes, options.failure_threshold);
  return report;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "image_id,condition,nme,eyelid_error,eye_opening_error\n";
  for (const auto& img : report.images) {
    out += csv_field(img.image_id) + "," + (img.condition ? to_string(*img.condition) : "open") +
           "," + format_optional(img.nme) + "," + format_optional(img.eyelid_error) + "," +
           format_optional(img.eye_opening_error) + "\n";
  }
  return out;
}

std::string report_summary_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  const auto metric = [](const MetricSummary& s) {
    nlohmann::ordered_json m;
    m["count"] = s.count;
    m["mean"] = s.mean ? nlohmann::ordered_json(*s.mean) : nullptr;
    return m;
  };
  j["images"] = report.images.size();
  j["nme"] = metric(report.nme);
  j["eyelid_error"] = metric(report.eyelid_error);
  j["eye_opening_error"] = metric(report.eye_opening_error);
  j["failure_rate"]["threshold"] = report.failure_threshold;
  j["failure_rate"]["value"] =
      report.failure_rate ? nlohmann::ordered_json(*report.failure_rate) : nullptr;
  return j.dump(2) + "\n";
}

}  // namespace wrinkle
