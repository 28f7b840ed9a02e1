// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "wrinkle/cleaning.hpp"
#include "wrinkle/cli.hpp"
#include "wrinkle/eval_manifest.hpp"
#include "wrinkle/log.hpp"
#include "wrinkle/mesh.hpp"
#include "wrinkle/metrics.hpp"
#include "wrinkle/primitives.hpp"
#include "wrinkle/tension.hpp"
#include "wrinkle/wrinkles.hpp"

using namespace wrinkle;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  int failed = 0;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Mesh to_mesh(const oracle::RandomMesh& m) { return Mesh(m.vertices, m.faces); }

// ---------------------------------------------------------------------------

void tension_correctness(Check& ck) {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> nv(4, 200);
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = nv(rng);
    const auto rm = oracle::random_mesh(rng, n, std::max(1, n * 3 / 2));
    const Mesh base = to_mesh(rm);
    const auto deformed_v = oracle::jitter(rng, rm.vertices, 0.3);
    const auto got = compute_tension(base, base.with_vertices(deformed_v));
    const auto want = oracle::tension(rm.vertices, deformed_v, rm.faces);
    for (std::size_t v = 0; v < want.size(); ++v) worst = std::max(worst, std::abs(got[v] - want[v]));
  }
  ck.expect(worst <= 1e-12, "oracle mismatch " + fmt("%.3g", worst));

  double scale_worst = 0;
  for (const double k : {0.5, 1.0, 2.0, 3.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto rm = oracle::random_mesh(rng, 50, 60);
      std::vector<Vec3> scaled;
      for (const auto& p : rm.vertices) scaled.push_back(k * p);
      const Mesh base = to_mesh(rm);
      const auto t = compute_tension(base, base.with_vertices(scaled));
      const auto nbrs = oracle::neighbour_sets(rm.vertices.size(), rm.faces);
      for (std::size_t v = 0; v < t.size(); ++v)
        scale_worst = std::max(scale_worst, std::abs(t[v] - (nbrs[v].empty() ? 0.0 : 1.0 - k)));
    }
  }

  ck.expect(scale_worst <= 1e-12, "scale law deviation " + fmt("%.3g", scale_worst));

  double rigid_worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rm = oracle::random_mesh(rng, 120, 180);
    const Mesh base = to_mesh(rm);
    const auto deformed_v = oracle::jitter(rng, rm.vertices, 0.2);
    const auto moved = oracle::random_rigid_motion(rng, deformed_v);
    const auto a = compute_tension(base, base.with_vertices(deformed_v));
    const auto b = compute_tension(base, base.with_vertices(moved));
    for (std::size_t v = 0; v < a.size(); ++v) rigid_worst = std::max(rigid_worst, std::abs(a[v] - b[v]));
  }
  ck.expect(rigid_worst <= 1e-9, "rigid motion deviation " + fmt("%.3g", rigid_worst));
  const double elapsed = seconds_since(start);
  ck.expect(elapsed < 10.0, "runtime " + fmt("%.2f s", elapsed));
  ck.detail = "oracle max err " + fmt("%.2g", worst) + ", scale law err " + fmt("%.2g", scale_worst) + ", rigid max err " + fmt("%.2g", rigid_worst) +
              ", " + fmt("%.2f s", elapsed);
}

void propagation_oracle(Check& ck) {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<int> nv(3, 1000), iters(-3, 3);
  std::uniform_real_distribution<double> tv(-1.5, 1.5);
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = nv(rng);
    const auto rm = oracle::random_mesh(rng, n, std::max(1, n / 2));
    const Mesh mesh = to_mesh(rm);
    TensionField t;
    for (int i = 0; i < n; ++i) t.values.push_back(tv(rng));
    const int e = iters(rng), c = iters(rng);
    const auto got = propagate(t, mesh, e, c);
    const auto want = oracle::propagate(t.values, n, rm.faces, e, c);
    ck.expect(got.values == want, "graph " + std::to_string(trial) + " e=" + std::to_string(e) +
                                      " c=" + std::to_string(c));
    ++cases;
  }
  ck.detail = std::to_string(cases) + " graphs, exact";
}

void wrinkle_map_properties(Check& ck) {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> logit(-5, 5);
  double worst_sum = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> l(1 + trial % 6), w(l.size());
    l[0] = 0.0;
    for (std::size_t i = 1; i < l.size(); ++i) l[i] = 10.0 * std::abs(logit(rng));
    softmax(l, w);
    double s = 0;
    for (const double x : w) s += x;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  ck.expect(worst_sum <= 1e-6, "softmax sum deviation " + fmt("%.3g", worst_sum));

  const int w = 24, h = 16;
  const Texture na = testutil::random_texture(rng, w, h, 3), nd = testutil::random_texture(rng, w, h, 1, -1, 1);
  std::vector<ExpressionSample> samples;
  for (int k = 0; k < 4; ++k)
    samples.push_back({"e" + std::to_string(k), testutil::random_texture(rng, w, h, 3),
                       testutil::random_texture(rng, w, h, 1, -1, 1), testutil::random_texture(rng, w, h, 1, -1, 1)});
  const auto ref = build_wrinkle_maps(na, nd, samples, 10.0);
  for (int trial = 0; trial < 24; ++trial) {
    std::shuffle(samples.begin(), samples.end(), rng);
    const auto got = build_wrinkle_maps(na, nd, samples, 10.0);
    ck.expect(identical(got.compressed_albedo, ref.compressed_albedo) &&
                  identical(got.expanded_albedo, ref.expanded_albedo) &&
                  identical(got.compressed_disp, ref.compressed_disp) &&
                  identical(got.expanded_disp, ref.expanded_disp),
              "permutation changed output");
  }

  // beta * c = 50 for one sample.
  const Texture sat_a = testutil::random_texture(rng, w, h, 3), sat_d = testutil::random_texture(rng, w, h, 1, -1, 1);
  const std::vector<ExpressionSample> one{{"only", sat_a, sat_d, Texture(w, h, 1, 5.0f)}};
  const auto sat = build_wrinkle_maps(na, nd, one, 10.0);
  double sat_err = 0;
  for (std::size_t i = 0; i < sat_a.samples().size(); ++i)
    sat_err = std::max(sat_err, std::abs(double{sat.compressed_albedo.samples()[i]} - sat_a.samples()[i]));
  for (std::size_t i = 0; i < sat_d.samples().size(); ++i)
    sat_err = std::max(sat_err, std::abs(double{sat.compressed_disp.samples()[i]} - sat_d.samples()[i]));
  ck.expect(sat_err <= 1e-9, "saturation error " + fmt("%.3g", sat_err));

  // Zero tension: plain average of neutral and samples in name order.
  std::vector<ExpressionSample> flat = samples;
  for (auto& s : flat) s.tension_map = Texture(w, h, 1, 0.0f);
  std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  const auto avg = build_wrinkle_maps(na, nd, flat, 10.0);
  bool exact = true;
  for (std::size_t i = 0; i < na.samples().size(); ++i) {
    double s = na.samples()[i];
    for (const auto& f : flat) s += f.albedo.samples()[i];
    const auto want = static_cast<float>(s / static_cast<double>(flat.size() + 1));
    exact &= avg.compressed_albedo.samples()[i] == want && avg.expanded_albedo.samples()[i] == want;
  }
  for (std::size_t i = 0; i < nd.samples().size(); ++i) {
    double s = nd.samples()[i];
    for (const auto& f : flat) s += f.displacement.samples()[i];
    const auto want = static_cast<float>(s / static_cast<double>(flat.size() + 1));
    exact &= avg.compressed_disp.samples()[i] == want && avg.expanded_disp.samples()[i] == want;
  }
  ck.expect(exact, "zero tension is not the exact uniform average");
  ck.detail = "softmax dev " + fmt("%.2g", worst_sum) + ", saturation err " + fmt("%.2g", sat_err);
}

WrinkleMapSet random_maps(std::mt19937_64& rng, int w, int h) {
  return {testutil::random_texture(rng, w, h, 3), testutil::random_texture(rng, w, h, 3),
          testutil::random_texture(rng, w, h, 3), testutil::random_texture(rng, w, h, 1, -1, 1),
          testutil::random_texture(rng, w, h, 1, -1, 1), testutil::random_texture(rng, w, h, 1, -1, 1)};
}

void blend_identities(Check& ck) {
  std::mt19937_64 rng(1004);
  const int w = 32, h = 32;
  double worst_slack = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto maps = random_maps(rng, w, h);
    const auto zero = blend_at_synthesis(maps, Texture(w, h, 1, 0.0f));
    ck.expect(identical(zero.albedo, maps.neutral_albedo) && identical(zero.displacement, maps.neutral_disp),
              "zero tension differs from neutral");
    const auto plus = blend_at_synthesis(maps, Texture(w, h, 1, 1.0f));
    ck.expect(identical(plus.albedo, maps.compressed_albedo) && identical(plus.displacement, maps.compressed_disp),
              "tension +1 differs from compressed");
    const auto minus = blend_at_synthesis(maps, Texture(w, h, 1, -1.0f));
    ck.expect(identical(minus.albedo, maps.expanded_albedo) && identical(minus.displacement, maps.expanded_disp),
              "tension -1 differs from expanded");

    // |out(t1) - out(t2)| <= |w1 - w2| * max(|C - N|, |E - N|) per texel.
    const Texture t1 = testutil::random_texture(rng, w, h, 1, -1.5f, 1.5f);
    const Texture t2 = testutil::random_texture(rng, w, h, 1, -1.5f, 1.5f);
    const auto b1 = blend_at_synthesis(maps, t1), b2 = blend_at_synthesis(maps, t2);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double w1 = std::clamp(double{t1.at(x, y)}, -1.0, 1.0), w2 = std::clamp(double{t2.at(x, y)}, -1.0, 1.0);
        const auto bound = [&](const Texture& n, const Texture& c, const Texture& e, int ch) {
          return std::abs(w1 - w2) * std::max(std::abs(double{c.at(x, y, ch)} - n.at(x, y, ch)),
                                              std::abs(double{e.at(x, y, ch)} - n.at(x, y, ch)));
        };
        for (int ch = 0; ch < 3; ++ch) {
          const double diff = std::abs(double{b1.albedo.at(x, y, ch)} - b2.albedo.at(x, y, ch));
          const double slack = diff - bound(maps.neutral_albedo, maps.compressed_albedo, maps.expanded_albedo, ch);
          worst_slack = std::max(worst_slack, slack);
        }
        const double diff = std::abs(double{b1.displacement.at(x, y)} - b2.displacement.at(x, y));
        worst_slack = std::max(worst_slack, diff - bound(maps.neutral_disp, maps.compressed_disp, maps.expanded_disp, 0));
      }
  }
  ck.expect(worst_slack <= 1e-6, "continuity bound exceeded by " + fmt("%.3g", worst_slack));
  ck.detail = "continuity slack " + fmt("%.2g", worst_slack);
}

void grafting(Check& ck) {
  std::mt19937_64 rng(1005);
  const int w = 16, h = 12;
  // Self-donor: identical neutrals give back the donor maps.
  for (int trial = 0; trial < 10; ++trial) {
    const auto maps = random_maps(rng, w, h);
    const std::vector<Donor> self{{"self", maps}};
    const auto r = graft_wrinkles(maps.neutral_albedo, maps.neutral_disp, self);
    ck.expect(identical(r.maps.compressed_albedo, maps.compressed_albedo) &&
                  identical(r.maps.expanded_albedo, maps.expanded_albedo) &&
                  identical(r.maps.compressed_disp, maps.compressed_disp) &&
                  identical(r.maps.expanded_disp, maps.expanded_disp),
              "self transfer not bit-identical");
  }

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Donor> donors;
    for (int d = 0; d < 10; ++d) donors.push_back({"donor" + std::to_string(d), random_maps(rng, w, h)});
    std::shuffle(donors.begin(), donors.end(), rng);
    const Texture target = testutil::random_texture(rng, w, h, 3);
    std::size_t best = 0;
    double best_mse = INFINITY;
    for (std::size_t d = 0; d < donors.size(); ++d) {
      double s = 0;
      for (std::size_t i = 0; i < target.samples().size(); ++i) {
        const double diff = double{target.samples()[i]} - donors[d].maps.neutral_albedo.samples()[i];
        s += diff * diff;
      }
      s /= static_cast<double>(target.samples().size());
      if (s < best_mse || (s == best_mse && donors[d].identity < donors[best].identity)) {
        best = d;
        best_mse = s;
      }
    }
    const auto r = graft_wrinkles(target, Texture(w, h, 1, 0.0f), donors);
    ck.expect(r.donor == donors[best].identity, "selected " + r.donor + ", exhaustive " + donors[best].identity);
  }

  const WrinkleMapSet hand{Texture(1, 1, 3, 0.5f), Texture(1, 1, 3, 0.5f), Texture(1, 1, 3, 0.7f),
                           Texture(1, 1, 1, 0.0f), Texture(1, 1, 1, 0.0f), Texture(1, 1, 1, 0.0f)};
  const std::vector<Donor> hd{{"hand", hand}};
  const auto r = graft_wrinkles(Texture(1, 1, 3, 0.4f), Texture(1, 1, 1, 0.0f), hd);
  const double v = r.maps.compressed_albedo.at(0, 0);
  ck.expect(std::abs(v - 0.6) <= 1e-6, "hand delta gave " + fmt("%.9g", v));
  ck.detail = "50 pools of 10 donors, hand delta " + fmt("%.7g", v);
}

Texture dilation_oracle(const Texture& m) {
  Texture out(m.width(), m.height(), 1, 0.0f);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int sx = x + dx, sy = y + dy;
          if (sx >= 0 && sy >= 0 && sx < m.width() && sy < m.height() && m.at(sx, sy) != 0.0f) out.at(x, y) = 1.0f;
        }
  return out;
}

void cleaning(Check& ck) {
  std::mt19937_64 rng(1006);
  {
    const Texture clean = testutil::random_texture(rng, 16, 16, 3, 0.3f, 0.31f);
    Texture raw = clean;
    Texture planted(16, 16, 1, 0.0f);
    for (int c = 0; c < 3; ++c) raw.at(9, 4, c) += 0.5f;
    planted.at(9, 4) = 1.0f;
    ck.expect(identical(build_fine_mask(raw, clean, 3.0, 0), planted), "hot texel, dilate 0");
    ck.expect(identical(build_fine_mask(raw, clean, 3.0, 1), dilation_oracle(planted)), "hot texel, dilate 1");
  }
  int streak_len = 0;
  {
    // Skin-like base with mild noise, plus a dark curved hair streak.
    const int n = 64;
    const Texture clean = testutil::random_texture(rng, n, n, 3, 0.55f, 0.65f);
    Texture raw = clean;
    std::uniform_real_distribution<float> noise(-0.005f, 0.005f);
    for (auto& v : raw.samples()) v += noise(rng);
    Texture planted(n, n, 1, 0.0f);
    for (int x = 8; x < 56; ++x) {
      const int y = 20 + static_cast<int>(std::lround(8.0 * std::sin(x / 9.0)));
      planted.at(x, y) = 1.0f;
    }
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (planted.at(x, y) != 0.0f) {
          ++streak_len;
          for (int c = 0; c < 3; ++c) raw.at(x, y, c) = 0.08f;
        }
    ck.expect(identical(build_fine_mask(raw, clean, 3.0, 0), planted), "hair streak, dilate 0");
    ck.expect(identical(build_fine_mask(raw, clean, 3.0, 1), dilation_oracle(planted)), "hair streak, dilate 1");
  }
  ck.detail = "hot texel and " + std::to_string(streak_len) + "-texel streak";
}

// --- metrics ---------------------------------------------------------------

struct HandImage {
  const char* id;
  const char* condition;
  double diagonal;
  std::vector<Vec2> pred;
  std::vector<std::vector<int>> lids;  // UL, LL, UR, LR
  std::vector<Vec2> gt;
  double interocular;                  // 0: no gt points
  std::vector<std::vector<Vec2>> polylines;  // UL, LL, UR, LR or empty
};

std::vector<HandImage> hand_images() {
  return {
      {"img01", "open", 200,
       {{10, 10}, {20, 12}, {40, 10}, {50, 9}}, {{0}, {1}, {2}, {3}},
       {{10, 11}, {20, 10}, {40, 10}, {50, 10}}, 40,
       {{{0, 10}, {30, 10}}, {{0, 14}, {30, 14}}, {{30, 10}, {60, 10}}, {{30, 8}, {60, 8}}}},
      {"img02", "both-closed", 0,  // bbox [0, 0, 30, 40]
       {{0, 0}, {4, 0}, {0, 3}, {4, 1}, {20, 0}, {20, 2}}, {{0, 1}, {2, 3}, {4}, {5}},
       {{3, 4}, {4, 0}, {0, 3}, {4, 1}, {20, 0}, {20, 2}}, 20,
       {}},
      {"img03", "left-wink", 100,
       {{0, 0}, {0, 6}, {10, 0}, {10, 0.5}}, {{0}, {1}, {2}, {3}},
       {{0, 0}, {0, 6}, {40, 0}, {10, 0.5}}, 25,
       {{{-5, 1}, {5, 1}}, {{-5, 6}, {5, 6}}, {{5, 0}, {15, 0}}, {{5, 0}, {15, 0}}}},
      {"img04", "right-wink", 80,
       {{0, 0}, {0, 0}, {10, 0}, {12, 0}, {10, 4}, {12, 2}}, {{0}, {1}, {2, 3}, {4, 5}},
       {}, 0,
       {{{1, 0}, {2, 0}}, {{0, 0}, {1, 1}}, {{10, 1}, {12, 1}}, {{10, 4}, {12, 4}}}},
      {"img05", "open", 100,
       {{0, 0}, {5, 5}, {9, 1}}, {},
       {{3, 4}, {5, 5}, {9, 1}}, 10,
       {}},
  };
}

std::string hand_manifest(double k) {
  const char* lid_names[] = {groups::upper_left_eyelid, groups::lower_left_eyelid, groups::upper_right_eyelid,
                             groups::lower_right_eyelid};
  const auto pts = [&](const std::vector<Vec2>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : v) a.push_back({k * p.x, k * p.y});
    return a;
  };
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& img : hand_images()) {
    nlohmann::json r = {{"image_id", img.id}, {"condition", img.condition}};
    if (img.diagonal > 0)
      r["bbox_diagonal"] = k * img.diagonal;
    else
      r["bbox"] = {0, 0, k * 30, k * 40};
    r["pred"]["points"] = pts(img.pred);
    for (std::size_t g = 0; g < img.lids.size(); ++g) r["pred"]["groups"][lid_names[g]] = img.lids[g];
    if (img.interocular > 0) {
      r["gt"]["points"] = pts(img.gt);
      r["gt"]["interocular"] = k * img.interocular;
    }
    for (std::size_t g = 0; g < img.polylines.size(); ++g) r["gt"]["polylines"][lid_names[g]] = pts(img.polylines[g]);
    doc.push_back(r);
  }
  return doc.dump();
}

void metrics(Check& ck) {
  const Polyline seg{{{0, 0}, {2, 0}}};
  ck.expect(std::abs(point_to_polyline({0, 1}, seg) - 1.0) <= 1e-12, "(0,1) case");
  ck.expect(std::abs(point_to_polyline({3, 0}, seg) - 1.0) <= 1e-12, "(3,0) endpoint clamp");

  // Hand-computed values for the 5-image manifest, sorted by image id.
  struct Expected {
    double nme, eyelid, opening;  // NAN when not computed
  };
  const Expected want[] = {
      {2.5, 0.375, NAN},
      {4.1666666666666667, NAN, 4.0},
      {30.0, 0.375, 6.0},
      {NAN, 1.0416666666666667, 3.75},
      {16.666666666666667, NAN, NAN},
  };
  const double want_nme_mean = 13.333333333333333, want_eyelid_mean = 0.59722222222222222;
  const double want_opening_mean = 4.5833333333333333, want_fr = 50.0;

  const auto report = evaluate(parse_eval_manifest(hand_manifest(1.0)), {});
  const auto close = [](std::optional<double> got, double w) {
    if (std::isnan(w)) return !got.has_value();
    return got && std::abs(*got - w) <= 1e-9;
  };
  ck.expect(report.images.size() == 5, "image count");
  for (std::size_t i = 0; i < std::min<std::size_t>(5, report.images.size()); ++i) {
    const auto& img = report.images[i];
    ck.expect(close(img.nme, want[i].nme), img.image_id + " nme");
    ck.expect(close(img.eyelid_error, want[i].eyelid), img.image_id + " eyelid_error");
    ck.expect(close(img.eye_opening_error, want[i].opening), img.image_id + " eye_opening_error");
  }
  ck.expect(close(report.nme.mean, want_nme_mean), "nme mean");
  ck.expect(close(report.eyelid_error.mean, want_eyelid_mean), "eyelid mean");
  ck.expect(close(report.eye_opening_error.mean, want_opening_mean), "eye opening mean");
  ck.expect(close(report.failure_rate, want_fr), "failure rate");

  double scale_dev = 0;
  const auto doubled = evaluate(parse_eval_manifest(hand_manifest(2.0)), {});
  for (std::size_t i = 0; i < report.images.size(); ++i) {
    const auto dev = [&](const std::optional<double>& a, const std::optional<double>& b) {
      if (a.has_value() != b.has_value()) return double{INFINITY};
      return a ? std::abs(*a - *b) : 0.0;
    };
    scale_dev = std::max({scale_dev, dev(report.images[i].nme, doubled.images[i].nme),
                          dev(report.images[i].eyelid_error, doubled.images[i].eyelid_error),
                          dev(report.images[i].eye_opening_error, doubled.images[i].eye_opening_error)});
  }
  ck.expect(scale_dev <= 1e-9, "2x scale deviation " + fmt("%.3g", scale_dev));

  std::mt19937_64 rng(1007);
  std::exponential_distribution<double> err(0.2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> e(1 + trial % 40);
    for (auto& x : e) x = err(rng);
    double prev = INFINITY;
    for (double th = 0; th <= 40; th += 0.25) {
      const double fr = failure_rate(e, th);
      ck.expect(fr <= prev, "FR not monotone");
      prev = fr;
    }
  }
  ck.detail = "5-image manifest, 2x scale dev " + fmt("%.2g", scale_dev);
}

// --- scale / performance ---------------------------------------------------

void performance(Check& ck) {
  const Mesh base = make_grid(99, 100);
  std::mt19937_64 rng(1008);
  std::vector<Vec3> moved(base.vertices().begin(), base.vertices().end());
  std::uniform_real_distribution<double> d(-0.002, 0.002);
  for (auto& p : moved) p = {p.x + d(rng), p.y + d(rng), p.z + d(rng)};
  const Mesh deformed = base.with_vertices(moved);
  TensionParams params;
  params.expansion_iters = 3;
  params.compression_iters = 3;
  std::vector<double> times;
  for (int rep = 0; rep < 5; ++rep) {
    const auto start = Clock::now();
    const auto t = weighted_tension(base, deformed, params);
    times.push_back(seconds_since(start));
    if (t.size() != base.vertex_count()) ck.expect(false, "size");
  }
  std::sort(times.begin(), times.end());
  const double tension_ms = 1000 * times[times.size() / 2];
  ck.expect(base.vertex_count() >= 10000, "mesh too small");
  ck.expect(tension_ms < 50.0, "tension pipeline " + fmt("%.1f ms", tension_ms));

  const int n = 2048;
  const Texture na = testutil::random_texture(rng, n, n, 3), nd = testutil::random_texture(rng, n, n, 1, -1, 1);
  std::vector<ExpressionSample> samples;
  for (int k = 0; k < 3; ++k)
    samples.push_back({"e" + std::to_string(k), testutil::random_texture(rng, n, n, 3),
                       testutil::random_texture(rng, n, n, 1, -1, 1), testutil::random_texture(rng, n, n, 1, -1, 1)});
  const auto start = Clock::now();
  const auto maps = build_wrinkle_maps(na, nd, samples, 10.0);
  const double build_s = seconds_since(start);
  ck.expect(maps.compressed_albedo.width() == n, "map size");
  ck.expect(build_s < 5.0, "2048^2 build " + fmt("%.2f s", build_s));

  const Mesh face = load_mesh(fs::path(WRINKLE_DATA_DIR) / "face_scale.obj");
  ck.expect(face.vertex_count() == 7667 && face.face_count() == 7414,
            "face fixture has " + std::to_string(face.vertex_count()) + " v / " + std::to_string(face.face_count()) + " f");
  ck.detail = "tension " + fmt("%.1f ms", tension_ms) + " (" + std::to_string(base.vertex_count()) +
              " v), 2048^2 build " + fmt("%.2f s", build_s) + ", face fixture " +
              std::to_string(face.vertex_count()) + " v / " + std::to_string(face.face_count()) + " f";
}

void determinism(Check& ck) {
  testutil::TempDir dir;
  std::mt19937_64 rng(1009);
  auto config = fixture::base_config(dir / "unused");
  for (int i = 0; i < 6; ++i)
    config["identities"].push_back(fixture::write_identity(dir / "in", "id" + std::to_string(i), rng, 64, 3));
  const auto cfg = fixture::write_config(dir / "config.json", config).string();
  const int a = run_cli({"--config", cfg, "--jobs", "1", "--out", (dir / "j1").string(), "build-maps"});
  const int b = run_cli({"--config", cfg, "--jobs", "8", "--out", (dir / "j8").string(), "build-maps"});
  ck.expect(a == 0 && b == 0, "build-maps failed");
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "j1")) {
    if (entry.path().extension() != ".pfm") continue;
    const auto other = dir / "j8" / fs::relative(entry.path(), dir / "j1");
    ck.expect(fs::exists(other) && testutil::read_file(entry.path()) == testutil::read_file(other),
              "differs: " + other.string());
    ++files;
  }
  ck.expect(files == 36, "expected 36 PFM files, found " + std::to_string(files));
  ck.detail = std::to_string(files) + " PFM files compared";
}

}  // namespace

int main() {
  log::set_quiet(true);
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"tension correctness", tension_correctness},
      {"propagation oracle", propagation_oracle},
      {"wrinkle-map properties", wrinkle_map_properties},
      {"blend identities", blend_identities},
      {"grafting", grafting},
      {"cleaning masks", cleaning},
      {"metrics", metrics},
      {"scale and performance", performance},
      {"end-to-end determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check ck;
    try {
      criteria[i].second(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = ck.failed == 0;
    failed += !ok;
    std::printf("criterion %zu: %s  %s", i + 1, ok ? "PASS" : "FAIL", criteria[i].first);
    if (!ck.detail.empty()) std::printf("  (%s)", ck.detail.c_str());
    std::printf("\n");
    for (const auto& f : ck.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
