#include "wrinkle/wrinkles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wrinkle/error.hpp"

namespace wrinkle {

void WrinkleMapSet::validate() const {
  for (const Texture* t : {&neutral_albedo, &expanded_albedo, &compressed_albedo}) {
    if (t->channels() != 3) throw DimensionError("wrinkle maps: albedo maps must have 3 channels");
    require_same_size(*t, neutral_albedo, "wrinkle maps");
  }
  for (const Texture* t : {&neutral_disp, &expanded_disp, &compressed_disp}) {
    if (t->channels() != 1)
      throw DimensionError("wrinkle maps: displacement maps must have 1 channel");
    require_same_size(*t, neutral_albedo, "wrinkle maps");
  }
}

void softmax(std::span<const double> logits, std::span<double> weights) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    weights[i] = std::exp(logits[i] - peak);
    total += weights[i];
  }
  for (auto& w : weights) w /= total;
}

namespace {

// Sample order is canonicalized (by name, then by content) so the floating
// point summation order does not depend on how the caller listed samples.
bool sample_less(const ExpressionSample& a, const ExpressionSample& b) {
  if (a.name != b.name) return a.name < b.name;
  const auto lex = [](const Texture& x, const Texture& y) -> int {
    const auto sx = x.samples();
    const auto sy = y.samples();
    for (std::size_t i = 0; i < sx.size(); ++i) {
      if (sx[i] < sy[i]) return -1;
      if (sy[i] < sx[i]) return 1;
    }
    return 0;
  };
  for (auto [x, y] : {std::pair{&a.tension_map, &b.tension_map}, std::pair{&a.albedo, &b.albedo},
                      std::pair{&a.displacement, &b.displacement}}) {
    if (const int c = lex(*x, *y); c != 0) return c < 0;
  }
  return false;
}

enum class Channel { compression, expansion };

// Writes the softmax mix for one channel into albedo/disp outputs.
void mix_channel(const Texture& neutral_albedo, const Texture& neutral_disp,
                 const std::vector<const ExpressionSample*>& samples, double beta, Channel channel,
                 Texture& out_albedo, Texture& out_disp) {
  const std::size_t k = samples.size();
  std::vector<double> logits(k + 1), expw(k + 1);
  const auto na = neutral_albedo.samples();
  const auto nd = neutral_disp.samples();
  auto oa = out_albedo.samples();
  auto od = out_disp.samples();

  for (std::size_t t = 0; t < neutral_albedo.texel_count(); ++t) {
    logits[0] = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      const double tension = samples[s]->tension_map.samples()[t];
      const double magnitude =
          channel == Channel::compression ? std::max(tension, 0.0) : std::max(-tension, 0.0);
      logits[s + 1] = beta * magnitude;
    }
    // Unnormalized weights; dividing the mix by their sum at the end is the
    // same convex combination and keeps equal logits exactly uniform.
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
      expw[i] = std::exp(logits[i] - peak);
      total += expw[i];
    }
    for (int c = 0; c < 3; ++c) {
      double acc = expw[0] * na[t * 3 + c];
      for (std::size_t s = 0; s < k; ++s) acc += expw[s + 1] * samples[s]->albedo.samples()[t * 3 + c];
      oa[t * 3 + c] = static_cast<float>(acc / total);
    }
    double acc = expw[0] * nd[t];
    for (std::size_t s = 0; s < k; ++s) acc += expw[s + 1] * samples[s]->displacement.samples()[t];
    od[t] = static_cast<float>(acc / total);
  }
}

}  // namespace

WrinkleMapSet build_wrinkle_maps(const Texture& neutral_albedo, const Texture& neutral_disp,
                                 std::span<const ExpressionSample> samples, double beta) {
  if (samples.empty()) throw DataError("build_wrinkle_maps: no expression samples");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw ConfigError("build_wrinkle_maps: softmax beta must be finite and > 0");
  if (neutral_albedo.channels() != 3)
    throw DimensionError("build_wrinkle_maps: neutral albedo must have 3 channels");
  if (neutral_disp.channels() != 1)
    throw DimensionError("build_wrinkle_maps: neutral displacement must have 1 channel");
  require_same_size(neutral_albedo, neutral_disp, "build_wrinkle_maps");
  for (const auto& s : samples) {
    const std::string ctx = "build_wrinkle_maps: sample '" + s.name + "'";
    require_same_shape(s.albedo, neutral_albedo, ctx + " albedo");
    require_same_shape(s.displacement, neutral_disp, ctx + " displacement");
    require_same_shape(s.tension_map, neutral_disp, ctx + " tension map");
  }

  std::vector<const ExpressionSample*> ordered;
  ordered.reserve(samples.size());
  for (const auto& s : samples) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ExpressionSample* a, const ExpressionSample* b) { return sample_less(*a, *b); });

  const int w = neutral_albedo.width();
  const int h = neutral_albedo.height();
  WrinkleMapSet out{neutral_albedo,         Texture(w, h, 3), Texture(w, h, 3),
                    neutral_disp,           Texture(w, h, 1), Texture(w, h, 1)};
  mix_channel(neutral_albedo, neutral_disp, ordered, beta, Channel::compression,
              out.compressed_albedo, out.compressed_disp);
  mix_channel(neutral_albedo, neutral_disp, ordered, beta, Channel::expansion,
              out.expanded_albedo, out.expanded_disp);
  return out;
}

Texture transfer_delta(const Texture& target_neutral, const Texture& donor_neutral,
                       const Texture& donor_wrinkle) {
  require_same_shape(target_neutral, donor_neutral, "graft");
  require_same_shape(donor_wrinkle, donor_neutral, "graft");
  Texture out(target_neutral.width(), target_neutral.height(), target_neutral.channels());
  const auto tn = target_neutral.samples();
  const auto dn = donor_neutral.samples();
  const auto dw = donor_wrinkle.samples();
  auto o = out.samples();
  for (std::size_t i = 0; i < o.size(); ++i)
    o[i] = static_cast<float>(static_cast<double>(tn[i]) +
                              (static_cast<double>(dw[i]) - static_cast<double>(dn[i])));
  return out;
}

std::size_t select_donor(const Texture& target_neutral_albedo, std::span<const Donor> donors) {
  if (donors.empty()) throw DataError("graft: empty donor pool");
  std::size_t best = 0;
  double best_mse = 0.0;
  for (std::size_t i = 0; i < donors.size(); ++i) {
    const double m = mse(donors[i].maps.neutral_albedo, target_neutral_albedo);
    if (i == 0 || m < best_mse || (m == best_mse && donors[i].identity < donors[best].identity)) {
      best = i;
      best_mse = m;
    }
  }
  return best;
}

GraftResult graft_wrinkles(const Texture& target_neutral_albedo, const Texture& target_neutral_disp,
                           std::span<const Donor> donors) {
  if (donors.empty()) throw DataError("graft: empty donor pool");
  if (target_neutral_albedo.channels() != 3 || target_neutral_disp.channels() != 1)
    throw DimensionError("graft: target neutral albedo/displacement must have 3/1 channels");
  require_same_size(target_neutral_albedo, target_neutral_disp, "graft");
  for (const auto& d : donors) {
    d.maps.validate();
    require_same_shape(d.maps.neutral_albedo, target_neutral_albedo,
                       "graft: donor '" + d.identity + "'");
  }

  const std::size_t pick = select_donor(target_neutral_albedo, donors);
  const auto& src = donors[pick].maps;
  GraftResult result;
  result.donor = donors[pick].identity;
  result.donor_mse = mse(src.neutral_albedo, target_neutral_albedo);
  result.maps.neutral_albedo = target_neutral_albedo;
  result.maps.neutral_disp = target_neutral_disp;
  result.maps.expanded_albedo =
      clamped(transfer_delta(target_neutral_albedo, src.neutral_albedo, src.expanded_albedo), 0.0f, 1.0f);
  result.maps.compressed_albedo =
      clamped(transfer_delta(target_neutral_albedo, src.neutral_albedo, src.compressed_albedo), 0.0f, 1.0f);
  result.maps.expanded_disp = transfer_delta(target_neutral_disp, src.neutral_disp, src.expanded_disp);
  result.maps.compressed_disp =
      transfer_delta(target_neutral_disp, src.neutral_disp, src.compressed_disp);
  return result;
}

BlendedTextures blend_at_synthesis(const WrinkleMapSet& maps, const Texture& tension_map) {
  maps.validate();
  if (tension_map.channels() != 1) throw DimensionError("blend: tension map must be 1-channel");
  require_same_size(tension_map, maps.neutral_albedo, "blend");

  BlendedTextures out{Texture(tension_map.width(), tension_map.height(), 3),
                      Texture(tension_map.width(), tension_map.height(), 1)};
  const auto tension = tension_map.samples();
  const auto na = maps.neutral_albedo.samples();
  const auto ea = maps.expanded_albedo.samples();
  const auto ca = maps.compressed_albedo.samples();
  const auto nd = maps.neutral_disp.samples();
  const auto ed = maps.expanded_disp.samples();
  const auto cd = maps.compressed_disp.samples();
  auto oa = out.albedo.samples();
  auto od = out.displacement.samples();

  for (std::size_t t = 0; t < tension.size(); ++t) {
    const double w = std::clamp<double>(tension[t], -1.0, 1.0);
    const double a = std::abs(w);
    const auto& wa = w > 0 ? ca : ea;
    const auto& wd = w > 0 ? cd : ed;
    for (int c = 0; c < 3; ++c) {
      const double v = (1.0 - a) * na[t * 3 + c] + a * wa[t * 3 + c];
      oa[t * 3 + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    od[t] = static_cast<float>((1.0 - a) * nd[t] + a * wd[t]);
  }
  return out;
}

}  // namespace wrinkle
