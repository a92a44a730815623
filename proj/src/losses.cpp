/* Copyright 2026 The ContourKit Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "contourkit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace contourkit {
namespace {

void check_dims(const SoftMask& pred, const HardMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    throw std::invalid_argument("loss: prediction and target dimensions differ");
  }
}

PixelLoss mse(const SoftMask& pred, const HardMask& gt) {
  const std::size_t n = pred.values.size();
  PixelLoss out{0.0, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred.values[i] - gt.bits[i];
    out.value += d * d;
    out.grad[i] = 2.0 * d / static_cast<double>(n);
  }
  out.value /= static_cast<double>(n);
  return out;
}

PixelLoss bce(const SoftMask& pred, const HardMask& gt) {
  const std::size_t n = pred.values.size();
  PixelLoss out{0.0, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = pred.values[i];
    const double p = std::clamp(raw, kBceClamp, 1.0 - kBceClamp);
    const bool clamped = p != raw;
    if (gt.bits[i]) {
      out.value -= std::log(p);
      out.grad[i] = clamped ? 0.0 : -1.0 / p / static_cast<double>(n);
    } else {
      out.value -= std::log(1.0 - p);
      out.grad[i] = clamped ? 0.0 : 1.0 / (1.0 - p) / static_cast<double>(n);
    }
  }
  out.value /= static_cast<double>(n);
  return out;
}

PixelLoss dice(const SoftMask& pred, const HardMask& gt) {
  const std::size_t n = pred.values.size();
  double inter = 0.0;
  double sum_p = 0.0;
  double sum_g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inter += pred.values[i] * gt.bits[i];
    sum_p += pred.values[i];
    sum_g += gt.bits[i];
  }
  const double num = 2.0 * inter + kDiceSmoothing;
  const double den = sum_p + sum_g + kDiceSmoothing;
  PixelLoss out{1.0 - num / den, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.grad[i] = -(2.0 * gt.bits[i] * den - num) / (den * den);
  }
  return out;
}

}  // namespace

std::optional<LossKind> parse_loss_kind(std::string_view name) {
  if (name == "lovasz") return LossKind::kLovasz;
  if (name == "mse") return LossKind::kMse;
  if (name == "bce") return LossKind::kBce;
  if (name == "dice") return LossKind::kDice;
  return std::nullopt;
}

std::string_view loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::kLovasz: return "lovasz";
    case LossKind::kMse: return "mse";
    case LossKind::kBce: return "bce";
    case LossKind::kDice: return "dice";
  }
  return "unknown";
}

PixelLoss lovasz_hinge(const SoftMask& pred, const HardMask& gt) {
  check_dims(pred, gt);
  const std::size_t n = pred.values.size();
  std::vector<double> errors(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double score = 2.0 * pred.values[i] - 1.0;
    const double sign = 2.0 * gt.bits[i] - 1.0;
    errors[i] = 0.5 * std::max(0.0, 1.0 - score * sign);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return errors[a] > errors[b]; });

  // Discrete gradient of the Jaccard loss along the sorted order.
  const double positives = static_cast<double>(gt.count());
  double cum_fg = 0.0;
  double cum_bg = 0.0;
  double prev_jaccard = 0.0;
  PixelLoss out{0.0, std::vector<double>(n, 0.0)};
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    if (gt.bits[i]) {
      cum_fg += 1.0;
    } else {
      cum_bg += 1.0;
    }
    const double intersection = positives - cum_fg;
    const double uni = positives + cum_bg;
    const double jaccard = 1.0 - intersection / uni;
    const double weight = jaccard - prev_jaccard;
    prev_jaccard = jaccard;

    out.value += errors[i] * weight;
    if (errors[i] > 0.0) {
      // dm/dp = -(2y - 1) while the hinge is active.
      out.grad[i] = -(2.0 * gt.bits[i] - 1.0) * weight;
    }
  }
  return out;
}

PixelLoss pixel_loss(LossKind kind, const SoftMask& pred, const HardMask& gt) {
  check_dims(pred, gt);
  switch (kind) {
    case LossKind::kLovasz: return lovasz_hinge(pred, gt);
    case LossKind::kMse: return mse(pred, gt);
    case LossKind::kBce: return bce(pred, gt);
    case LossKind::kDice: return dice(pred, gt);
  }
  throw std::invalid_argument("pixel_loss: unknown loss kind");
}

double reconstruction_error(const Contour& contour, const HardMask& gt_mask) {
  return 1.0 - mask_iou(fill_polygon(contour, gt_mask.width, gt_mask.height), gt_mask);
}

}  // namespace contourkit
