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
#ifndef CONTOURKIT_LOSSES_HPP_
#define CONTOURKIT_LOSSES_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "contourkit/geometry.hpp"

namespace contourkit {

enum class LossKind { kLovasz, kMse, kBce, kDice };

std::optional<LossKind> parse_loss_kind(std::string_view name);
std::string_view loss_kind_name(LossKind kind);

// Scalar loss with d(loss)/d(pred) for every pixel, row-major.
struct PixelLoss {
  double value = 0.0;
  std::vector<double> grad;
};

inline constexpr double kDiceSmoothing = 1.0;
inline constexpr double kBceClamp = 1e-7;

/// Binary Lovasz hinge on probabilities. Scores s = 2p - 1 and signs
/// g = 2y - 1 give hinge errors m = max(0, 1 - s g) / 2 (= |p - y| on
/// [0, 1]); the loss is the Lovasz extension of the Jaccard loss evaluated
/// at m, so binary predictions score exactly 1 - IoU.
PixelLoss lovasz_hinge(const SoftMask& pred, const HardMask& gt);

/// MSE, BCE (pred clamped to [1e-7, 1 - 1e-7]) or Dice with smoothing 1.
/// kLovasz forwards to lovasz_hinge.
PixelLoss pixel_loss(LossKind kind, const SoftMask& pred, const HardMask& gt);

// 1 - IoU between the filled contour and gt_mask, in gt_mask's pixel frame.
double reconstruction_error(const Contour& contour, const HardMask& gt_mask);

}  // namespace contourkit

#endif  // CONTOURKIT_LOSSES_HPP_
