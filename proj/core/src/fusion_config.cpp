// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kitsfuse/fusion_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "kv_text.hpp"

namespace kitsfuse {
namespace {

std::string join_step_order() {
  std::string s;
  for (std::size_t i = 0; i < kFusionStepOrder.size(); ++i) {
    if (i) s += ',';
    s += kFusionStepOrder[i];
  }
  return s;
}

}  // namespace

void FusionConfig::validate() const {
  if (!(tumor_dice_threshold >= 0.0 && tumor_dice_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfig, "tumor_dice_threshold must be in [0, 1]");
  }
  if (!(min_volume_mm3 >= 0.0) || !std::isfinite(min_volume_mm3)) {
    throw Error(ErrorCode::kConfig, "min_volume_mm3 must be finite and >= 0");
  }
  if (!(gate_min_overlap_fraction >= 0.0 && gate_min_overlap_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "gate_min_overlap_fraction must be in [0, 1]");
  }
}

std::string FusionConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "tumor_dice_threshold = " << tumor_dice_threshold << "\n"
     << "min_volume_mm3 = " << min_volume_mm3 << "\n"
     << "connectivity = " << connectivity_name(connectivity) << "\n"
     << "gate = " << b(steps.gate) << "\n"
     << "tumor_filter = " << b(steps.tumor_filter) << "\n"
     << "join = " << b(steps.join) << "\n"
     << "hull_merge = " << b(steps.hull_merge) << "\n"
     << "min_volume = " << b(steps.min_volume) << "\n"
     << "conflict_rule = full_res_wins\n"
     << "tumor_fp_relabel = "
     << (tumor_fp_relabel == TumorRelabel::kBackground ? "background" : "kidney")
     << "\n"
     << "gate_min_overlap_fraction = " << gate_min_overlap_fraction << "\n"
     << "step_order = " << join_step_order() << "\n";
  return os.str();
}

FusionConfig FusionConfig::from_text(std::string_view text) {
  using detail::parse_bool;
  using detail::parse_double;
  constexpr auto kErr = ErrorCode::kConfig;
  FusionConfig cfg;
  for (const auto& kv : detail::parse_kv(text, kErr)) {
    const auto& k = kv.key;
    const auto& v = kv.value;
    if (k == "tumor_dice_threshold") {
      cfg.tumor_dice_threshold = parse_double(v, k, kErr);
    } else if (k == "min_volume_mm3") {
      cfg.min_volume_mm3 = parse_double(v, k, kErr);
    } else if (k == "connectivity") {
      if (v == "6" || v == "face6") {
        cfg.connectivity = Connectivity::kFace6;
      } else if (v == "26" || v == "vertex26") {
        cfg.connectivity = Connectivity::kVertex26;
      } else {
        throw Error(kErr, "connectivity must be 6 or 26, got '" + v + "'");
      }
    } else if (k == "gate") {
      cfg.steps.gate = parse_bool(v, k, kErr);
    } else if (k == "tumor_filter") {
      cfg.steps.tumor_filter = parse_bool(v, k, kErr);
    } else if (k == "join") {
      cfg.steps.join = parse_bool(v, k, kErr);
    } else if (k == "hull_merge") {
      cfg.steps.hull_merge = parse_bool(v, k, kErr);
    } else if (k == "min_volume") {
      cfg.steps.min_volume = parse_bool(v, k, kErr);
    } else if (k == "conflict_rule") {
      if (v != "full_res_wins") {
        throw Error(kErr, "conflict_rule must be full_res_wins, got '" + v + "'");
      }
      cfg.conflict_rule = ConflictRule::kFullResWins;
    } else if (k == "tumor_fp_relabel") {
      if (v == "background") {
        cfg.tumor_fp_relabel = TumorRelabel::kBackground;
      } else if (v == "kidney") {
        cfg.tumor_fp_relabel = TumorRelabel::kKidney;
      } else {
        throw Error(kErr, "tumor_fp_relabel must be background or kidney, got '" +
                              v + "'");
      }
    } else if (k == "gate_min_overlap_fraction") {
      cfg.gate_min_overlap_fraction = parse_double(v, k, kErr);
    } else if (k == "step_order") {
      // Informational; the order is fixed.
      std::string canonical;
      for (auto part : detail::split_list(v)) {
        if (!canonical.empty()) canonical += ',';
        canonical += part;
      }
      if (canonical != join_step_order()) {
        throw Error(kErr, "step_order is fixed to " + join_step_order() +
                              ", got '" + v + "'");
      }
    } else {
      throw Error(kErr, "line " + std::to_string(kv.line) +
                            ": unknown config key '" + k + "'");
    }
  }
  cfg.validate();
  return cfg;
}

FusionConfig FusionConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

}  // namespace kitsfuse
