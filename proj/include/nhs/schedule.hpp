#pragma once

#include <optional>

namespace nhs {

enum class SicStage { First, Second, NotAdmitted };

/// Outcome of device scheduling for one block.
struct ScheduleDecision {
  std::optional<int> admitted;  // device index into ChannelRealization::gamma
  SicStage sic_stage = SicStage::NotAdmitted;
  double achieved_rate = 0.0;   // bits per channel use, 0 when not admitted

  static ScheduleDecision none() { return {}; }
  bool is_admitted() const { return admitted.has_value(); }
};

}  // namespace nhs
