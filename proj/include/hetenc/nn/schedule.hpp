#pragma once

#include <span>

namespace hetenc::nn {

struct TrainSchedule {
  double initial_lr = 0.05;
  int plateau_patience = 5;   // epochs without improvement before reducing lr
  double lr_factor = 0.5;
  int early_stop_patience = 0;  // 0 disables early stopping
  bool checkpoint_on_improvement = true;
};

enum class ScheduleAction { none, reduce_lr, stop, checkpoint };

const char* to_string(ScheduleAction a);

// Decides the action after the most recent epoch given the full loss history.
// Replays the counters from the start so the call is stateless: checkpoint on
// any improvement over the best seen loss; reduce_lr each time the epochs
// since the last improvement (or last reduction) reach plateau_patience; stop
// once the epochs since the best loss reach early_stop_patience.
ScheduleAction schedule_update(const TrainSchedule& sched, std::span<const double> history);

}  // namespace hetenc::nn
