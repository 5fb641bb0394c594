#include "hetenc/nn/schedule.hpp"

#include <limits>
#include <stdexcept>

namespace hetenc::nn {

const char* to_string(ScheduleAction a) {
  switch (a) {
    case ScheduleAction::none: return "none";
    case ScheduleAction::reduce_lr: return "reduce_lr";
    case ScheduleAction::stop: return "stop";
    case ScheduleAction::checkpoint: return "checkpoint";
  }
  return "none";
}

ScheduleAction schedule_update(const TrainSchedule& sched, std::span<const double> history) {
  if (history.empty()) throw std::invalid_argument("schedule_update: empty history");
  double best = std::numeric_limits<double>::infinity();
  int plateau_wait = 0;
  int stop_wait = 0;
  ScheduleAction action = ScheduleAction::none;
  for (double loss : history) {
    if (loss < best) {
      best = loss;
      plateau_wait = 0;
      stop_wait = 0;
      action = sched.checkpoint_on_improvement ? ScheduleAction::checkpoint
                                               : ScheduleAction::none;
      continue;
    }
    ++plateau_wait;
    ++stop_wait;
    if (sched.early_stop_patience > 0 && stop_wait >= sched.early_stop_patience) {
      action = ScheduleAction::stop;
    } else if (plateau_wait >= sched.plateau_patience) {
      action = ScheduleAction::reduce_lr;
      plateau_wait = 0;
    } else {
      action = ScheduleAction::none;
    }
  }
  return action;
}

}  // namespace hetenc::nn
