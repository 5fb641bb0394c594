#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hetenc/encdec/model.hpp"
#include "hetenc/nn/schedule.hpp"

namespace hetenc::encdec {

struct TrainOptions {
  nn::TrainSchedule schedule;
  int epochs = 300;
  std::size_t batch_size = 256;
  double grad_clip = 5.0;
  std::uint64_t seed = 1;
  bool verbose = false;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double lr = 0.0;
  std::string action;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  // CSV with columns epoch,train_loss,test_loss,lr; `comment` lines are
  // prefixed with '#'.
  std::string to_csv(const std::string& comment = "") const;
};

// Source of (input, target) SMILES pairs for one epoch; called every epoch so
// enumerated modes can redraw.
using PairProvider =
    std::function<std::vector<std::pair<std::string, std::string>>(int epoch)>;

// Teacher-forced training with Adam, global-norm clipping, plateau lr
// reduction, best-checkpoint tracking and optional early stop. The model ends
// up holding the best-test-loss parameters when checkpointing is enabled.
TrainLog train_model(SeqModel& model, const PairProvider& train_pairs,
                     const std::vector<std::pair<std::string, std::string>>& test_pairs,
                     const TrainOptions& opts);

}  // namespace hetenc::encdec
