#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetenc/nn/tensor.hpp"

namespace hetenc::nn {

enum class CheckpointErrorKind { CorruptCheckpoint, VersionMismatch };

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  CheckpointErrorKind kind() const { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

struct NamedTensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> data;
};

// Binary checkpoint: magic "HETENC1", version byte, a config blob (JSON
// string), a manifest of (name, shape, dtype) entries, then the little-endian
// float32 payloads in manifest order.
void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<NamedTensor>& tensors);

struct Checkpoint {
  std::string config_json;
  std::vector<NamedTensor> tensors;

  const NamedTensor& require(const std::string& name) const;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace hetenc::nn
