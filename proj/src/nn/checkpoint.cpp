#include "hetenc/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace hetenc::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are little-endian");

namespace {

constexpr char kMagic[7] = {'H', 'E', 'T', 'E', 'N', 'C', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw CheckpointError(CheckpointErrorKind::CorruptCheckpoint, "truncated checkpoint");
  return v;
}

void write_u8(std::ostream& os, std::uint8_t v) {
  os.write(reinterpret_cast<const char*>(&v), 1);
}

std::uint8_t read_u8(std::istream& is) {
  std::uint8_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 1);
  if (!is) throw CheckpointError(CheckpointErrorKind::CorruptCheckpoint, "truncated checkpoint");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<NamedTensor>& tensors) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_u8(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(config_json.size()));
  os.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
  write_u32(os, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    write_u32(os, static_cast<std::uint32_t>(t.name.size()));
    os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_u8(os, kDtypeF32);
    write_u8(os, static_cast<std::uint8_t>(t.shape.size()));
    for (std::size_t d : t.shape) write_u32(os, static_cast<std::uint32_t>(d));
  }
  for (const NamedTensor& t : tensors) {
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError(CheckpointErrorKind::CorruptCheckpoint, "bad magic string");
  }
  const std::uint8_t version = read_u8(is);
  if (version != kVersion) {
    throw CheckpointError(CheckpointErrorKind::VersionMismatch,
                          "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  const std::uint32_t cfg_len = read_u32(is);
  ck.config_json.resize(cfg_len);
  is.read(ck.config_json.data(), cfg_len);
  if (!is) throw CheckpointError(CheckpointErrorKind::CorruptCheckpoint, "truncated config");
  const std::uint32_t count = read_u32(is);
  ck.tensors.resize(count);
  for (NamedTensor& t : ck.tensors) {
    const std::uint32_t name_len = read_u32(is);
    t.name.resize(name_len);
    is.read(t.name.data(), name_len);
    const std::uint8_t dtype = read_u8(is);
    if (dtype != kDtypeF32) {
      throw CheckpointError(CheckpointErrorKind::VersionMismatch, "unsupported dtype");
    }
    const std::uint8_t ndim = read_u8(is);
    std::size_t total = 1;
    for (int d = 0; d < ndim; ++d) {
      t.shape.push_back(read_u32(is));
      total *= t.shape.back();
    }
    t.data.resize(total);
  }
  for (NamedTensor& t : ck.tensors) {
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    if (!is) {
      throw CheckpointError(CheckpointErrorKind::CorruptCheckpoint, "truncated payload");
    }
  }
  return ck;
}

const NamedTensor& Checkpoint::require(const std::string& name) const {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return t;
  }
  throw CheckpointError(CheckpointErrorKind::VersionMismatch, "missing tensor: " + name);
}

}  // namespace hetenc::nn
