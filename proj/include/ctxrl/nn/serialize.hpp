#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctxrl/nn/param_set.hpp"

namespace ctxrl::nn {

inline constexpr std::string_view kArchiveMagic = "CTXRL1";

/// Named tensors plus free-form metadata. On disk:
///
///   CTXRL1\n
///   {"blob_bytes":..., "meta":{...}, "tensors":[{"name","shape","offset"}...]}\n
///   <little-endian float64 blob>
///   crc32 <8 hex digits>\n
///
/// The checksum covers every byte before the trailer line.
struct Archive {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> tensors;

  void put(std::string name, Tensor value) { tensors.emplace_back(std::move(name), std::move(value)); }
  const Tensor& get(std::string_view name) const;
  bool contains(std::string_view name) const;
};

std::string encode_archive(const Archive& archive);
/// Throws IntegrityError on a bad magic, truncated blob, or checksum mismatch.
Archive decode_archive(std::string_view bytes);

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

nlohmann::json topology_to_json(const Topology& topo);
Topology topology_from_json(const nlohmann::json& j);

/// Stores `params` under "<prefix>/<name>" and its topology in meta.
void put_params(Archive& archive, const std::string& prefix, const ParamSet& params);
ParamSet get_params(const Archive& archive, const std::string& prefix);

void save_params(const std::filesystem::path& path, const ParamSet& params);
ParamSet load_params(const std::filesystem::path& path);

}  // namespace ctxrl::nn
