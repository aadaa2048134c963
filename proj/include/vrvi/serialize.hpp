// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_SERIALIZE_HPP_
#define VRVI_SERIALIZE_HPP_

#include <optional>
#include <string>

#include "vrvi/problems.hpp"

namespace vrvi {

// Versioned binary instance format: 5-byte magic "VRVI1", a one-byte kind
// tag, then the instance payload (little-endian scalars, column-major
// matrices). Loading validates the magic and rejects truncated files.
enum class InstanceKind : unsigned char {
  kLinearQuadratic = 1,
  kNeymanPearson = 2,
};

struct LoadedInstance {
  InstanceKind kind = InstanceKind::kLinearQuadratic;
  std::optional<InstanceData> linear;
  std::optional<NpInstance> np;
};

void save_instance(const std::string& path, const InstanceData& inst);
void save_instance(const std::string& path, const NpInstance& inst);
LoadedInstance load_instance(const std::string& path);

}  // namespace vrvi

#endif  // VRVI_SERIALIZE_HPP_
