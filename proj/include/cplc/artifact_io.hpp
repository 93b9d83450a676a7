#pragma once

#include <string>
#include <vector>

#include "cplc/schemes.hpp"

namespace cplc {

// ArtifactFile container, bit-exact:
//   magic "CPLC" | version byte (1) | problem_id, parameterization_id,
//   scheme_id as length-prefixed UTF-8 | param_value as u32 bit count plus
//   packed bytes | declared_poly as u32 count plus u64 coefficients |
//   payload_kind byte | payload as u32 byte count plus bytes | CRC32 of all
//   preceding bytes. All integers little-endian.

std::vector<std::uint8_t> serialize_artifact(const CompiledArtifact& artifact);
CompiledArtifact deserialize_artifact(const std::vector<std::uint8_t>& bytes);

void save_artifact(const CompiledArtifact& artifact, const std::string& path);
CompiledArtifact load_artifact(const std::string& path);

}  // namespace cplc
