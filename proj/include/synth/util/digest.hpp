#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace synth::util {

// Hex-encoded SHA-256 of the input bytes.
std::string sha256_hex(std::string_view bytes);

// First 8 bytes of SHA-256 as an unsigned integer, for seeding RNG streams
// from text content.
std::uint64_t sha256_seed(std::string_view bytes);

// FNV-1a 64-bit, used for cheap in-process hashing (feature hashing etc.).
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace synth::util
