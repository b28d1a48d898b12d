#pragma once

#include <cstdint>
#include <string>

namespace spinrc {

// FNV-1a 64-bit. Used for config hashes, cache keys and manifest content
// hashes; the algorithm name is recorded next to every emitted hash.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);
std::string hash_hex(std::uint64_t h);
std::uint64_t hash_file(const std::string& path);

}  // namespace spinrc
