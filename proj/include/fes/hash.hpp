#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fes {

// FNV-1a, 64 bit. Used for content-addressed caching of pipeline stages; not
// cryptographic, just stable and dependency-free.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes);

// Hash of a file's full contents; throws fes::IoError if unreadable.
std::string file_hash_hex(const std::string& path);

} // namespace fes
