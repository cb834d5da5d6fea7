#include "fes/hash.hpp"

#include <fstream>
#include <sstream>

#include "fes/errors.hpp"

namespace fes {

std::string fnv1a64_hex(std::string_view bytes) {
    const std::uint64_t h = fnv1a64(bytes);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for hashing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64_hex(ss.str());
}

} // namespace fes
