#include "miner/sha256.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace miner {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("EVP_Digest failed");

    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.resize(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

} // namespace miner
