#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace autotandem {

/// Incremental SHA-256 (FIPS 180-4). Used to fingerprint datasets and
/// persisted files so reruns can be compared byte-for-byte.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }
    /// Digest as lowercase hex; finalizes the stream.
    std::string hex_digest();

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t h_[8];
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
    std::uint64_t total_bits_ = 0;
};

std::string sha256_hex(std::string_view data);
std::string sha256_hex(std::span<const double> values);

}  // namespace autotandem
