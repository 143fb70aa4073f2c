#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace healthchain {

// 256-bit digest. The all-zero value doubles as the genesis marker: the
// prev_header of block 0 on every chain.
using Digest = std::array<std::uint8_t, 32>;

inline constexpr Digest kGenesisMarker{};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);

// Strict lowercase/uppercase hex of even length; throws std::invalid_argument.
std::vector<std::uint8_t> from_hex(std::string_view hex);

std::string hex(const Digest& d);
Digest digest_from_hex(std::string_view hex);

}  // namespace healthchain
