#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace healthchain {

struct PublicKey {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const PublicKey&) const = default;
  std::string hex() const;
  static PublicKey from_hex(std::string_view hex);
};

struct SecretKey {
  std::array<std::uint8_t, 64> bytes{};
};

struct KeyPair {
  PublicKey pub;
  SecretKey sec;
};

struct Signature {
  std::array<std::uint8_t, 64> bytes{};

  auto operator<=>(const Signature&) const = default;
  std::string hex() const;
  static Signature from_hex(std::string_view hex);
};

// The paper requires signatures but names no algorithm, so the scheme hides
// behind this interface. The default is Ed25519: seeded keygen and
// deterministic signatures keep seeded runs byte-reproducible.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual KeyPair keypair_from_seed(std::span<const std::uint8_t, 32> seed) const = 0;
  virtual Signature sign(const SecretKey& key, std::string_view message) const = 0;
  virtual bool verify(const PublicKey& key, std::string_view message,
                      const Signature& sig) const = 0;
};

class Ed25519Scheme final : public SignatureScheme {
 public:
  KeyPair keypair_from_seed(std::span<const std::uint8_t, 32> seed) const override;
  Signature sign(const SecretKey& key, std::string_view message) const override;
  bool verify(const PublicKey& key, std::string_view message,
              const Signature& sig) const override;
};

const SignatureScheme& default_scheme();

// Deterministic keypair from an RNG stream (32 seed bytes drawn from it).
KeyPair keypair_from_rng(std::mt19937_64& rng,
                         const SignatureScheme& scheme = default_scheme());

}  // namespace healthchain
