#include "healthchain/keys.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

#include "healthchain/digest.hpp"

namespace healthchain {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

template <std::size_t N>
std::array<std::uint8_t, N> array_from_hex(std::string_view hex) {
  const auto bytes = from_hex(hex);
  if (bytes.size() != N) throw std::invalid_argument("unexpected key/signature length");
  std::array<std::uint8_t, N> out{};
  std::copy(bytes.begin(), bytes.end(), out.begin());
  return out;
}

}  // namespace

std::string PublicKey::hex() const { return to_hex(bytes); }

PublicKey PublicKey::from_hex(std::string_view hex) {
  return PublicKey{array_from_hex<32>(hex)};
}

std::string Signature::hex() const { return to_hex(bytes); }

Signature Signature::from_hex(std::string_view hex) {
  return Signature{array_from_hex<64>(hex)};
}

KeyPair Ed25519Scheme::keypair_from_seed(std::span<const std::uint8_t, 32> seed) const {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pub.bytes.data(), kp.sec.bytes.data(), seed.data());
  return kp;
}

Signature Ed25519Scheme::sign(const SecretKey& key, std::string_view message) const {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr,
                       reinterpret_cast<const unsigned char*>(message.data()),
                       message.size(), key.bytes.data());
  return sig;
}

bool Ed25519Scheme::verify(const PublicKey& key, std::string_view message,
                           const Signature& sig) const {
  ensure_sodium();
  return crypto_sign_verify_detached(
             sig.bytes.data(), reinterpret_cast<const unsigned char*>(message.data()),
             message.size(), key.bytes.data()) == 0;
}

const SignatureScheme& default_scheme() {
  static const Ed25519Scheme scheme;
  return scheme;
}

KeyPair keypair_from_rng(std::mt19937_64& rng, const SignatureScheme& scheme) {
  std::array<std::uint8_t, 32> seed{};
  for (std::size_t i = 0; i < seed.size(); i += 8) {
    const std::uint64_t word = rng();
    for (std::size_t j = 0; j < 8; ++j)
      seed[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return scheme.keypair_from_seed(seed);
}

}  // namespace healthchain
