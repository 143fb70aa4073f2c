#include "healthchain/consensus.hpp"

#include <algorithm>

#include "json.hpp"

namespace healthchain {

using nlohmann::json;

std::string_view to_string(ConsensusError e) {
  switch (e) {
    case ConsensusError::None: return "ok";
    case ConsensusError::InvalidAttestation: return "invalid_attestation";
    case ConsensusError::DuplicateAuthority: return "duplicate_authority";
    case ConsensusError::EmptyRegistry: return "empty_registry";
    case ConsensusError::NotYourSlot: return "not_your_slot";
    case ConsensusError::NothingToSeal: return "nothing_to_seal";
    case ConsensusError::NotScheduled: return "not_scheduled";
    case ConsensusError::UnknownAuthority: return "unknown_authority";
  }
  return "unknown";
}

std::string Attestation::signing_payload() const {
  return json{{"statement", statement},
              {"subject", subject.hex()},
              {"verifier", verifier.hex()}}
      .dump();
}

Attestation make_attestation(const PublicKey& subject, std::string statement,
                             const KeyPair& verifier, const SignatureScheme& scheme) {
  Attestation att;
  att.subject = subject;
  att.verifier = verifier.pub;
  att.statement = std::move(statement);
  att.signature = scheme.sign(verifier.sec, att.signing_payload());
  return att;
}

AuthorityRegistry::AuthorityRegistry(std::vector<PublicKey> trusted_verifiers,
                                     std::int64_t slot_duration_seconds,
                                     std::size_t block_capacity)
    : trusted_verifiers_(std::move(trusted_verifiers)),
      slot_duration_(slot_duration_seconds),
      block_capacity_(block_capacity) {}

ConsensusError AuthorityRegistry::admit(const PublicKey& candidate, Attestation attestation,
                                        const SignatureScheme& scheme) {
  if (attestation.subject != candidate) return ConsensusError::InvalidAttestation;
  if (std::find(trusted_verifiers_.begin(), trusted_verifiers_.end(), attestation.verifier) ==
      trusted_verifiers_.end())
    return ConsensusError::InvalidAttestation;
  if (!scheme.verify(attestation.verifier, attestation.signing_payload(),
                     attestation.signature))
    return ConsensusError::InvalidAttestation;
  if (is_authority(candidate)) return ConsensusError::DuplicateAuthority;
  authorities_.push_back(AuthorityRecord{candidate, std::move(attestation)});
  return ConsensusError::None;
}

ConsensusError AuthorityRegistry::remove(const PublicKey& key, std::string reason,
                                         std::int64_t timestamp) {
  const auto it = std::find_if(authorities_.begin(), authorities_.end(),
                               [&](const AuthorityRecord& a) { return a.key == key; });
  if (it == authorities_.end()) return ConsensusError::UnknownAuthority;
  authorities_.erase(it);
  removals_.push_back(RemovalRecord{key, std::move(reason), timestamp});
  return ConsensusError::None;
}

Result<PublicKey, ConsensusError> AuthorityRegistry::scheduled_sealer(
    std::uint64_t slot) const {
  if (authorities_.empty()) return ConsensusError::EmptyRegistry;
  return authorities_[slot % authorities_.size()].key;
}

bool AuthorityRegistry::is_authority(const PublicKey& key) const {
  return std::any_of(authorities_.begin(), authorities_.end(),
                     [&](const AuthorityRecord& a) { return a.key == key; });
}

Result<Block, ConsensusError> seal(const AuthorityRegistry& registry, const Chain& chain,
                                   std::span<const TransactionRecord> pending,
                                   std::uint64_t slot, const KeyPair& sealer,
                                   const SignatureScheme& scheme) {
  const auto scheduled = registry.scheduled_sealer(slot);
  if (!scheduled.ok()) return scheduled.error();
  if (scheduled.value() != sealer.pub) return ConsensusError::NotYourSlot;
  if (pending.empty()) return ConsensusError::NothingToSeal;

  Block block;
  block.prev_header = chain.tip_digest();
  const std::size_t n = std::min(pending.size(), registry.block_capacity());
  block.transactions.assign(pending.begin(), pending.begin() + n);
  block.timestamp = std::max(registry.slot_timestamp(slot), chain.tip_timestamp());
  block.sealer = sealer.pub;
  block.seal_signature = scheme.sign(sealer.sec, hex(header_digest(block)));
  return block;
}

BlockValidation validate_block(const AuthorityRegistry& registry, const Chain& chain,
                               const Block& block, std::uint64_t slot,
                               const SignatureScheme& scheme) {
  BlockValidation result;

  const auto scheduled = registry.scheduled_sealer(slot);
  if (!scheduled.ok()) {
    result.consensus = scheduled.error();
    return result;
  }
  if (scheduled.value() != block.sealer) {
    result.consensus = ConsensusError::NotScheduled;
    return result;
  }

  if (block.transactions.empty()) {
    result.ledger = LedgerViolation::EmptyBlock;
    return result;
  }
  if (block.prev_header != chain.tip_digest()) {
    result.ledger = LedgerViolation::HashMismatch;
    return result;
  }
  if (block.timestamp < chain.tip_timestamp()) {
    result.ledger = LedgerViolation::TimestampRegression;
    return result;
  }
  if (!scheme.verify(block.sealer, hex(header_digest(block)), block.seal_signature)) {
    result.ledger = LedgerViolation::BadSealSignature;
    return result;
  }

  result.ok = true;
  return result;
}

}  // namespace healthchain
