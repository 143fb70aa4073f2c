#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "healthchain/keys.hpp"
#include "healthchain/ledger.hpp"
#include "healthchain/result.hpp"

namespace healthchain {

// Identity attestation: a trusted verifier (notary) vouches for a candidate
// authority. The statement is plain text; the signature covers the canonical
// (subject, verifier, statement) tuple.
struct Attestation {
  PublicKey subject;
  PublicKey verifier;
  std::string statement;
  Signature signature;

  std::string signing_payload() const;
};

Attestation make_attestation(const PublicKey& subject, std::string statement,
                             const KeyPair& verifier,
                             const SignatureScheme& scheme = default_scheme());

struct AuthorityRecord {
  PublicKey key;
  Attestation attestation;
};

// Removal is a registry edit with an audit record, not a voting protocol.
struct RemovalRecord {
  PublicKey key;
  std::string reason;
  std::int64_t timestamp = 0;
};

enum class ConsensusError {
  None,
  InvalidAttestation,
  DuplicateAuthority,
  EmptyRegistry,
  NotYourSlot,
  NothingToSeal,
  NotScheduled,
  UnknownAuthority,
};

std::string_view to_string(ConsensusError e);

inline constexpr std::size_t kDefaultBlockCapacity = 256;

// Ordered authority list; admission order defines the round-robin rotation.
// Read-mostly: admission/removal are rare registry edits, scheduling is pure.
class AuthorityRegistry {
 public:
  AuthorityRegistry() = default;
  explicit AuthorityRegistry(std::vector<PublicKey> trusted_verifiers,
                             std::int64_t slot_duration_seconds = 1,
                             std::size_t block_capacity = kDefaultBlockCapacity);

  ConsensusError admit(const PublicKey& candidate, Attestation attestation,
                       const SignatureScheme& scheme = default_scheme());
  ConsensusError remove(const PublicKey& key, std::string reason, std::int64_t timestamp);

  // Load path: reinstates the audit trail of past removals.
  void restore_removals(std::vector<RemovalRecord> removals) {
    removals_ = std::move(removals);
  }

  // authorities()[slot mod n]; EmptyRegistry when no authority is admitted.
  Result<PublicKey, ConsensusError> scheduled_sealer(std::uint64_t slot) const;

  bool is_authority(const PublicKey& key) const;
  const std::vector<AuthorityRecord>& authorities() const { return authorities_; }
  const std::vector<RemovalRecord>& removals() const { return removals_; }
  const std::vector<PublicKey>& trusted_verifiers() const { return trusted_verifiers_; }
  std::size_t size() const { return authorities_.size(); }

  std::int64_t slot_duration() const { return slot_duration_; }
  std::size_t block_capacity() const { return block_capacity_; }

  // Logical slot -> simulated timestamp.
  std::int64_t slot_timestamp(std::uint64_t slot) const {
    return static_cast<std::int64_t>(slot) * slot_duration_;
  }

 private:
  std::vector<PublicKey> trusted_verifiers_;
  std::vector<AuthorityRecord> authorities_;
  std::vector<RemovalRecord> removals_;
  std::int64_t slot_duration_ = 1;
  std::size_t block_capacity_ = kDefaultBlockCapacity;
};

// Produces the block for `slot`: up to block_capacity pending transactions in
// arrival order, timestamped from the slot clock, sealed under the sealer's
// key. The sealer must be the one the rotation schedules for the slot.
Result<Block, ConsensusError> seal(const AuthorityRegistry& registry, const Chain& chain,
                                   std::span<const TransactionRecord> pending,
                                   std::uint64_t slot, const KeyPair& sealer,
                                   const SignatureScheme& scheme = default_scheme());

struct BlockValidation {
  bool ok = false;
  ConsensusError consensus = ConsensusError::None;
  LedgerViolation ledger = LedgerViolation::None;
};

// Accepts exactly the blocks seal() produces under the scheduled key:
// scheduled sealer, valid seal signature, and ledger append preconditions.
BlockValidation validate_block(const AuthorityRegistry& registry, const Chain& chain,
                               const Block& block, std::uint64_t slot,
                               const SignatureScheme& scheme = default_scheme());

}  // namespace healthchain
