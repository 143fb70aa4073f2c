#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "healthchain/acl.hpp"
#include "healthchain/consensus.hpp"
#include "healthchain/keys.hpp"
#include "healthchain/ledger.hpp"
#include "healthchain/result.hpp"

namespace healthchain {

enum class MemberKind { Hospital, Patient };

std::string_view to_string(MemberKind kind);
MemberKind member_kind_from_string(std::string_view name);

// Hospital or patient. Every member owns exactly one sidechain, created at
// join time; join_tx_id is the mainchain join transaction the sidechain's
// first block references (the two-way link).
struct MemberIdentity {
  std::string member_id;
  MemberKind kind = MemberKind::Patient;
  PublicKey key;
  std::string sidechain_id;
  std::string join_tx_id;
  bool active = true;
};

enum class NetworkError {
  None,
  DuplicateMember,
  UnknownMember,
  UnroutableType,
  MissingSignature,
  BadSignature,
  InactiveMember,
  DuplicateTransaction,
  StaleSlot,
  NoAuthorities,
};

std::string_view to_string(NetworkError e);

// Members a transaction involves. Which fields must be set depends on the
// transaction type (see route()).
struct Parties {
  std::optional<std::string> patient;
  std::optional<std::string> hospital;
  std::optional<std::string> hospital_peer;  // second hospital for shares
};

inline const std::string kMainchainId = "mainchain";

// The whole in-process network: mainchain, one sidechain per member, pending
// queues, the authority registry and per-patient ACL contracts. All chain
// mutation goes through submit/tick; inspectors see a consistent snapshot
// (single-threaded by design, per-chain mutation serialized by the owner).
class HealthchainNetwork {
 public:
  struct Config {
    std::int64_t slot_duration = 1;          // seconds per sealing slot
    std::size_t block_capacity = kDefaultBlockCapacity;
  };

  HealthchainNetwork(Config config, const KeyPair& notary,
                     const SignatureScheme& scheme = default_scheme());

  // --- membership -------------------------------------------------------

  static std::string join_statement(MemberKind kind, const PublicKey& key);

  // Enqueues the join_leave transaction for the mainchain, creates the empty
  // sidechain whose linkage stores the join tx id, and seeds a same-tx_id
  // copy as the sidechain's first pending transaction. The signature proves
  // possession of the member key (it signs join_statement).
  Result<std::string, NetworkError> join_member(MemberKind kind, const PublicKey& key,
                                                const Signature& possession_sig,
                                                std::int64_t timestamp);

  // Flags the member inactive and records a join_leave transaction on the
  // mainchain; the sidechain is retained read-only.
  NetworkError leave_member(const std::string& member_id, const Signature& possession_sig,
                            std::int64_t timestamp);

  static std::string leave_statement(const std::string& member_id, const PublicKey& key);

  const std::map<std::string, MemberIdentity>& members() const { return members_; }
  const MemberIdentity* find_member(const std::string& member_id) const;

  // --- consensus --------------------------------------------------------

  // Hospitals are eligible for authority admission; the network notary
  // attests their identity.
  ConsensusError admit_hospital_authority(const std::string& member_id);

  AuthorityRegistry& registry() { return registry_; }
  const AuthorityRegistry& registry() const { return registry_; }

  // Sealing keys for tick(); in this in-process prototype the network holds
  // the authority keypairs (never persisted).
  void register_sealer_keys(const KeyPair& keys);

  // --- transactions -----------------------------------------------------

  // Routing table:
  //   join_leave           -> {mainchain}
  //   discharge_summary    -> {mainchain, patient sidechain}
  //   inter_hospital_share -> {both hospitals' sidechains}
  //   record_access        -> {patient sidechain}
  //   diagnosis_or_change  -> {patient sidechain}
  //   financial            -> {patient sidechain}
  Result<std::vector<std::string>, NetworkError> route(const TransactionRecord& tx,
                                                       const Parties& parties) const;

  // Builds an unsigned record with a fresh network-unique tx_id and the
  // patient's current ACL snapshot stamped in. Callers add party signatures
  // (sign signing_payload()) before submit.
  Result<TransactionRecord, NetworkError> make_transaction(TxType type,
                                                           const Parties& parties,
                                                           const Digest& data_hash,
                                                           std::string path,
                                                           std::int64_t timestamp);

  // Appends the record to the pending queue of every routed chain under the
  // same tx_id.
  NetworkError submit(const TransactionRecord& tx, const Parties& parties);

  // One sealing slot: every chain with pending transactions gets one block
  // (up to capacity, FIFO) from the slot's scheduled sealer. Slots must not
  // go backwards. Distinct chains are independent; a single slot seals them
  // all.
  NetworkError tick(std::uint64_t slot);

  // --- patient access control -------------------------------------------

  AccessController* access_controller(const std::string& patient_id);
  const AccessController* access_controller(const std::string& patient_id) const;

  // Convenience wrappers: run the ACL operation and submit the audit
  // transaction to the patient's sidechain.
  Result<TransactionRecord, AclError> grant_access(const std::string& patient_id,
                                                   const PublicKey& provider,
                                                   const Signature& patient_sig,
                                                   std::int64_t timestamp);
  Result<TransactionRecord, AclError> revoke_access(const std::string& patient_id,
                                                    const PublicKey& provider,
                                                    const Signature& patient_sig,
                                                    std::int64_t timestamp);
  Result<AccessDecision, AclError> check_access(const std::string& patient_id,
                                                const PublicKey& accessor,
                                                const Signature& accessor_sig,
                                                const TransactionRecord& tx,
                                                std::int64_t timestamp);

  // --- inspection ---------------------------------------------------------

  const Chain& mainchain() const { return mainchain_; }
  const Chain* chain(const std::string& chain_id) const;
  const Chain* sidechain_of(const std::string& member_id) const;
  std::vector<const Chain*> all_chains() const;

  const std::deque<TransactionRecord>* pending(const std::string& chain_id) const;
  std::size_t pending_total() const;

  // Conservation counters over (tx_id, chain) pairs.
  std::uint64_t submitted_pairs() const { return submitted_pairs_; }
  std::uint64_t sealed_pairs() const { return sealed_pairs_; }
  bool conservation_holds() const {
    return submitted_pairs_ == sealed_pairs_ + pending_total();
  }

  std::string next_tx_id();

  // --- persistence --------------------------------------------------------

  // Directory layout: registry.ndjson, members.ndjson, mainchain.chain, one
  // <member_id>.chain per member. Secret keys and pending queues are not
  // persisted; drain queues before persisting. Throws IoError/CorruptRecord.
  void persist(const std::filesystem::path& dir) const;
  static HealthchainNetwork load(const std::filesystem::path& dir,
                                 const SignatureScheme& scheme = default_scheme());

 private:
  HealthchainNetwork() = default;

  std::string allocate_member_id(MemberKind kind);
  void enqueue(const std::string& chain_id, const TransactionRecord& tx);
  Chain* mutable_chain(const std::string& chain_id);
  NetworkError submit_audit(const std::string& patient_id, const TransactionRecord& audit);

  Config config_;
  const SignatureScheme* scheme_ = &default_scheme();
  KeyPair notary_;
  AuthorityRegistry registry_;

  Chain mainchain_;
  std::map<std::string, Chain> sidechains_;  // keyed by member_id
  std::map<std::string, MemberIdentity> members_;
  std::map<std::string, std::deque<TransactionRecord>> pending_;  // keyed by chain_id
  std::map<std::string, AccessController> acl_controllers_;       // keyed by patient_id
  std::map<PublicKey, SecretKey> sealer_keys_;
  std::set<std::string> seen_tx_ids_;

  std::uint64_t tx_counter_ = 0;
  std::uint64_t hospital_counter_ = 0;
  std::uint64_t patient_counter_ = 0;
  std::optional<std::uint64_t> last_slot_;

  std::uint64_t submitted_pairs_ = 0;
  std::uint64_t sealed_pairs_ = 0;
};

}  // namespace healthchain
