#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "healthchain/keys.hpp"
#include "healthchain/ledger.hpp"
#include "healthchain/result.hpp"

namespace healthchain {

// Patient-level authorized provider list. version increases by one on every
// successful grant or revoke.
struct PatientAcl {
  std::string patient_id;
  std::vector<PublicKey> authorized;  // grant order, no duplicates
  std::uint64_t version = 0;

  bool contains(const PublicKey& key) const;
};

enum class AclError {
  None,
  BadSignature,
  AlreadyAuthorized,
  NotAuthorized,
  WrongPatient,
  NullKey,
};

std::string_view to_string(AclError e);

struct AccessDecision {
  bool allowed = false;
  // Present on the first check by a given accessor key: the audit record for
  // the patient's sidechain.
  std::optional<TransactionRecord> audit;
};

// The smart-contract-like ACL state machine for one patient. Every state
// change and every first access by a new entity yields a record_access audit
// transaction; the sidechain is the authoritative store, and the full state
// is reconstructible by replay (rebuild_access_controller below).
//
// Mutations for one patient are serialized by the owner; checks are
// read-only.
class AccessController {
 public:
  AccessController() = default;
  AccessController(std::string patient_id, PublicKey patient_key,
                   const SignatureScheme& scheme = default_scheme());

  const PatientAcl& acl() const { return acl_; }
  const std::string& patient_id() const { return acl_.patient_id; }
  const PublicKey& patient_key() const { return patient_key_; }
  const std::set<PublicKey>& seen_accessors() const { return seen_accessors_; }

  // Statements the patient (or accessor) signs. Grant/revoke statements are
  // versioned, so a signature authorizes exactly one state transition.
  std::string grant_statement(const PublicKey& provider) const;
  std::string revoke_statement(const PublicKey& provider) const;
  std::string access_statement(const PublicKey& accessor, const std::string& tx_id) const;

  // On success the provider list and version change and the returned audit
  // transaction (signed with the supplied patient signature) must be
  // submitted to the patient's sidechain.
  Result<TransactionRecord, AclError> grant(const PublicKey& provider,
                                            const Signature& patient_sig,
                                            std::string audit_tx_id,
                                            std::int64_t timestamp);
  Result<TransactionRecord, AclError> revoke(const PublicKey& provider,
                                             const Signature& patient_sig,
                                             std::string audit_tx_id,
                                             std::int64_t timestamp);

  // Decides against the acl snapshot sealed into `tx`, not the live list: a
  // key granted after sealing stays denied for that record. The accessor
  // signature signs the access statement and is embedded in the audit
  // transaction emitted on an accessor's first check for this patient.
  Result<AccessDecision, AclError> check_access(const PublicKey& accessor,
                                                const Signature& accessor_sig,
                                                const TransactionRecord& tx,
                                                std::string audit_tx_id,
                                                std::int64_t timestamp);

  // Current permitted-key snapshot stamped into new transactions: the
  // patient's own key first, then the authorized providers in grant order.
  std::vector<PublicKey> snapshot() const;

 private:
  friend AccessController rebuild_access_controller(const std::string&, const PublicKey&,
                                                    const Chain&, const SignatureScheme&);

  TransactionRecord make_audit(const std::string& op, const PublicKey& key,
                               const std::string& statement, const PublicKey& signer,
                               const Signature& sig, std::string tx_id,
                               std::int64_t timestamp) const;

  PatientAcl acl_;
  PublicKey patient_key_;
  std::set<PublicKey> seen_accessors_;
  const SignatureScheme* scheme_ = &default_scheme();
};

// Patient id an on-chain record belongs to, parsed from its path
// ("ehr://<patient>/..." or "acl://<patient>/...").
std::optional<std::string> patient_of_path(const std::string& path);

// Replays a patient sidechain's record_access audits into a fresh
// controller. No separate store is authoritative.
AccessController rebuild_access_controller(const std::string& patient_id,
                                           const PublicKey& patient_key,
                                           const Chain& sidechain,
                                           const SignatureScheme& scheme = default_scheme());

}  // namespace healthchain
