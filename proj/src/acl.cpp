#include "healthchain/acl.hpp"

#include <algorithm>
#include <stdexcept>

namespace healthchain {

namespace {

constexpr PublicKey kNullKey{};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

bool PatientAcl::contains(const PublicKey& key) const {
  return std::find(authorized.begin(), authorized.end(), key) != authorized.end();
}

std::string_view to_string(AclError e) {
  switch (e) {
    case AclError::None: return "ok";
    case AclError::BadSignature: return "bad_signature";
    case AclError::AlreadyAuthorized: return "already_authorized";
    case AclError::NotAuthorized: return "not_authorized";
    case AclError::WrongPatient: return "wrong_patient";
    case AclError::NullKey: return "null_key";
  }
  return "unknown";
}

AccessController::AccessController(std::string patient_id, PublicKey patient_key,
                                   const SignatureScheme& scheme)
    : patient_key_(patient_key), scheme_(&scheme) {
  acl_.patient_id = std::move(patient_id);
}

std::string AccessController::grant_statement(const PublicKey& provider) const {
  return "acl:" + acl_.patient_id + ":grant:" + provider.hex() + ":v" +
         std::to_string(acl_.version + 1);
}

std::string AccessController::revoke_statement(const PublicKey& provider) const {
  return "acl:" + acl_.patient_id + ":revoke:" + provider.hex() + ":v" +
         std::to_string(acl_.version + 1);
}

std::string AccessController::access_statement(const PublicKey& accessor,
                                               const std::string& tx_id) const {
  return "acl:" + acl_.patient_id + ":access:" + accessor.hex() + ":tx:" + tx_id;
}

std::vector<PublicKey> AccessController::snapshot() const {
  std::vector<PublicKey> keys;
  keys.reserve(acl_.authorized.size() + 1);
  keys.push_back(patient_key_);  // the owner is always authorized
  for (const auto& k : acl_.authorized) keys.push_back(k);
  return keys;
}

TransactionRecord AccessController::make_audit(const std::string& op, const PublicKey& key,
                                               const std::string& statement,
                                               const PublicKey& signer, const Signature& sig,
                                               std::string tx_id,
                                               std::int64_t timestamp) const {
  TransactionRecord tx;
  tx.tx_id = std::move(tx_id);
  tx.tx_type = TxType::RecordAccess;
  tx.data_hash = sha256(statement);
  tx.path = "acl://" + acl_.patient_id + "/" + op + "/" + key.hex();
  tx.timestamp = timestamp;
  tx.signatures.emplace_back(signer, sig);
  tx.acl = snapshot();
  return tx;
}

Result<TransactionRecord, AclError> AccessController::grant(const PublicKey& provider,
                                                            const Signature& patient_sig,
                                                            std::string audit_tx_id,
                                                            std::int64_t timestamp) {
  if (provider == kNullKey) return AclError::NullKey;
  if (!scheme_->verify(patient_key_, grant_statement(provider), patient_sig))
    return AclError::BadSignature;
  if (provider == patient_key_ || acl_.contains(provider))
    return AclError::AlreadyAuthorized;

  const std::string statement = grant_statement(provider);
  acl_.authorized.push_back(provider);
  acl_.version += 1;
  return make_audit("grant", provider, statement, patient_key_, patient_sig,
                    std::move(audit_tx_id), timestamp);
}

Result<TransactionRecord, AclError> AccessController::revoke(const PublicKey& provider,
                                                             const Signature& patient_sig,
                                                             std::string audit_tx_id,
                                                             std::int64_t timestamp) {
  if (provider == kNullKey) return AclError::NullKey;
  if (!scheme_->verify(patient_key_, revoke_statement(provider), patient_sig))
    return AclError::BadSignature;
  const auto it = std::find(acl_.authorized.begin(), acl_.authorized.end(), provider);
  if (it == acl_.authorized.end()) return AclError::NotAuthorized;

  const std::string statement = revoke_statement(provider);
  acl_.authorized.erase(it);
  acl_.version += 1;
  return make_audit("revoke", provider, statement, patient_key_, patient_sig,
                    std::move(audit_tx_id), timestamp);
}

Result<AccessDecision, AclError> AccessController::check_access(
    const PublicKey& accessor, const Signature& accessor_sig, const TransactionRecord& tx,
    std::string audit_tx_id, std::int64_t timestamp) {
  const auto owner = patient_of_path(tx.path);
  if (!owner || *owner != acl_.patient_id) return AclError::WrongPatient;
  if (!scheme_->verify(accessor, access_statement(accessor, tx.tx_id), accessor_sig))
    return AclError::BadSignature;

  AccessDecision decision;
  // The sealed snapshot decides, not the live list.
  decision.allowed = tx.acl_contains(accessor);

  if (seen_accessors_.insert(accessor).second) {
    auto audit = make_audit("access", accessor, access_statement(accessor, tx.tx_id),
                            accessor, accessor_sig, std::move(audit_tx_id), timestamp);
    audit.path += decision.allowed ? "/allowed/" : "/denied/";
    audit.path += tx.tx_id;
    decision.audit = std::move(audit);
  }
  return decision;
}

std::optional<std::string> patient_of_path(const std::string& path) {
  for (const std::string_view scheme : {"ehr://", "acl://", "member://"}) {
    if (path.rfind(scheme, 0) == 0) {
      const auto rest = path.substr(scheme.size());
      const auto slash = rest.find('/');
      const auto id = slash == std::string::npos ? rest : rest.substr(0, slash);
      if (id.empty()) return std::nullopt;
      return id;
    }
  }
  return std::nullopt;
}

AccessController rebuild_access_controller(const std::string& patient_id,
                                           const PublicKey& patient_key,
                                           const Chain& sidechain,
                                           const SignatureScheme& scheme) {
  AccessController controller(patient_id, patient_key, scheme);
  const std::string prefix = "acl://" + patient_id + "/";

  for (const auto& block : sidechain.blocks()) {
    for (const auto& tx : block.transactions) {
      if (tx.tx_type != TxType::RecordAccess) continue;
      if (tx.path.rfind(prefix, 0) != 0) continue;
      const auto parts = split(tx.path.substr(prefix.size()), '/');
      if (parts.empty() || tx.signatures.empty())
        throw std::invalid_argument("malformed acl audit record: " + tx.tx_id);
      const auto& op = parts[0];
      if (op == "grant" || op == "revoke") {
        if (parts.size() != 2) throw std::invalid_argument("malformed acl audit path");
        const auto key = PublicKey::from_hex(parts[1]);
        // Re-executing the operation re-verifies the stored patient
        // signature against the versioned statement.
        const auto& sig = tx.signatures.front().second;
        const auto result = op == "grant"
                                ? controller.grant(key, sig, tx.tx_id, tx.timestamp)
                                : controller.revoke(key, sig, tx.tx_id, tx.timestamp);
        if (!result.ok())
          throw std::invalid_argument("acl replay rejected " + op + " " + tx.tx_id + ": " +
                                      std::string(to_string(result.error())));
      } else if (op == "access") {
        if (parts.size() != 4) throw std::invalid_argument("malformed acl audit path");
        controller.seen_accessors_.insert(PublicKey::from_hex(parts[1]));
      } else {
        throw std::invalid_argument("unknown acl audit op: " + op);
      }
    }
  }
  return controller;
}

}  // namespace healthchain
