#include "healthchain/network.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace healthchain {

using nlohmann::json;

std::string_view to_string(MemberKind kind) {
  return kind == MemberKind::Hospital ? "hospital" : "patient";
}

MemberKind member_kind_from_string(std::string_view name) {
  if (name == "hospital") return MemberKind::Hospital;
  if (name == "patient") return MemberKind::Patient;
  throw std::invalid_argument("unknown member kind: " + std::string(name));
}

std::string_view to_string(NetworkError e) {
  switch (e) {
    case NetworkError::None: return "ok";
    case NetworkError::DuplicateMember: return "duplicate_member";
    case NetworkError::UnknownMember: return "unknown_member";
    case NetworkError::UnroutableType: return "unroutable_type";
    case NetworkError::MissingSignature: return "missing_signature";
    case NetworkError::BadSignature: return "bad_signature";
    case NetworkError::InactiveMember: return "inactive_member";
    case NetworkError::DuplicateTransaction: return "duplicate_transaction";
    case NetworkError::StaleSlot: return "stale_slot";
    case NetworkError::NoAuthorities: return "no_authorities";
  }
  return "unknown";
}

HealthchainNetwork::HealthchainNetwork(Config config, const KeyPair& notary,
                                       const SignatureScheme& scheme)
    : config_(config),
      scheme_(&scheme),
      notary_(notary),
      registry_({notary.pub}, config.slot_duration, config.block_capacity),
      mainchain_(kMainchainId, ChainRole{ChainRoleKind::Mainchain, ""}) {}

std::string HealthchainNetwork::join_statement(MemberKind kind, const PublicKey& key) {
  return std::string("join:") + std::string(to_string(kind)) + ":" + key.hex();
}

std::string HealthchainNetwork::leave_statement(const std::string& member_id,
                                                const PublicKey& key) {
  return "leave:" + member_id + ":" + key.hex();
}

std::string HealthchainNetwork::allocate_member_id(MemberKind kind) {
  char buf[32];
  if (kind == MemberKind::Hospital)
    std::snprintf(buf, sizeof buf, "hospital-%03llu",
                  static_cast<unsigned long long>(++hospital_counter_));
  else
    std::snprintf(buf, sizeof buf, "patient-%03llu",
                  static_cast<unsigned long long>(++patient_counter_));
  return buf;
}

std::string HealthchainNetwork::next_tx_id() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "tx-%08llu",
                static_cast<unsigned long long>(++tx_counter_));
  return buf;
}

const MemberIdentity* HealthchainNetwork::find_member(const std::string& member_id) const {
  const auto it = members_.find(member_id);
  return it == members_.end() ? nullptr : &it->second;
}

void HealthchainNetwork::enqueue(const std::string& chain_id, const TransactionRecord& tx) {
  pending_[chain_id].push_back(tx);
  ++submitted_pairs_;
}

Chain* HealthchainNetwork::mutable_chain(const std::string& chain_id) {
  if (chain_id == kMainchainId) return &mainchain_;
  for (auto& [member_id, chain] : sidechains_)
    if (chain.id() == chain_id) return &chain;
  return nullptr;
}

const Chain* HealthchainNetwork::chain(const std::string& chain_id) const {
  if (chain_id == kMainchainId) return &mainchain_;
  for (const auto& [member_id, chain] : sidechains_)
    if (chain.id() == chain_id) return &chain;
  return nullptr;
}

const Chain* HealthchainNetwork::sidechain_of(const std::string& member_id) const {
  const auto it = sidechains_.find(member_id);
  return it == sidechains_.end() ? nullptr : &it->second;
}

std::vector<const Chain*> HealthchainNetwork::all_chains() const {
  std::vector<const Chain*> chains;
  chains.push_back(&mainchain_);
  for (const auto& [member_id, chain] : sidechains_) chains.push_back(&chain);
  return chains;
}

const std::deque<TransactionRecord>* HealthchainNetwork::pending(
    const std::string& chain_id) const {
  const auto it = pending_.find(chain_id);
  return it == pending_.end() ? nullptr : &it->second;
}

std::size_t HealthchainNetwork::pending_total() const {
  std::size_t n = 0;
  for (const auto& [chain_id, queue] : pending_) n += queue.size();
  return n;
}

Result<std::string, NetworkError> HealthchainNetwork::join_member(
    MemberKind kind, const PublicKey& key, const Signature& possession_sig,
    std::int64_t timestamp) {
  for (const auto& [id, m] : members_)
    if (m.key == key) return NetworkError::DuplicateMember;
  if (!scheme_->verify(key, join_statement(kind, key), possession_sig))
    return NetworkError::BadSignature;

  MemberIdentity member;
  member.member_id = allocate_member_id(kind);
  member.kind = kind;
  member.key = key;
  member.sidechain_id = "sidechain-" + member.member_id;
  member.join_tx_id = next_tx_id();
  member.active = true;

  TransactionRecord join_tx;
  join_tx.tx_id = member.join_tx_id;
  join_tx.tx_type = TxType::JoinLeave;
  join_tx.data_hash = sha256(join_statement(kind, key));
  join_tx.path = "member://" + member.member_id + "/join";
  join_tx.timestamp = timestamp;
  join_tx.signatures.emplace_back(key, possession_sig);
  join_tx.acl = {key};

  seen_tx_ids_.insert(join_tx.tx_id);

  // The routing table sends join_leave to the mainchain; the same-tx_id
  // copy seeded below becomes the sidechain's first block, the two-way link.
  enqueue(kMainchainId, join_tx);

  const auto role_kind = kind == MemberKind::Hospital ? ChainRoleKind::HospitalSidechain
                                                      : ChainRoleKind::PatientSidechain;
  sidechains_.emplace(member.member_id,
                      Chain(member.sidechain_id, ChainRole{role_kind, member.member_id},
                            member.join_tx_id));
  enqueue(member.sidechain_id, join_tx);

  if (kind == MemberKind::Patient)
    acl_controllers_.emplace(member.member_id,
                             AccessController(member.member_id, key, *scheme_));

  const std::string member_id = member.member_id;
  members_.emplace(member_id, std::move(member));
  return member_id;
}

NetworkError HealthchainNetwork::leave_member(const std::string& member_id,
                                              const Signature& possession_sig,
                                              std::int64_t timestamp) {
  const auto it = members_.find(member_id);
  if (it == members_.end()) return NetworkError::UnknownMember;
  MemberIdentity& member = it->second;
  if (!member.active) return NetworkError::InactiveMember;
  if (!scheme_->verify(member.key, leave_statement(member_id, member.key), possession_sig))
    return NetworkError::BadSignature;

  TransactionRecord leave_tx;
  leave_tx.tx_id = next_tx_id();
  leave_tx.tx_type = TxType::JoinLeave;
  leave_tx.data_hash = sha256(leave_statement(member_id, member.key));
  leave_tx.path = "member://" + member_id + "/leave";
  leave_tx.timestamp = timestamp;
  leave_tx.signatures.emplace_back(member.key, possession_sig);
  leave_tx.acl = {member.key};

  seen_tx_ids_.insert(leave_tx.tx_id);
  enqueue(kMainchainId, leave_tx);
  member.active = false;
  return NetworkError::None;
}

ConsensusError HealthchainNetwork::admit_hospital_authority(const std::string& member_id) {
  const auto* member = find_member(member_id);
  if (member == nullptr || member->kind != MemberKind::Hospital || !member->active)
    return ConsensusError::InvalidAttestation;
  auto attestation = make_attestation(
      member->key, "notarized consortium hospital " + member_id, notary_, *scheme_);
  return registry_.admit(member->key, std::move(attestation), *scheme_);
}

void HealthchainNetwork::register_sealer_keys(const KeyPair& keys) {
  sealer_keys_[keys.pub] = keys.sec;
}

namespace {

struct ResolvedParty {
  const MemberIdentity* member = nullptr;
  NetworkError error = NetworkError::None;
};

ResolvedParty resolve(const std::map<std::string, MemberIdentity>& members,
                      const std::optional<std::string>& id, MemberKind expected) {
  if (!id) return {nullptr, NetworkError::UnroutableType};
  const auto it = members.find(*id);
  if (it == members.end()) return {nullptr, NetworkError::UnknownMember};
  if (!it->second.active) return {nullptr, NetworkError::InactiveMember};
  if (it->second.kind != expected) return {nullptr, NetworkError::UnroutableType};
  return {&it->second, NetworkError::None};
}

}  // namespace

Result<std::vector<std::string>, NetworkError> HealthchainNetwork::route(
    const TransactionRecord& tx, const Parties& parties) const {
  const auto patient = [&] { return resolve(members_, parties.patient, MemberKind::Patient); };
  const auto hospital = [&] { return resolve(members_, parties.hospital, MemberKind::Hospital); };
  const auto peer = [&] { return resolve(members_, parties.hospital_peer, MemberKind::Hospital); };

  switch (tx.tx_type) {
    case TxType::JoinLeave: {
      // One named member, hospital or patient.
      if (parties.patient && !parties.hospital) {
        if (const auto p = patient(); p.error != NetworkError::None) return p.error;
      } else if (parties.hospital && !parties.patient) {
        if (const auto h = hospital(); h.error != NetworkError::None) return h.error;
      } else {
        return NetworkError::UnroutableType;
      }
      return std::vector<std::string>{kMainchainId};
    }
    case TxType::DischargeSummary: {
      const auto h = hospital();
      if (h.error != NetworkError::None) return h.error;
      const auto p = patient();
      if (p.error != NetworkError::None) return p.error;
      return std::vector<std::string>{kMainchainId, p.member->sidechain_id};
    }
    case TxType::InterHospitalShare: {
      const auto h = hospital();
      if (h.error != NetworkError::None) return h.error;
      const auto h2 = peer();
      if (h2.error != NetworkError::None) return h2.error;
      if (h.member->member_id == h2.member->member_id) return NetworkError::UnroutableType;
      // Both systems keep an audit copy.
      return std::vector<std::string>{h.member->sidechain_id, h2.member->sidechain_id};
    }
    case TxType::RecordAccess: {
      const auto p = patient();
      if (p.error != NetworkError::None) return p.error;
      return std::vector<std::string>{p.member->sidechain_id};
    }
    case TxType::DiagnosisOrChange:
    case TxType::Financial: {
      const auto h = hospital();
      if (h.error != NetworkError::None) return h.error;
      const auto p = patient();
      if (p.error != NetworkError::None) return p.error;
      return std::vector<std::string>{p.member->sidechain_id};
    }
  }
  return NetworkError::UnroutableType;
}

Result<TransactionRecord, NetworkError> HealthchainNetwork::make_transaction(
    TxType type, const Parties& parties, const Digest& data_hash, std::string path,
    std::int64_t timestamp) {
  TransactionRecord tx;
  tx.tx_type = type;
  const auto routes = route(tx, parties);
  if (!routes.ok()) return routes.error();

  tx.data_hash = data_hash;
  tx.path = std::move(path);
  tx.timestamp = timestamp;

  // The permitted-key snapshot. Patient records carry exactly the
  // patient-level list at submission time; being a named party grants
  // nothing by itself.
  if (parties.patient) {
    const auto it = acl_controllers_.find(*parties.patient);
    tx.acl = it != acl_controllers_.end()
                 ? it->second.snapshot()
                 : std::vector<PublicKey>{members_.at(*parties.patient).key};
  } else if (type == TxType::InterHospitalShare) {
    tx.acl = {members_.at(*parties.hospital).key,
              members_.at(*parties.hospital_peer).key};
  } else if (parties.hospital) {
    tx.acl = {members_.at(*parties.hospital).key};
  }

  tx.tx_id = next_tx_id();
  return tx;
}

NetworkError HealthchainNetwork::submit(const TransactionRecord& tx, const Parties& parties) {
  const auto routes = route(tx, parties);
  if (!routes.ok()) return routes.error();
  if (tx.signatures.empty()) return NetworkError::MissingSignature;
  if (seen_tx_ids_.contains(tx.tx_id)) return NetworkError::DuplicateTransaction;

  seen_tx_ids_.insert(tx.tx_id);
  for (const auto& chain_id : routes.value()) enqueue(chain_id, tx);
  return NetworkError::None;
}

NetworkError HealthchainNetwork::tick(std::uint64_t slot) {
  if (last_slot_ && slot < *last_slot_) return NetworkError::StaleSlot;
  last_slot_ = slot;

  const auto scheduled = registry_.scheduled_sealer(slot);
  if (!scheduled.ok()) return NetworkError::NoAuthorities;
  const auto key_it = sealer_keys_.find(scheduled.value());
  if (key_it == sealer_keys_.end())
    throw std::logic_error("no sealing key registered for scheduled authority");
  const KeyPair sealer{key_it->first, key_it->second};

  // One block per chain with pending work; distinct chains are
  // non-competing, so a single slot seals them all. Mainchain first, then
  // sidechains in member order.
  std::vector<std::string> chain_ids{kMainchainId};
  for (const auto& [member_id, chain] : sidechains_) chain_ids.push_back(chain.id());

  for (const auto& chain_id : chain_ids) {
    auto queue_it = pending_.find(chain_id);
    if (queue_it == pending_.end() || queue_it->second.empty()) continue;
    auto& queue = queue_it->second;

    const std::size_t n = std::min(queue.size(), registry_.block_capacity());
    std::vector<TransactionRecord> batch(queue.begin(), queue.begin() + n);

    Chain* chain = mutable_chain(chain_id);
    auto block = seal(registry_, *chain, batch, slot, sealer, *scheme_);
    if (!block.ok())
      throw std::logic_error("seal failed: " + std::string(to_string(block.error())));
    if (const auto v = chain->append(block.take()); v != LedgerViolation::None)
      throw std::logic_error("append failed: " + std::string(to_string(v)));

    queue.erase(queue.begin(), queue.begin() + n);
    sealed_pairs_ += n;
  }
  return NetworkError::None;
}

AccessController* HealthchainNetwork::access_controller(const std::string& patient_id) {
  const auto it = acl_controllers_.find(patient_id);
  return it == acl_controllers_.end() ? nullptr : &it->second;
}

const AccessController* HealthchainNetwork::access_controller(
    const std::string& patient_id) const {
  const auto it = acl_controllers_.find(patient_id);
  return it == acl_controllers_.end() ? nullptr : &it->second;
}

NetworkError HealthchainNetwork::submit_audit(const std::string& patient_id,
                                              const TransactionRecord& audit) {
  Parties parties;
  parties.patient = patient_id;
  return submit(audit, parties);
}

Result<TransactionRecord, AclError> HealthchainNetwork::grant_access(
    const std::string& patient_id, const PublicKey& provider, const Signature& patient_sig,
    std::int64_t timestamp) {
  auto* controller = access_controller(patient_id);
  const auto* member = find_member(patient_id);
  if (controller == nullptr || member == nullptr || !member->active)
    return AclError::WrongPatient;

  auto result = controller->grant(provider, patient_sig, next_tx_id(), timestamp);
  if (!result.ok()) return result;
  if (const auto err = submit_audit(patient_id, result.value()); err != NetworkError::None)
    throw std::logic_error("audit submit failed: " + std::string(to_string(err)));
  return result;
}

Result<TransactionRecord, AclError> HealthchainNetwork::revoke_access(
    const std::string& patient_id, const PublicKey& provider, const Signature& patient_sig,
    std::int64_t timestamp) {
  auto* controller = access_controller(patient_id);
  const auto* member = find_member(patient_id);
  if (controller == nullptr || member == nullptr || !member->active)
    return AclError::WrongPatient;

  auto result = controller->revoke(provider, patient_sig, next_tx_id(), timestamp);
  if (!result.ok()) return result;
  if (const auto err = submit_audit(patient_id, result.value()); err != NetworkError::None)
    throw std::logic_error("audit submit failed: " + std::string(to_string(err)));
  return result;
}

Result<AccessDecision, AclError> HealthchainNetwork::check_access(
    const std::string& patient_id, const PublicKey& accessor, const Signature& accessor_sig,
    const TransactionRecord& tx, std::int64_t timestamp) {
  auto* controller = access_controller(patient_id);
  const auto* member = find_member(patient_id);
  if (controller == nullptr || member == nullptr || !member->active)
    return AclError::WrongPatient;

  auto result = controller->check_access(accessor, accessor_sig, tx, next_tx_id(), timestamp);
  if (!result.ok()) return result;
  if (result.value().audit) {
    if (const auto err = submit_audit(patient_id, *result.value().audit);
        err != NetworkError::None)
      throw std::logic_error("audit submit failed: " + std::string(to_string(err)));
  }
  return result;
}

// --- persistence ----------------------------------------------------------

namespace {

json attestation_to_json(const Attestation& a) {
  return json{{"signature", a.signature.hex()},
              {"statement", a.statement},
              {"subject", a.subject.hex()},
              {"verifier", a.verifier.hex()}};
}

Attestation attestation_from_json(const json& j) {
  Attestation a;
  a.subject = PublicKey::from_hex(j.at("subject").get<std::string>());
  a.verifier = PublicKey::from_hex(j.at("verifier").get<std::string>());
  a.statement = j.at("statement").get<std::string>();
  a.signature = Signature::from_hex(j.at("signature").get<std::string>());
  return a;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

json parse_record(const std::filesystem::path& path, std::size_t line_no,
                  const std::string& line) {
  try {
    return json::parse(line);
  } catch (const std::exception& e) {
    throw CorruptRecord(path.filename().string(), line_no, e.what());
  }
}

}  // namespace

void HealthchainNetwork::persist(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  {
    std::ofstream out(dir / "registry.ndjson", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write registry file");
    out << json{{"block_capacity", registry_.block_capacity()},
                {"format_version", 1},
                {"notary", notary_.pub.hex()},
                {"record", "registry_header"},
                {"slot_duration", registry_.slot_duration()}}
               .dump()
        << '\n';
    for (const auto& v : registry_.trusted_verifiers())
      out << json{{"key", v.hex()}, {"record", "verifier"}}.dump() << '\n';
    for (const auto& a : registry_.authorities())
      out << json{{"attestation", attestation_to_json(a.attestation)},
                  {"key", a.key.hex()},
                  {"record", "authority"}}
                 .dump()
          << '\n';
    for (const auto& r : registry_.removals())
      out << json{{"key", r.key.hex()},
                  {"reason", r.reason},
                  {"record", "removal"},
                  {"timestamp", r.timestamp}}
                 .dump()
          << '\n';
    if (!out.flush()) throw IoError("write failed: registry file");
  }

  {
    std::ofstream out(dir / "members.ndjson", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write members file");
    out << json{{"format_version", 1},
                {"hospital_counter", hospital_counter_},
                {"patient_counter", patient_counter_},
                {"record", "members_header"},
                {"tx_counter", tx_counter_}}
               .dump()
        << '\n';
    for (const auto& [id, m] : members_)
      out << json{{"active", m.active},
                  {"join_tx_id", m.join_tx_id},
                  {"key", m.key.hex()},
                  {"kind", std::string(to_string(m.kind))},
                  {"member_id", m.member_id},
                  {"record", "member"},
                  {"sidechain_id", m.sidechain_id}}
                 .dump()
          << '\n';
    if (!out.flush()) throw IoError("write failed: members file");
  }

  write_chain_file(mainchain_, dir / "mainchain.chain");
  for (const auto& [member_id, chain] : sidechains_)
    write_chain_file(chain, dir / (member_id + ".chain"));
}

HealthchainNetwork HealthchainNetwork::load(const std::filesystem::path& dir,
                                            const SignatureScheme& scheme) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("not a directory: " + dir.string());

  HealthchainNetwork net;
  net.scheme_ = &scheme;
  net.mainchain_ = Chain(kMainchainId, ChainRole{ChainRoleKind::Mainchain, ""});

  const auto registry_path = dir / "registry.ndjson";
  const auto members_path = dir / "members.ndjson";

  // Empty directory loads as an empty network.
  if (!std::filesystem::exists(registry_path) && !std::filesystem::exists(members_path)) {
    net.registry_ = AuthorityRegistry({}, net.config_.slot_duration,
                                      net.config_.block_capacity);
    return net;
  }

  {
    const auto lines = read_lines(registry_path);
    std::vector<PublicKey> verifiers;
    std::vector<std::pair<PublicKey, Attestation>> authorities;
    std::vector<RemovalRecord> removals;
    std::int64_t slot_duration = 1;
    std::size_t block_capacity = kDefaultBlockCapacity;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const json j = parse_record(registry_path, i + 1, lines[i]);
      try {
        const auto record = j.at("record").get<std::string>();
        if (record == "registry_header") {
          slot_duration = j.at("slot_duration").get<std::int64_t>();
          block_capacity = j.at("block_capacity").get<std::size_t>();
          net.notary_.pub = PublicKey::from_hex(j.at("notary").get<std::string>());
        } else if (record == "verifier") {
          verifiers.push_back(PublicKey::from_hex(j.at("key").get<std::string>()));
        } else if (record == "authority") {
          authorities.emplace_back(PublicKey::from_hex(j.at("key").get<std::string>()),
                                   attestation_from_json(j.at("attestation")));
        } else if (record == "removal") {
          removals.push_back(RemovalRecord{
              PublicKey::from_hex(j.at("key").get<std::string>()),
              j.at("reason").get<std::string>(), j.at("timestamp").get<std::int64_t>()});
        } else {
          throw std::invalid_argument("unknown registry record: " + record);
        }
      } catch (const std::exception& e) {
        throw CorruptRecord(registry_path.filename().string(), i + 1, e.what());
      }
    }
    net.config_.slot_duration = slot_duration;
    net.config_.block_capacity = block_capacity;
    net.registry_ = AuthorityRegistry(std::move(verifiers), slot_duration, block_capacity);
    // Re-admitting re-verifies every stored attestation.
    for (auto& [key, attestation] : authorities) {
      if (net.registry_.admit(key, std::move(attestation), scheme) != ConsensusError::None)
        throw CorruptRecord(registry_path.filename().string(), 0,
                            "stored attestation failed verification for " + key.hex());
    }
    net.registry_.restore_removals(std::move(removals));
  }

  {
    const auto lines = read_lines(members_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const json j = parse_record(members_path, i + 1, lines[i]);
      try {
        const auto record = j.at("record").get<std::string>();
        if (record == "members_header") {
          net.tx_counter_ = j.at("tx_counter").get<std::uint64_t>();
          net.hospital_counter_ = j.at("hospital_counter").get<std::uint64_t>();
          net.patient_counter_ = j.at("patient_counter").get<std::uint64_t>();
        } else if (record == "member") {
          MemberIdentity m;
          m.member_id = j.at("member_id").get<std::string>();
          m.kind = member_kind_from_string(j.at("kind").get<std::string>());
          m.key = PublicKey::from_hex(j.at("key").get<std::string>());
          m.sidechain_id = j.at("sidechain_id").get<std::string>();
          m.join_tx_id = j.at("join_tx_id").get<std::string>();
          m.active = j.at("active").get<bool>();
          net.members_.emplace(m.member_id, std::move(m));
        } else {
          throw std::invalid_argument("unknown members record: " + record);
        }
      } catch (const std::exception& e) {
        throw CorruptRecord(members_path.filename().string(), i + 1, e.what());
      }
    }
  }

  net.mainchain_ = read_chain_file(dir / "mainchain.chain");
  for (const auto& [id, m] : net.members_) {
    auto chain = read_chain_file(dir / (m.member_id + ".chain"));
    net.sidechains_.emplace(m.member_id, std::move(chain));
  }

  // Rebuild derived state from the chains themselves: tx ids, conservation
  // counters, and the per-patient ACL contracts (replayed, which re-verifies
  // every stored grant/revoke signature).
  for (const auto* chain : net.all_chains()) {
    for (const auto& block : chain->blocks()) {
      for (const auto& tx : block.transactions) net.seen_tx_ids_.insert(tx.tx_id);
      net.sealed_pairs_ += block.transactions.size();
    }
  }
  net.submitted_pairs_ = net.sealed_pairs_;

  for (const auto& [id, m] : net.members_) {
    if (m.kind != MemberKind::Patient) continue;
    net.acl_controllers_.emplace(
        id, rebuild_access_controller(id, m.key, net.sidechains_.at(id), scheme));
  }
  return net;
}

}  // namespace healthchain
