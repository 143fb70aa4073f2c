#include "healthchain/demo.hpp"

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace healthchain {

namespace {

struct DemoMember {
  std::string id;
  KeyPair keys;
};

const char* yesno(bool b) { return b ? "yes" : "no"; }

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

// A random already-sealed transaction of the patient's sidechain, if any.
const TransactionRecord* pick_sealed_tx(std::mt19937_64& rng, const Chain* sidechain) {
  if (sidechain == nullptr || sidechain->empty()) return nullptr;
  const auto& blocks = sidechain->blocks();
  const auto& block = blocks[pick(rng, blocks.size())];
  return &block.transactions[pick(rng, block.transactions.size())];
}

}  // namespace

DemoReport run_demo(const DemoConfig& config, const SignatureScheme& scheme) {
  if (config.hospitals < 1) throw std::invalid_argument("demo needs at least one hospital");
  if (config.patients < 1) throw std::invalid_argument("demo needs at least one patient");

  std::mt19937_64 rng(config.seed);
  const KeyPair notary = keypair_from_rng(rng, scheme);
  HealthchainNetwork net(HealthchainNetwork::Config{}, notary, scheme);

  std::uint64_t slot = 0;

  // Join phase. Hospitals become sealing authorities.
  std::vector<DemoMember> hospitals;
  std::vector<DemoMember> patients;
  for (std::uint64_t i = 0; i < config.hospitals; ++i) {
    const KeyPair keys = keypair_from_rng(rng, scheme);
    const auto sig = scheme.sign(
        keys.sec, HealthchainNetwork::join_statement(MemberKind::Hospital, keys.pub));
    auto joined = net.join_member(MemberKind::Hospital, keys.pub, sig, 0);
    if (!joined.ok()) throw std::logic_error("hospital join failed");
    if (net.admit_hospital_authority(joined.value()) != ConsensusError::None)
      throw std::logic_error("authority admission failed");
    net.register_sealer_keys(keys);
    hospitals.push_back({joined.take(), keys});
  }
  for (std::uint64_t i = 0; i < config.patients; ++i) {
    const KeyPair keys = keypair_from_rng(rng, scheme);
    const auto sig = scheme.sign(
        keys.sec, HealthchainNetwork::join_statement(MemberKind::Patient, keys.pub));
    auto joined = net.join_member(MemberKind::Patient, keys.pub, sig, 0);
    if (!joined.ok()) throw std::logic_error("patient join failed");
    patients.push_back({joined.take(), keys});
  }
  net.tick(slot);  // seals the join transactions everywhere

  bool conservation_ok = net.conservation_holds();

  // Event phase: one submitted record per iteration.
  std::uint64_t submitted = 0;
  std::uint64_t payload_counter = 0;
  while (submitted < config.transactions) {
    const std::int64_t now = static_cast<std::int64_t>(slot) + 1;
    const std::uint64_t roll = rng() % 100;
    const DemoMember& hospital = hospitals[pick(rng, hospitals.size())];
    const DemoMember& patient = patients[pick(rng, patients.size())];

    enum class Event { Discharge, Diagnosis, Financial, Share, Grant, Revoke, Access };
    Event event = Event::Diagnosis;
    if (roll < 30) event = Event::Discharge;
    else if (roll < 55) event = Event::Diagnosis;
    else if (roll < 70) event = Event::Financial;
    else if (roll < 80) event = Event::Share;
    else if (roll < 88) event = Event::Grant;
    else if (roll < 92) event = Event::Revoke;
    else event = Event::Access;

    // Deterministic fallbacks keep every iteration productive.
    if (event == Event::Share && hospitals.size() < 2) event = Event::Diagnosis;

    const auto* controller = net.access_controller(patient.id);
    if (event == Event::Grant && controller->acl().contains(hospital.keys.pub))
      event = Event::Revoke;
    if (event == Event::Revoke && controller->acl().authorized.empty())
      event = Event::Diagnosis;
    if (event == Event::Access && controller->seen_accessors().contains(hospital.keys.pub))
      event = Event::Diagnosis;
    if (event == Event::Access && pick_sealed_tx(rng, net.sidechain_of(patient.id)) == nullptr)
      event = Event::Diagnosis;

    switch (event) {
      case Event::Discharge:
      case Event::Diagnosis:
      case Event::Financial: {
        const TxType type = event == Event::Discharge  ? TxType::DischargeSummary
                            : event == Event::Diagnosis ? TxType::DiagnosisOrChange
                                                        : TxType::Financial;
        const std::string kind = event == Event::Discharge  ? "discharge"
                                 : event == Event::Diagnosis ? "diagnosis"
                                                             : "billing";
        Parties parties;
        parties.hospital = hospital.id;
        parties.patient = patient.id;
        const std::string payload =
            kind + ":" + patient.id + ":" + std::to_string(++payload_counter);
        auto tx = net.make_transaction(
            type, parties, sha256(payload),
            "ehr://" + patient.id + "/" + kind + "/" + std::to_string(payload_counter), now);
        if (!tx.ok()) throw std::logic_error("make_transaction failed");
        auto record = tx.take();
        const auto body = record.signing_payload();
        record.signatures.emplace_back(hospital.keys.pub, scheme.sign(hospital.keys.sec, body));
        record.signatures.emplace_back(patient.keys.pub, scheme.sign(patient.keys.sec, body));
        if (net.submit(record, parties) != NetworkError::None)
          throw std::logic_error("submit failed");
        ++submitted;
        break;
      }
      case Event::Share: {
        const DemoMember* peer = &hospitals[pick(rng, hospitals.size())];
        while (peer->id == hospital.id) peer = &hospitals[pick(rng, hospitals.size())];
        Parties parties;
        parties.hospital = hospital.id;
        parties.hospital_peer = peer->id;
        const std::string payload =
            "share:" + hospital.id + ":" + peer->id + ":" + std::to_string(++payload_counter);
        auto tx = net.make_transaction(
            TxType::InterHospitalShare, parties, sha256(payload),
            "share://" + hospital.id + "/" + peer->id + "/" + std::to_string(payload_counter),
            now);
        if (!tx.ok()) throw std::logic_error("make_transaction failed");
        auto record = tx.take();
        const auto body = record.signing_payload();
        record.signatures.emplace_back(hospital.keys.pub, scheme.sign(hospital.keys.sec, body));
        record.signatures.emplace_back(peer->keys.pub, scheme.sign(peer->keys.sec, body));
        if (net.submit(record, parties) != NetworkError::None)
          throw std::logic_error("submit failed");
        ++submitted;
        break;
      }
      case Event::Grant: {
        const auto statement = controller->grant_statement(hospital.keys.pub);
        const auto sig = scheme.sign(patient.keys.sec, statement);
        if (!net.grant_access(patient.id, hospital.keys.pub, sig, now).ok())
          throw std::logic_error("grant failed");
        ++submitted;
        break;
      }
      case Event::Revoke: {
        const auto& authorized = controller->acl().authorized;
        const PublicKey target = authorized[pick(rng, authorized.size())];
        const auto statement = controller->revoke_statement(target);
        const auto sig = scheme.sign(patient.keys.sec, statement);
        if (!net.revoke_access(patient.id, target, sig, now).ok())
          throw std::logic_error("revoke failed");
        ++submitted;
        break;
      }
      case Event::Access: {
        const auto* target = pick_sealed_tx(rng, net.sidechain_of(patient.id));
        const auto statement = controller->access_statement(hospital.keys.pub, target->tx_id);
        const auto sig = scheme.sign(hospital.keys.sec, statement);
        const auto decision =
            net.check_access(patient.id, hospital.keys.pub, sig, *target, now);
        if (!decision.ok()) throw std::logic_error("check_access failed");
        if (!decision.value().audit) throw std::logic_error("expected first-access audit");
        ++submitted;
        break;
      }
    }

    if (submitted % 16 == 0) {
      net.tick(++slot);
      conservation_ok = conservation_ok && net.conservation_holds();
    }
  }

  // Drain every queue.
  while (net.pending_total() > 0) {
    net.tick(++slot);
    conservation_ok = conservation_ok && net.conservation_holds();
  }

  DemoReport report;
  report.conservation_ok = conservation_ok;
  report.queues_drained = net.pending_total() == 0;
  report.slots_used = slot + 1;
  report.submitted_records = submitted;
  report.sealed_pairs = net.sealed_pairs();

  // Chain integrity.
  std::size_t verified = 0;
  const auto chains = net.all_chains();
  for (const auto* chain : chains)
    if (verify_chain(*chain, scheme).ok) ++verified;
  report.chains_verify = verified == chains.size();

  // Anchoring: discharge summaries appear on the mainchain iff they appear
  // on a patient sidechain, under the same tx_id.
  std::set<std::string> main_discharges;
  for (const auto& block : net.mainchain().blocks())
    for (const auto& tx : block.transactions)
      if (tx.tx_type == TxType::DischargeSummary) main_discharges.insert(tx.tx_id);
  std::set<std::string> side_discharges;
  for (const auto& [id, member] : net.members()) {
    if (member.kind != MemberKind::Patient) continue;
    for (const auto& block : net.sidechain_of(id)->blocks())
      for (const auto& tx : block.transactions)
        if (tx.tx_type == TxType::DischargeSummary) side_discharges.insert(tx.tx_id);
  }
  report.anchoring_ok = main_discharges == side_discharges;

  // Sidechain purity: every sealed record names the owner, via signature or
  // ACL snapshot.
  bool purity = true;
  for (const auto& [id, member] : net.members()) {
    const auto* chain = net.sidechain_of(id);
    for (const auto& block : chain->blocks())
      for (const auto& tx : block.transactions)
        if (!tx.signed_by(member.key) && !tx.acl_contains(member.key)) purity = false;
  }
  report.purity_ok = purity;

  // Member/sidechain bijection.
  bool bijection = net.members().size() + 1 == chains.size();
  for (const auto& [id, member] : net.members()) {
    const auto* chain = net.sidechain_of(id);
    if (chain == nullptr || chain->role().owner != id) bijection = false;
  }
  report.bijection_ok = bijection;

  report.ok = report.queues_drained && report.chains_verify && report.anchoring_ok &&
              report.purity_ok && report.conservation_ok && report.bijection_ok;

  std::ostringstream out;
  out << "healthchain demo\n"
      << "  hospitals: " << config.hospitals << "  patients: " << config.patients
      << "  transactions: " << config.transactions << "  seed: " << config.seed << "\n"
      << "  slots used: " << report.slots_used << "\n"
      << "members\n"
      << "  joined: " << net.members().size() << " (" << chains.size() - 1
      << " sidechains)\n"
      << "transactions\n"
      << "  submitted records: " << report.submitted_records << " (+ "
      << net.members().size() << " joins)\n"
      << "  (tx,chain) pairs submitted: " << net.submitted_pairs() << "\n"
      << "  (tx,chain) pairs sealed:    " << net.sealed_pairs() << "\n"
      << "chains\n";
  for (const auto* chain : chains) {
    out << "  " << chain->id() << ": blocks=" << chain->size()
        << " txs=" << chain->transaction_count()
        << " verify=" << (verify_chain(*chain, scheme).ok ? "ok" : "VIOLATION") << "\n";
  }
  out << "invariants\n"
      << "  queues drained:       " << yesno(report.queues_drained) << "\n"
      << "  chains verify:        " << yesno(report.chains_verify) << " (" << verified << "/"
      << chains.size() << ")\n"
      << "  anchoring:            " << yesno(report.anchoring_ok) << " ("
      << main_discharges.size() << " discharge summaries)\n"
      << "  sidechain purity:     " << yesno(report.purity_ok) << "\n"
      << "  conservation:         " << yesno(report.conservation_ok) << "\n"
      << "  member bijection:     " << yesno(report.bijection_ok) << "\n"
      << "result: " << (report.ok ? "OK" : "INVARIANT VIOLATION") << "\n";
  report.text = out.str();

  if (!config.out_dir.empty()) net.persist(config.out_dir);
  return report;
}

}  // namespace healthchain
