#include "doctest.h"
#include "healthchain/acl.hpp"
#include "test_support.hpp"

using namespace healthchain;
using namespace healthchain::test;

namespace {

struct AclFixture {
  KeyPair patient = test_keypair(200);
  KeyPair k1 = test_keypair(201);
  KeyPair k2 = test_keypair(202);
  AccessController controller{"patient-001", patient.pub};
  int audit_counter = 0;

  Signature sign_grant(const PublicKey& provider) {
    return default_scheme().sign(patient.sec, controller.grant_statement(provider));
  }
  Signature sign_revoke(const PublicKey& provider) {
    return default_scheme().sign(patient.sec, controller.revoke_statement(provider));
  }
  Signature sign_access(const KeyPair& accessor, const std::string& tx_id) {
    return default_scheme().sign(accessor.sec,
                                 controller.access_statement(accessor.pub, tx_id));
  }
  std::string next_audit_id() { return "audit-" + std::to_string(++audit_counter); }
};

}  // namespace

TEST_CASE("grant adds the provider, bumps the version and emits one audit") {
  AclFixture f;
  const auto audit = f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 10);
  REQUIRE(audit.ok());
  CHECK(f.controller.acl().authorized == std::vector<PublicKey>{f.k1.pub});
  CHECK(f.controller.acl().version == 1);

  const auto& tx = audit.value();
  CHECK(tx.tx_type == TxType::RecordAccess);
  CHECK(tx.path == "acl://patient-001/grant/" + f.k1.pub.hex());
  CHECK(tx.signed_by(f.patient.pub));
  CHECK(tx.acl_contains(f.patient.pub));
  CHECK(tx.acl_contains(f.k1.pub));
}

TEST_CASE("grant rejects duplicates, forged signatures and the null key") {
  AclFixture f;
  REQUIRE(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 10).ok());

  CHECK(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 11).error() ==
        AclError::AlreadyAuthorized);

  auto forged = f.sign_grant(f.k2.pub);
  forged.bytes[0] ^= 1;
  CHECK(f.controller.grant(f.k2.pub, forged, f.next_audit_id(), 12).error() ==
        AclError::BadSignature);

  // A stale signature (signed for an earlier version) no longer verifies.
  const auto stale = f.sign_grant(f.k2.pub);
  REQUIRE(f.controller.revoke(f.k1.pub, f.sign_revoke(f.k1.pub), f.next_audit_id(), 13).ok());
  CHECK(f.controller.grant(f.k2.pub, stale, f.next_audit_id(), 14).error() ==
        AclError::BadSignature);

  CHECK(f.controller.grant(PublicKey{}, f.sign_grant(PublicKey{}), f.next_audit_id(), 15)
            .error() == AclError::NullKey);
}

TEST_CASE("revoke removes exactly the named provider") {
  AclFixture f;
  REQUIRE(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 1).ok());

  SUBCASE("grant then revoke leaves the list empty at version 2") {
    REQUIRE(f.controller.revoke(f.k1.pub, f.sign_revoke(f.k1.pub), f.next_audit_id(), 2).ok());
    CHECK(f.controller.acl().authorized.empty());
    CHECK(f.controller.acl().version == 2);
  }
  SUBCASE("revoking an unknown key fails") {
    CHECK(f.controller.revoke(f.k2.pub, f.sign_revoke(f.k2.pub), f.next_audit_id(), 2)
              .error() == AclError::NotAuthorized);
  }
  SUBCASE("revoking one of two keeps the other") {
    REQUIRE(f.controller.grant(f.k2.pub, f.sign_grant(f.k2.pub), f.next_audit_id(), 2).ok());
    REQUIRE(f.controller.revoke(f.k1.pub, f.sign_revoke(f.k1.pub), f.next_audit_id(), 3).ok());
    CHECK(f.controller.acl().authorized == std::vector<PublicKey>{f.k2.pub});
    CHECK(f.controller.acl().version == 3);
  }
}

TEST_CASE("version counts successful grant/revoke operations only") {
  AclFixture f;
  REQUIRE(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 1).ok());
  f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 2);  // duplicate
  f.controller.revoke(f.k2.pub, f.sign_revoke(f.k2.pub), f.next_audit_id(), 3);  // unknown
  REQUIRE(f.controller.revoke(f.k1.pub, f.sign_revoke(f.k1.pub), f.next_audit_id(), 4).ok());
  CHECK(f.controller.acl().version == 2);
}

TEST_CASE("check_access decides on the sealed snapshot, not the live list") {
  AclFixture f;

  // Record sealed before the grant: snapshot without k1.
  TransactionRecord before;
  before.tx_id = "tx-before";
  before.tx_type = TxType::DiagnosisOrChange;
  before.path = "ehr://patient-001/diagnosis/1";
  before.timestamp = 1;
  before.acl = f.controller.snapshot();

  REQUIRE(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), f.next_audit_id(), 2).ok());

  // Record sealed after the grant: snapshot with k1.
  TransactionRecord after = before;
  after.tx_id = "tx-after";
  after.timestamp = 3;
  after.acl = f.controller.snapshot();

  const auto denied = f.controller.check_access(
      f.k1.pub, f.sign_access(f.k1, before.tx_id), before, f.next_audit_id(), 4);
  REQUIRE(denied.ok());
  CHECK_FALSE(denied.value().allowed);
  CHECK(denied.value().audit.has_value());  // first access by k1: one audit

  const auto allowed = f.controller.check_access(
      f.k1.pub, f.sign_access(f.k1, after.tx_id), after, f.next_audit_id(), 5);
  REQUIRE(allowed.ok());
  CHECK(allowed.value().allowed);
  CHECK_FALSE(allowed.value().audit.has_value());  // k1 is no longer a new entity

  // The patient's own key is always in the snapshot.
  const auto self = f.controller.check_access(
      f.patient.pub, f.sign_access(f.patient, before.tx_id), before, f.next_audit_id(), 6);
  REQUIRE(self.ok());
  CHECK(self.value().allowed);
}

TEST_CASE("check_access rejects records of another patient and bad signatures") {
  AclFixture f;
  TransactionRecord foreign;
  foreign.tx_id = "tx-x";
  foreign.tx_type = TxType::DiagnosisOrChange;
  foreign.path = "ehr://patient-999/diagnosis/1";
  foreign.acl = {f.k1.pub};

  CHECK(f.controller
            .check_access(f.k1.pub, f.sign_access(f.k1, foreign.tx_id), foreign,
                          f.next_audit_id(), 1)
            .error() == AclError::WrongPatient);

  TransactionRecord own = foreign;
  own.path = "ehr://patient-001/diagnosis/1";
  auto bad_sig = f.sign_access(f.k1, own.tx_id);
  bad_sig.bytes[3] ^= 0x10;
  CHECK(f.controller.check_access(f.k1.pub, bad_sig, own, f.next_audit_id(), 2).error() ==
        AclError::BadSignature);
}

TEST_CASE("access audits record the decision and target") {
  AclFixture f;
  TransactionRecord tx;
  tx.tx_id = "tx-t";
  tx.tx_type = TxType::Financial;
  tx.path = "ehr://patient-001/billing/9";
  tx.acl = f.controller.snapshot();

  const auto decision = f.controller.check_access(
      f.k1.pub, f.sign_access(f.k1, tx.tx_id), tx, "audit-access", 7);
  REQUIRE(decision.ok());
  REQUIRE(decision.value().audit.has_value());
  const auto& audit = *decision.value().audit;
  CHECK(audit.path == "acl://patient-001/access/" + f.k1.pub.hex() + "/denied/tx-t");
  CHECK(audit.signed_by(f.k1.pub));
  CHECK(audit.tx_type == TxType::RecordAccess);
}

TEST_CASE("replaying the sidechain reconstructs the controller exactly") {
  AclFixture f;
  const auto sealer = test_keypair(250);
  Chain sidechain("sidechain-patient-001",
                  ChainRole{ChainRoleKind::PatientSidechain, "patient-001"}, "tx-join");

  std::vector<TransactionRecord> audits;
  auto push = [&](Result<TransactionRecord, AclError> r) {
    REQUIRE(r.ok());
    audits.push_back(r.take());
  };
  push(f.controller.grant(f.k1.pub, f.sign_grant(f.k1.pub), "a-1", 1));
  push(f.controller.grant(f.k2.pub, f.sign_grant(f.k2.pub), "a-2", 2));
  push(f.controller.revoke(f.k1.pub, f.sign_revoke(f.k1.pub), "a-3", 3));

  TransactionRecord target;
  target.tx_id = "tx-t";
  target.tx_type = TxType::DiagnosisOrChange;
  target.path = "ehr://patient-001/diagnosis/1";
  target.acl = f.controller.snapshot();
  const auto decision =
      f.controller.check_access(f.k2.pub, f.sign_access(f.k2, target.tx_id), target, "a-4", 4);
  REQUIRE(decision.ok());
  REQUIRE(decision.value().audit.has_value());
  audits.push_back(*decision.value().audit);

  REQUIRE(sidechain.append(seal_block(sidechain, audits, sealer, 5)) ==
          LedgerViolation::None);

  const auto rebuilt =
      rebuild_access_controller("patient-001", f.patient.pub, sidechain);
  CHECK(rebuilt.acl().authorized == f.controller.acl().authorized);
  CHECK(rebuilt.acl().version == f.controller.acl().version);
  CHECK(rebuilt.seen_accessors() == f.controller.seen_accessors());
}
