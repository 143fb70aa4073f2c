#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "healthchain/digest.hpp"
#include "healthchain/keys.hpp"

namespace healthchain {

// The six transaction types of the routing table.
enum class TxType {
  JoinLeave,
  DischargeSummary,
  InterHospitalShare,
  RecordAccess,
  DiagnosisOrChange,
  Financial,
};

std::string_view to_string(TxType type);
TxType tx_type_from_string(std::string_view name);  // throws std::invalid_argument

// One routed event. data_hash/path locate the off-chain payload; no medical
// content is ever stored on chain. acl is the snapshot of permitted keys at
// the time the record was built and never changes once sealed.
struct TransactionRecord {
  std::string tx_id;
  TxType tx_type = TxType::JoinLeave;
  Digest data_hash{};
  std::string path;
  std::int64_t timestamp = 0;
  std::vector<std::pair<PublicKey, Signature>> signatures;
  std::vector<PublicKey> acl;

  bool operator==(const TransactionRecord&) const = default;

  // Canonical encoding of everything except the signatures list; parties
  // co-signing a record sign these bytes.
  std::string signing_payload() const;

  std::string encode() const;
  static TransactionRecord decode(std::string_view text);

  bool signed_by(const PublicKey& key) const;
  bool acl_contains(const PublicKey& key) const;
};

// Sealed container. seal_signature is the sealing authority's signature over
// header_digest(*this), so it commits to the full content.
struct Block {
  Digest prev_header{};
  std::vector<TransactionRecord> transactions;
  std::int64_t timestamp = 0;
  PublicKey sealer;
  Signature seal_signature;

  bool operator==(const Block&) const = default;

  std::string encode() const;
  static Block decode(std::string_view text);
};

// Digest over the canonical encoding of (prev_header, timestamp, sealer, full
// transaction list). Covers every field of every transaction: flipping any
// bit anywhere in the block body changes the digest.
Digest header_digest(const Block& block);

enum class ChainRoleKind { Mainchain, PatientSidechain, HospitalSidechain };

struct ChainRole {
  ChainRoleKind kind = ChainRoleKind::Mainchain;
  std::string owner;  // member_id; empty for the mainchain

  bool operator==(const ChainRole&) const = default;
};

std::string_view to_string(ChainRoleKind kind);
ChainRoleKind chain_role_from_string(std::string_view name);

enum class LedgerViolation {
  None,
  HashMismatch,
  TimestampRegression,
  EmptyBlock,
  BadSealSignature,
};

std::string_view to_string(LedgerViolation v);

struct VerifyReport {
  bool ok = true;
  std::size_t block_index = 0;
  LedgerViolation kind = LedgerViolation::None;
};

// Append-only block sequence. Blocks are immutable once appended; appending
// is the owner's responsibility (no internal locking).
class Chain {
 public:
  Chain() = default;
  Chain(std::string chain_id, ChainRole role, std::string link_tx_id = {});

  const std::string& id() const { return id_; }
  const ChainRole& role() const { return role_; }
  // tx_id of the mainchain join transaction this sidechain is linked to.
  const std::string& link_tx_id() const { return link_tx_id_; }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  // Digest the next block's prev_header must equal: genesis marker when
  // empty, header digest of the tip otherwise.
  Digest tip_digest() const;
  std::int64_t tip_timestamp() const;  // 0 when empty

  // Validates the hash link, timestamp order and non-emptiness; on success
  // the chain grows by one block, otherwise it is left untouched.
  LedgerViolation append(Block block);

  // Unchecked restore path for loading stored chains; pair with verify_chain.
  static Chain from_blocks(std::string chain_id, ChainRole role, std::string link_tx_id,
                           std::vector<Block> blocks);

  std::size_t transaction_count() const;

 private:
  std::string id_;
  ChainRole role_;
  std::string link_tx_id_;
  std::vector<Block> blocks_;
};

// Full integrity scan. Violations are report payload, not failures. Checks
// run in passes over the whole chain: hash links first, then timestamp
// order, then block emptiness, then seal signatures. Content tampering in
// block k therefore reports HashMismatch at index k+1 (its successor's
// prev_header no longer matches); tampering in the tip block is caught by
// the tip's seal signature.
VerifyReport verify_chain(const Chain& chain,
                          const SignatureScheme& scheme = default_scheme());

// Chain file format: NDJSON. First line is a header record
// {chain_id, format_version, link_tx_id, owner, role}; each further line is
// one canonically encoded block. Loading enforces bit-exact re-encoding of
// every line, since digests are computed over the stored bytes.
void write_chain(const Chain& chain, std::ostream& out);
void write_chain_file(const Chain& chain, const std::filesystem::path& path);
Chain read_chain(std::istream& in, const std::string& source_name);
Chain read_chain_file(const std::filesystem::path& path);

// I/O failure distinct from record corruption so callers can map exit codes.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct CorruptRecord : std::runtime_error {
  CorruptRecord(std::string file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file(std::move(file)),
        line(line) {}

  std::string file;
  std::size_t line;
};

}  // namespace healthchain
