#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "healthchain/ledger.hpp"
#include "test_support.hpp"

using namespace healthchain;
using namespace healthchain::test;

TEST_CASE("header_digest is deterministic and total") {
  const auto sealer = test_keypair(1);
  Chain chain("c", ChainRole{ChainRoleKind::Mainchain, ""});
  const auto block = seal_block(chain, {make_tx("tx-1", TxType::JoinLeave, sealer, 0)},
                                sealer, 0);
  Block copy = block;
  CHECK(header_digest(block) == header_digest(copy));
}

// Brute-force bit-flip oracle: flipping any field anywhere in the block body
// must change the digest.
TEST_CASE("header_digest covers every field of every transaction") {
  const auto sealer = test_keypair(1);
  Chain chain("c", ChainRole{ChainRoleKind::Mainchain, ""});
  std::vector<TransactionRecord> txs;
  for (int i = 0; i < 3; ++i)
    txs.push_back(make_tx("tx-" + std::to_string(i), TxType::DiagnosisOrChange, sealer, i));
  const auto block = seal_block(chain, txs, sealer, 3);
  const auto base = header_digest(block);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    Block mutated = block;
    const auto label = mutate_random_field(mutated, rng);
    if (label == "block.seal_signature") continue;  // signature is not part of the digest
    CAPTURE(label);
    CHECK(header_digest(mutated) != base);
  }

  // The flipped-transaction-id case called out explicitly.
  Block flipped = block;
  flipped.transactions[1].tx_id[0] ^= 1;
  CHECK(header_digest(flipped) != base);
}

TEST_CASE("append enforces link, timestamp and non-emptiness") {
  const auto sealer = test_keypair(2);
  Chain chain("c", ChainRole{ChainRoleKind::Mainchain, ""});

  auto b0 = seal_block(chain, {make_tx("tx-0", TxType::JoinLeave, sealer, 0)}, sealer, 0);
  REQUIRE(chain.append(b0) == LedgerViolation::None);
  CHECK(chain.size() == 1);

  SUBCASE("valid successor grows the chain") {
    auto b1 = seal_block(chain, {make_tx("tx-1", TxType::JoinLeave, sealer, 1)}, sealer, 1);
    CHECK(chain.append(b1) == LedgerViolation::None);
    CHECK(chain.size() == 2);
  }
  SUBCASE("genesis prev_header onto a non-empty chain is rejected") {
    Block bad = seal_block(chain, {make_tx("tx-1", TxType::JoinLeave, sealer, 1)}, sealer, 1);
    bad.prev_header = kGenesisMarker;
    CHECK(chain.append(bad) == LedgerViolation::HashMismatch);
    CHECK(chain.size() == 1);
  }
  SUBCASE("timestamp regression is rejected") {
    auto bad = seal_block(chain, {make_tx("tx-1", TxType::JoinLeave, sealer, 1)}, sealer, -1);
    CHECK(chain.append(bad) == LedgerViolation::TimestampRegression);
  }
  SUBCASE("empty block is rejected") {
    auto bad = seal_block(chain, {}, sealer, 1);
    CHECK(chain.append(bad) == LedgerViolation::EmptyBlock);
  }
}

TEST_CASE("verify_chain accepts chains built only via append") {
  const auto sealer = test_keypair(3);
  const auto chain = build_chain(100, 2, sealer);
  const auto report = verify_chain(chain);
  CHECK(report.ok);
}

TEST_CASE("verify_chain on the empty chain is vacuously ok") {
  Chain chain("c", ChainRole{ChainRoleKind::Mainchain, ""});
  CHECK(verify_chain(chain).ok);
}

TEST_CASE("content tampering is reported at the successor's broken link") {
  const auto sealer = test_keypair(4);
  auto chain = build_chain(10, 2, sealer);

  // Mutate one transaction's data_hash in block 5: block 6's prev_header no
  // longer matches the recomputed digest of block 5.
  auto blocks = chain.blocks();
  blocks[5].transactions[0].data_hash[0] ^= 0x01;
  const auto tampered =
      Chain::from_blocks(chain.id(), chain.role(), chain.link_tx_id(), std::move(blocks));

  const auto report = verify_chain(tampered);
  REQUIRE_FALSE(report.ok);
  CHECK(report.block_index == 6);
  CHECK(report.kind == LedgerViolation::HashMismatch);
}

TEST_CASE("any single-field mutation in a multi-block chain is detected") {
  const auto sealer = test_keypair(5);
  const auto chain = build_chain(8, 3, sealer);
  REQUIRE(verify_chain(chain).ok);

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 250; ++trial) {
    auto blocks = chain.blocks();
    const auto target = rng() % blocks.size();
    const auto label = mutate_random_field(blocks[target], rng);
    const auto tampered =
        Chain::from_blocks(chain.id(), chain.role(), chain.link_tx_id(), std::move(blocks));
    CAPTURE(target);
    CAPTURE(label);
    CHECK_FALSE(verify_chain(tampered).ok);
  }
}

TEST_CASE("chain files round-trip bit-exactly with identical digests") {
  const auto sealer = test_keypair(6);
  const auto chain = build_chain(5, 4, sealer);

  std::ostringstream encoded;
  write_chain(chain, encoded);
  std::istringstream decoded_in(encoded.str());
  const auto decoded = read_chain(decoded_in, "roundtrip");

  CHECK(decoded.id() == chain.id());
  CHECK(decoded.role() == chain.role());
  REQUIRE(decoded.size() == chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i)
    CHECK(header_digest(decoded.blocks()[i]) == header_digest(chain.blocks()[i]));
  CHECK(verify_chain(decoded).ok);

  std::ostringstream reencoded;
  write_chain(decoded, reencoded);
  CHECK(reencoded.str() == encoded.str());
}

TEST_CASE("loading rejects truncated and non-canonical records") {
  const auto sealer = test_keypair(7);
  const auto chain = build_chain(3, 1, sealer);
  std::ostringstream encoded;
  write_chain(chain, encoded);
  const std::string text = encoded.str();

  SUBCASE("truncated last line") {
    const auto cut = text.substr(0, text.size() - 20) + "\n";
    std::istringstream in(cut);
    try {
      read_chain(in, "trunc");
      FAIL("expected CorruptRecord");
    } catch (const CorruptRecord& e) {
      CHECK(e.line == 4);  // header + 3 blocks
      CHECK(e.file == "trunc");
    }
  }
  SUBCASE("whitespace breaks canonical form") {
    auto padded = text;
    const auto pos = padded.find("\"prev_header\"", padded.find('\n') + 1);
    REQUIRE(pos != std::string::npos);
    padded.insert(pos, " ");
    std::istringstream in(padded);
    CHECK_THROWS_AS(read_chain(in, "pad"), CorruptRecord);
  }
}

TEST_CASE("transaction encode/decode round-trips") {
  const auto signer = test_keypair(8);
  const auto tx = make_tx("tx-42", TxType::Financial, signer, 1234);
  const auto decoded = TransactionRecord::decode(tx.encode());
  CHECK(decoded == tx);
  CHECK(decoded.encode() == tx.encode());
  CHECK(default_scheme().verify(signer.pub, decoded.signing_payload(),
                                decoded.signatures[0].second));
}
