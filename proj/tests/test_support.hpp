#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "healthchain/consensus.hpp"
#include "healthchain/keys.hpp"
#include "healthchain/ledger.hpp"

namespace healthchain::test {

inline KeyPair test_keypair(std::uint64_t n) {
  std::mt19937_64 rng(n ^ 0x9e3779b97f4a7c15ULL);
  return keypair_from_rng(rng);
}

inline TransactionRecord make_tx(std::string id, TxType type, const KeyPair& signer,
                                 std::int64_t ts,
                                 std::string path = "ehr://patient-001/test/1") {
  TransactionRecord tx;
  tx.tx_id = std::move(id);
  tx.tx_type = type;
  tx.path = std::move(path);
  tx.data_hash = sha256(tx.tx_id + ":" + tx.path);
  tx.timestamp = ts;
  tx.acl = {signer.pub};
  tx.signatures.emplace_back(signer.pub,
                             default_scheme().sign(signer.sec, tx.signing_payload()));
  return tx;
}

inline Block seal_block(const Chain& chain, std::vector<TransactionRecord> txs,
                        const KeyPair& sealer, std::int64_t ts) {
  Block block;
  block.prev_header = chain.tip_digest();
  block.transactions = std::move(txs);
  block.timestamp = ts;
  block.sealer = sealer.pub;
  block.seal_signature = default_scheme().sign(sealer.sec, hex(header_digest(block)));
  return block;
}

inline Chain build_chain(std::size_t blocks, std::size_t txs_per_block,
                         const KeyPair& sealer, std::uint64_t id_salt = 0) {
  Chain chain("test-chain", ChainRole{ChainRoleKind::PatientSidechain, "patient-001"});
  std::size_t n = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<TransactionRecord> txs;
    for (std::size_t t = 0; t < txs_per_block; ++t) {
      txs.push_back(make_tx("tx-" + std::to_string(id_salt) + "-" + std::to_string(n++),
                            TxType::DiagnosisOrChange, sealer,
                            static_cast<std::int64_t>(b)));
    }
    if (chain.append(seal_block(chain, std::move(txs), sealer, static_cast<std::int64_t>(b))) !=
        LedgerViolation::None)
      throw std::logic_error("build_chain append failed");
  }
  return chain;
}

// Applies one random single-field mutation somewhere in the block and
// returns a label for it. Every mutation changes the affected value.
inline std::string mutate_random_field(Block& block, std::mt19937_64& rng) {
  std::vector<std::pair<std::string, std::function<void()>>> mutators;

  auto flip_bit = [&rng](auto& arr) {
    const auto byte = rng() % arr.size();
    arr[byte] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
  };

  mutators.emplace_back("block.prev_header", [&] { flip_bit(block.prev_header); });
  mutators.emplace_back("block.timestamp", [&] { block.timestamp += 1 + (rng() % 5); });
  mutators.emplace_back("block.sealer", [&] { flip_bit(block.sealer.bytes); });
  mutators.emplace_back("block.seal_signature", [&] { flip_bit(block.seal_signature.bytes); });

  for (std::size_t i = 0; i < block.transactions.size(); ++i) {
    auto& tx = block.transactions[i];
    const auto tag = "tx[" + std::to_string(i) + "].";
    mutators.emplace_back(tag + "tx_id", [&tx] { tx.tx_id += "x"; });
    mutators.emplace_back(tag + "tx_type", [&tx] {
      tx.tx_type = tx.tx_type == TxType::Financial ? TxType::JoinLeave
                                                   : static_cast<TxType>(
                                                         static_cast<int>(tx.tx_type) + 1);
    });
    mutators.emplace_back(tag + "data_hash", [&tx, &flip_bit] { flip_bit(tx.data_hash); });
    mutators.emplace_back(tag + "path", [&tx] { tx.path += "?"; });
    mutators.emplace_back(tag + "timestamp", [&tx] { tx.timestamp ^= 1; });
    if (!tx.signatures.empty()) {
      mutators.emplace_back(tag + "signer_key",
                            [&tx, &flip_bit] { flip_bit(tx.signatures[0].first.bytes); });
      mutators.emplace_back(tag + "signature",
                            [&tx, &flip_bit] { flip_bit(tx.signatures[0].second.bytes); });
    }
    if (!tx.acl.empty()) {
      mutators.emplace_back(tag + "acl", [&tx, &flip_bit, &rng] {
        flip_bit(tx.acl[rng() % tx.acl.size()].bytes);
      });
    }
  }

  auto& [label, fn] = mutators[rng() % mutators.size()];
  fn();
  return label;
}

}  // namespace healthchain::test
