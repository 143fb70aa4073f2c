// healthchain: capacity tables, backlog sweeps, ledger verification and a
// desk-scale end-to-end network demo.
//
// Exit codes: 0 ok, 1 chain verification failure, 2 usage error,
// 3 I/O failure, 4 demo invariant breach.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "healthchain/demo.hpp"
#include "healthchain/ledger.hpp"
#include "healthchain/sim.hpp"

namespace fs = std::filesystem;
using namespace healthchain;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvariant = 4;

struct ChainPreset {
  std::string name;
  double mu_tps;
};

int run_sweep(double lambda_day, std::vector<double> mu_list, std::uint64_t seed,
              std::int64_t horizon, const std::string& out_path) {
  const auto rows = sim::sweep(lambda_day, std::move(mu_list), seed, horizon);
  if (out_path == "-") {
    sim::write_sweep_csv(std::cout, rows);
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kExitIo;
  }
  sim::write_sweep_csv(out, rows);
  out.flush();
  if (!out) {
    std::cerr << "error: write failed: " << out_path << "\n";
    return kExitIo;
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

int run_capacity(const std::vector<std::uint64_t>& patients,
                 const std::vector<ChainPreset>& chains, double rate_per_patient,
                 const std::string& csv_path) {
  std::cout << std::setw(12) << "patients" << std::setw(16) << "tx_per_day";
  for (const auto& chain : chains) std::cout << std::setw(12) << chain.name;
  std::cout << "\n";
  for (const auto n : patients) {
    std::cout << std::setw(12) << n << std::setw(16)
              << sim::format_number(static_cast<double>(n) * rate_per_patient);
    for (const auto& chain : chains)
      std::cout << std::setw(12)
                << sim::sidechains_needed({n, rate_per_patient, chain.mu_tps});
    std::cout << "\n";
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot open " << csv_path << " for writing\n";
      return kExitIo;
    }
    out << "patients,tx_per_day";
    for (const auto& chain : chains) out << ',' << chain.name;
    out << '\n';
    for (const auto n : patients) {
      out << n << ',' << sim::format_number(static_cast<double>(n) * rate_per_patient);
      for (const auto& chain : chains)
        out << ',' << sim::sidechains_needed({n, rate_per_patient, chain.mu_tps});
      out << '\n';
    }
    out.flush();
    if (!out) {
      std::cerr << "error: write failed: " << csv_path << "\n";
      return kExitIo;
    }
  }
  return kExitOk;
}

int run_demo_cmd(const DemoConfig& config) {
  const auto report = run_demo(config);
  std::cout << report.text;
  if (!config.out_dir.empty())
    std::cout << "network directory: " << config.out_dir.string() << "\n";
  return report.ok ? kExitOk : kExitInvariant;
}

int run_verify(const std::string& path_arg) {
  const fs::path path(path_arg);
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.path().extension() == ".chain") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      std::cerr << "error: no .chain files in " << path.string() << "\n";
      return kExitIo;
    }
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    std::cerr << "error: no such file or directory: " << path.string() << "\n";
    return kExitIo;
  }

  bool all_ok = true;
  for (const auto& file : files) {
    const Chain chain = read_chain_file(file);  // IoError/CorruptRecord propagate
    const auto report = verify_chain(chain);
    if (report.ok) {
      std::cout << file.filename().string() << ": ok (" << chain.size() << " blocks)\n";
    } else {
      std::cout << file.filename().string() << ": " << to_string(report.kind)
                << " at block " << report.block_index << "\n";
      all_ok = false;
    }
  }
  return all_ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patient-centric permissioned health ledger tools"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read options from a key=value file");

  // sweep
  double lambda_day = 0.0;
  std::vector<double> mu_list{7.0, 25.0, 50.0};
  std::uint64_t sweep_seed = 42;
  std::int64_t horizon = sim::kSecondsPerDay;
  std::string sweep_out = "sweep.csv";
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "end-of-day unsealed backlog vs sealing rate, expected and simulated");
  sweep_cmd->configurable();
  sweep_cmd->add_option("--lambda-day", lambda_day, "mean transactions per day")
      ->required()
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--mu", mu_list, "sealing rates to sweep, tps")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep_seed, "base RNG seed (one increment per row)");
  sweep_cmd->add_option("--horizon", horizon, "horizon in seconds")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "output CSV path, - for stdout");

  // capacity
  std::vector<std::uint64_t> patients{1, 1000, 10000, 50000, 100000, 200000, 300000};
  std::vector<std::string> chain_names{"bitcoin", "ethereum", "iota", "cardano"};
  double rate_per_patient = sim::kDefaultTxPerPatientDay;
  double cardano_tps = 257.0;
  std::string capacity_csv;
  auto* capacity_cmd =
      app.add_subcommand("capacity", "sidechains needed per patient population");
  capacity_cmd->configurable();
  capacity_cmd->add_option("--patients", patients, "patient counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  capacity_cmd->add_option("--chains", chain_names,
                           "chains (bitcoin=7, ethereum=25, iota=50, cardano tps "
                           "configurable)")
      ->delimiter(',');
  capacity_cmd->add_option("--rate-per-patient", rate_per_patient,
                           "transactions per patient per day")
      ->check(CLI::PositiveNumber);
  capacity_cmd->add_option("--cardano-tps", cardano_tps, "assumed Cardano sealing rate")
      ->check(CLI::PositiveNumber);
  capacity_cmd->add_option("--csv", capacity_csv, "also write the grid as CSV");

  // demo
  DemoConfig demo_config;
  std::string demo_out = "healthchain-net";
  auto* demo_cmd = app.add_subcommand(
      "demo", "end-to-end network run: joins, routing, sealing, ACL, verification");
  demo_cmd->configurable();
  demo_cmd->add_option("--hospitals", demo_config.hospitals, "consortium hospitals")
      ->check(CLI::PositiveNumber);
  demo_cmd->add_option("--patients", demo_config.patients, "patients")
      ->check(CLI::PositiveNumber);
  demo_cmd->add_option("--txs", demo_config.transactions,
                       "transaction records to submit after the join phase");
  demo_cmd->add_option("--seed", demo_config.seed, "RNG seed");
  demo_cmd->add_option("--out", demo_out, "network directory to persist");

  // verify
  std::string verify_path;
  auto* verify_cmd =
      app.add_subcommand("verify", "verify chain files (hash links, timestamps, seals)");
  verify_cmd->configurable();
  verify_cmd->add_option("path", verify_path, "network directory or single .chain file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (sweep_cmd->parsed())
      return run_sweep(lambda_day, std::move(mu_list), sweep_seed, horizon, sweep_out);
    if (capacity_cmd->parsed()) {
      const std::map<std::string, double> presets{
          {"bitcoin", 7.0}, {"ethereum", 25.0}, {"iota", 50.0}, {"cardano", cardano_tps}};
      std::vector<ChainPreset> chains;
      for (const auto& name : chain_names) {
        const auto it = presets.find(name);
        if (it == presets.end()) {
          std::cerr << "error: unknown chain '" << name << "'\n";
          return kExitUsage;
        }
        chains.push_back({name, it->second});
      }
      return run_capacity(patients, chains, rate_per_patient, capacity_csv);
    }
    if (demo_cmd->parsed()) {
      demo_config.out_dir = demo_out;
      return run_demo_cmd(demo_config);
    }
    if (verify_cmd->parsed()) return run_verify(verify_path);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CorruptRecord& e) {
    std::cerr << "corrupt record: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
