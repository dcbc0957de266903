// Command-line front end: single runs, seed/size sweeps, and paired
// variant comparisons over a shared topology.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gossipsim/config.hpp"
#include "gossipsim/report.hpp"
#include "gossipsim/scenario.hpp"

namespace gs = gossipsim;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitShortfall = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;  // -1: config / environment decides
  std::string format = "csv";
};

void add_common(CLI::App* app, CommonArgs& args) {
  app->add_option("-c,--config", args.config_path, "Scenario config JSON file");
  app->add_option("--set", args.overrides,
                  "Override a config key, e.g. --set mesh.d=6 "
                  "--set variant=v1.4")
      ->take_all();
  app->add_option("-s,--seed", args.seed, "Root RNG seed");
  app->add_option("--format", args.format, "Stdout format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

json rows_to_json(const std::vector<gs::SummaryRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j;
    j["variant"] = r.variant;
    j["n_nodes"] = r.n_nodes;
    j["n_publishers"] = r.n_publishers;
    j["message_size_bytes"] = r.message_size_bytes;
    j["seed"] = r.seed;
    if (r.latency_ms) {
      j["latency_ms"] = *r.latency_ms;
    } else {
      j["latency_ms"] = nullptr;
    }
    j["bandwidth_bytes"] = r.bandwidth_bytes;
    j["avg_duplicates"] = r.avg_duplicates;
    j["iwant_requests"] = r.iwant_requests;
    j["iwant_reply_share"] = r.iwant_reply_share;
    out.push_back(std::move(j));
  }
  return out;
}

void emit_rows(const CommonArgs& args, const std::vector<gs::SummaryRow>& rows) {
  if (args.format == "json") {
    std::cout << rows_to_json(rows).dump(2) << "\n";
  } else {
    gs::write_summary_csv(std::cout, rows);
  }
}

json base_json(const CommonArgs& args) {
  json j = gs::config_to_json(gs::ScenarioConfig{});
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + args.config_path);
    json user;
    in >> user;
    // Validate against the schema by a full round-trip.
    gs::config_from_json(user);
    j.merge_patch(user);
  }
  for (const auto& ov : args.overrides) gs::apply_override(j, ov);
  if (args.seed >= 0) {
    j["seed"] = static_cast<std::uint64_t>(args.seed);
  } else if (const char* env = std::getenv("GOSSIPSIM_SEED")) {
    j["seed"] = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
  }
  return j;
}

void write_outputs(const std::string& out_dir, const gs::Simulation& sim,
                   const gs::RunResult& res) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "summary.csv");
    gs::write_summary_csv(f, {gs::make_summary(sim, res)});
  }
  {
    std::ofstream f(fs::path(out_dir) / "detail.json");
    f << gs::detail_json(sim, res).dump(2) << "\n";
  }
  {
    std::ofstream f(fs::path(out_dir) / "temporal.csv");
    gs::write_temporal_csv(f, sim.metrics());
  }
}

int cmd_run(const CommonArgs& args, const std::string& out_dir) {
  gs::ScenarioConfig cfg = gs::config_from_json(base_json(args));
  gs::Simulation sim(cfg);
  gs::RunResult res = sim.run();
  if (!out_dir.empty()) write_outputs(out_dir, sim, res);
  emit_rows(args, {gs::make_summary(sim, res)});
  if (!res.full_coverage) {
    for (const auto& line : sim.metrics().shortfall_report()) {
      std::cerr << line << "\n";
    }
    return kExitShortfall;
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, int n_seeds,
              const std::vector<std::uint64_t>& sizes,
              const std::vector<std::string>& variants, int parallel,
              const std::string& out_file) {
  json base = base_json(args);
  const std::uint64_t seed0 = base.at("seed").get<std::uint64_t>();

  std::vector<json> jobs;
  auto size_list = sizes;
  if (size_list.empty()) {
    size_list.push_back(base.at("message_size_bytes").get<std::uint64_t>());
  }
  auto var_list = variants;
  if (var_list.empty()) var_list.push_back(base.at("variant").get<std::string>());
  for (const auto& v : var_list) {
    gs::variant_from_string(v);  // reject typos before any run starts
    for (auto sz : size_list) {
      for (int i = 0; i < n_seeds; ++i) {
        json j = base;
        j["variant"] = v;
        j["message_size_bytes"] = sz;
        j["seed"] = seed0 + static_cast<std::uint64_t>(i);
        jobs.push_back(std::move(j));
      }
    }
  }

  std::vector<gs::SummaryRow> rows(jobs.size());
  std::vector<bool> covered(jobs.size(), true);
  std::mutex err_mu;
  std::vector<std::string> errors;
  std::size_t next = 0;
  std::mutex next_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lk(next_mu);
        if (next >= jobs.size()) return;
        i = next++;
      }
      try {
        gs::Simulation sim(gs::config_from_json(jobs[i]));
        gs::RunResult res = sim.run();
        rows[i] = gs::make_summary(sim, res);
        covered[i] = res.full_coverage;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        errors.push_back(e.what());
      }
    }
  };
  const int threads = std::max(1, parallel);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!errors.empty()) {
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return kExitError;
  }
  emit_rows(args, rows);
  if (!out_file.empty()) {
    std::ofstream f(out_file);
    gs::write_summary_csv(f, rows);
  }
  for (bool ok : covered) {
    if (!ok) return kExitShortfall;
  }
  return kExitOk;
}

int cmd_compare(const CommonArgs& args, std::vector<std::string> variants,
                const std::string& out_file) {
  json base = base_json(args);
  if (variants.empty()) variants = {"v1.1", "v1.2", "v1.4", "reduced"};
  for (const auto& v : variants) gs::variant_from_string(v);

  // One topology and link assignment, shared by every variant.
  gs::ScenarioConfig probe = gs::config_from_json(base);
  gs::RandomSource root(probe.seed);
  auto topo_rng = root.derive(1);
  gs::Topology topo = gs::build_topology(probe.n_nodes, probe.mesh, topo_rng);
  auto class_rng = root.derive(2);
  gs::LinkAssignment links = gs::assign_link_classes(
      topo, probe.bandwidth_classes, probe.latency_classes, class_rng);

  std::vector<gs::SummaryRow> rows;
  bool all_covered = true;
  for (const auto& v : variants) {
    json j = base;
    j["variant"] = v;
    gs::Simulation sim(gs::config_from_json(j), topo, links);
    gs::RunResult res = sim.run();
    rows.push_back(gs::make_summary(sim, res));
    all_covered = all_covered && res.full_coverage;
  }
  emit_rows(args, rows);
  if (!out_file.empty()) {
    std::ofstream f(out_file);
    gs::write_summary_csv(f, rows);
  }
  return all_covered ? kExitOk : kExitShortfall;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GossipSub variant simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, cmp_args;
  std::string run_out, sweep_out, cmp_out;
  int n_seeds = 5;
  int parallel = 1;
  std::vector<std::uint64_t> sweep_sizes;
  std::vector<std::string> sweep_variants, cmp_variants;

  auto* run = app.add_subcommand("run", "Execute one scenario");
  add_common(run, run_args);
  run->add_option("-o,--out", run_out,
                  "Directory for summary.csv, detail.json, temporal.csv");

  auto* sweep = app.add_subcommand("sweep", "Run a seed/size/variant grid");
  add_common(sweep, sweep_args);
  sweep->add_option("-n,--seeds", n_seeds, "Consecutive seeds per cell")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--sizes", sweep_sizes, "Message sizes in bytes")
      ->delimiter(',');
  sweep->add_option("--variants", sweep_variants, "Protocol variants")
      ->delimiter(',');
  sweep->add_option("-j,--parallel", parallel, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", sweep_out, "Summary CSV output file");

  auto* cmp = app.add_subcommand(
      "compare", "Run several variants over one shared topology");
  add_common(cmp, cmp_args);
  cmp->add_option("--variants", cmp_variants, "Protocol variants")
      ->delimiter(',');
  cmp->add_option("-o,--out", cmp_out, "Summary CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args, run_out);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_args, n_seeds, sweep_sizes, sweep_variants,
                       parallel, sweep_out);
    }
    return cmd_compare(cmp_args, cmp_variants, cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
