#include <algorithm>
#include <atomic>
#include <filesystem>
#include <thread>

#include "dmt/report.hpp"

namespace dmt {

namespace fs = std::filesystem;

BenchRow bench_bundle(const std::string& dir, const RunConfig& cfg) {
  BenchRow row;
  row.id = fs::path(dir).filename().string();
  row.cls = "error";
  try {
    SpecFile spec = load_spec((fs::path(dir) / "spec.dmt").string());
    const Dmt& d = spec.dmt;
    const Signature& sig = d.ctx.signature;
    row.transitions = d.transitions.size();
    row.guard_size = guard_size(d);
    row.relations = sig.relations().size();
    row.functions = sig.functions().size();
    row.constants = sig.constants().size();

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".ltl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Property> props;
    for (const auto& f : files) props.push_back(load_property(f.string(), spec));
    row.properties = props.size();

    Gateway gw(d.ctx, cfg.solver);
    row.cls = to_string(classify(d, Property::conj(props), gw, cfg.classify).decidable);
    for (const auto& p : props) {
      auto t0 = std::chrono::steady_clock::now();
      ProductResult r = model_check(d, p, gw, cfg.budget);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.outcomes.push_back(to_string(r.verdict.outcome));
      row.time_total += secs;
      row.time_max = std::max(row.time_max, secs);
      row.checks_total += r.verdict.stats.checks;
      row.checks_max = std::max(row.checks_max, r.verdict.stats.checks);
    }
    if (!props.empty()) {
      row.time_avg = row.time_total / static_cast<double>(props.size());
      row.checks_avg = row.checks_total / props.size();
    }
  } catch (const std::exception& e) {
    row.cls = "error";
    row.error = e.what();
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::string& dir, const RunConfig& cfg) {
  std::vector<std::string> bundles;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) bundles.push_back(e.path().string());
  std::sort(bundles.begin(), bundles.end());
  std::vector<BenchRow> rows(bundles.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < bundles.size();) rows[i] = bench_bundle(bundles[i], cfg);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::min<std::size_t>(cfg.jobs, bundles.size()); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace dmt
