#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "error_fixtures.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "shapebias/behavioral.hpp"
#include "shapebias/cli.hpp"
#include "shapebias/correlation.hpp"
#include "shapebias/dimensionality.hpp"
#include "shapebias/formats.hpp"
#include "shapebias/pool.hpp"
#include "shapebias/sampler.hpp"
#include "shapebias/stats.hpp"

using namespace shapebias;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Check shape_bias_recount() {
  Check c;
  std::mt19937_64 rng(20240601);
  const auto start = Clock::now();
  for (int set = 0; set < 1000 && c.ok; ++set) {
    const auto records = testing::random_records(rng, 200);
    std::size_t shape = 0, texture = 0;
    for (const auto& r : records) {
      if (r.predicted_class.name == r.shape_class.name) ++shape;
      else if (r.predicted_class.name == r.texture_class.name) ++texture;
    }
    if (shape + texture == 0) continue;
    const double naive = static_cast<double>(shape) / static_cast<double>(shape + texture);
    const auto got = compute_shape_bias(records);
    if (got.shape_bias != naive || got.tally.correct_shape != shape ||
        got.tally.correct_texture != texture) {
      c.fail("set " + std::to_string(set) + " disagrees with recount");
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 5.0) c.fail("runtime " + std::to_string(elapsed) + " s");
  return c;
}

Check factor_correlation_oracle() {
  Check c;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int set = 0; set < 100; ++set) {
    const auto pairs = testing::random_pairs(rng, Factor::Shape, 50, 20);
    const auto oracle = testing::factor_correlation_two_pass(pairs);
    for (Backend backend : {Backend::Serial, Backend::OpenMP}) {
      const auto got = factor_correlation(pairs, backend);
      worst = std::max(worst, std::abs(got.rho - oracle.rho));
      if (got.valid_neurons != oracle.valid) c.fail("valid neuron count differs");
    }
  }
  if (worst > 1e-10) c.fail("max deviation " + std::to_string(worst));
  return c;
}

Check dimensionality_conservation() {
  Check c;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rho(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> width(1, 4096);
  for (int i = 0; i < 10000 && c.ok; ++i) {
    const double rs = rho(rng), rt = rho(rng);
    const std::size_t n = width(rng);
    const auto d = estimate_dimensionality(rs, rt, n);
    const double sum = d.shape_dim_count + d.texture_dim_count + d.residual_dim_count;
    if (std::abs(sum - static_cast<double>(n)) > 1e-9 * static_cast<double>(n)) {
      c.fail("counts do not sum to N");
    }
    if (std::abs(d.shape_dim_ratio - 1.0 / (1.0 + std::exp(rt - rs))) > 1e-12) {
      c.fail("ratio deviates from the logistic form");
    }
  }
  return c;
}

Check trade_off() {
  Check c;
  const double rt = 0.3;
  const std::size_t n = 2048;
  auto prev = estimate_dimensionality(-1.0, rt, n);
  for (int k = 1; k < 1000; ++k) {
    const double rs = -1.0 + 2.0 * k / 999.0;
    const auto d = estimate_dimensionality(rs, rt, n);
    if (!(d.shape_dim_count > prev.shape_dim_count)) c.fail("shape count not increasing");
    if (!(d.texture_dim_count < prev.texture_dim_count)) c.fail("texture count not decreasing");
    prev = d;
  }
  return c;
}

Check statistics() {
  Check c;
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(0.1 * i - 1.7);
    y.push_back(2.0 * x.back() + 3.0);
  }
  if (std::abs(stats::pearson(x, y) - 1.0) > 1e-12) c.fail("pearson on a line");

  const double p = stats::pearson_p_value(0.5, 10);
  const double oracle = testing::t_test_p_by_quadrature(0.5, 10);
  if (std::abs(p - oracle) > 1e-8) c.fail("p-value deviates from quadrature");

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> shape(0.05, 0.35);
  std::normal_distribution<double> noise(0.0, 0.005);
  std::vector<double> shape_dim, texture_dim;
  for (int i = 0; i < 60; ++i) {
    shape_dim.push_back(shape(rng));
    texture_dim.push_back(0.45 - shape_dim.back() + noise(rng));
  }
  const auto fit = stats::ols_fit(shape_dim, texture_dim);
  if (std::abs(fit.slope + 1.0) > 0.1) c.fail("slope " + std::to_string(fit.slope));
  return c;
}

Check sampler() {
  Check c;
  const auto manifest = testing::synthetic_manifest(40, 5, 12);
  std::map<std::string, StimulusManifestEntry> by_id;
  for (const auto& e : manifest) by_id.emplace(e.image_id, e);
  for (Factor factor : {Factor::Shape, Factor::Texture}) {
    const auto capacity = enumerate_valid_pairs(manifest, factor);
    for (std::uint64_t seed : {1ULL, 42ULL, 0xdeadbeefULL}) {
      const auto drawn = sample_pairs(manifest, factor, 150, seed);
      for (const auto& [a, b] : drawn.pairs) {
        if (!is_valid_pair(by_id.at(a), by_id.at(b), factor)) c.fail("invalid pair sampled");
      }
      const auto again = sample_pairs(manifest, factor, 150, seed);
      if (format_pair_manifest(drawn) != format_pair_manifest(again)) c.fail("not deterministic");
    }
    const auto all = sample_pairs(manifest, factor, capacity, 5);
    std::set<std::pair<std::string, std::string>> seen(all.pairs.begin(), all.pairs.end());
    if (all.pairs.size() != capacity || seen.size() != capacity) c.fail("exhaustive draw");
  }
  return c;
}

Check end_to_end() {
  Check c;
  testing::ScratchDir dir("acceptance_e2e");
  const auto start = Clock::now();
  std::ostringstream out, err;
  const auto pool_dir = testing::fixture_dir() / "synthetic_pool";
  if (cli::run({"pool", (pool_dir / "pool.csv").string(), (pool_dir / "metrics.jsonl").string(),
                "--out-dir", dir.path().string()},
               out, err) != cli::kExitOk) {
    c.fail("pool failed: " + err.str());
    return c;
  }
  if (cli::run({"report", (dir / "merged.jsonl").string(), "--out-dir", dir.path().string()}, out,
               err) != cli::kExitOk) {
    c.fail("report failed: " + err.str());
    return c;
  }
  const auto reports = parse_report_csv(read_file(dir / "correlations.csv"));
  bool found = false;
  for (const auto& r : reports) {
    if (r.scope == kPoolScope && r.pair.x == Metric::Top1Accuracy && r.pair.y == Metric::ShapeBias) {
      found = true;
      if (std::abs(r.r - 0.6) > 0.1) c.fail("pool-wide r = " + std::to_string(r.r));
    }
  }
  if (!found) c.fail("no pool-wide accuracy/shape_bias row");

  const std::string svg = read_file(dir / "top1_accuracy_vs_shape_bias.svg");
  const bool well_formed = svg.rfind("<?xml", 0) == 0 && svg.find("<svg") != std::string::npos &&
                           svg.find("</svg>") != std::string::npos &&
                           svg.find("<circle") != std::string::npos;
  if (!well_formed) c.fail("scatter plot is not an SVG document");
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) c.fail("runtime " + std::to_string(elapsed) + " s");
  return c;
}

Check round_trips() {
  Check c;
  const auto dir = testing::fixture_dir();
  auto same = [&](const std::string& name, const std::function<std::string(const std::string&)>& f) {
    const std::string bytes = read_file(dir / name);
    if (f(bytes) != bytes) c.fail(name + " does not round-trip");
  };
  same("cue_conflict_1200.csv", [](const std::string& s) { return format_predictions(parse_predictions(s)); });
  same("probabilities.csv", [](const std::string& s) { return format_probabilities(parse_probabilities(s)); });
  same("pairs_3x2.actp", [](const std::string& s) { return format_activation_pairs(parse_activation_pairs(s)); });
  same("stimulus_manifest.csv",
       [](const std::string& s) { return format_stimulus_manifest(parse_stimulus_manifest(s)); });
  same("synthetic_pool/pool.csv", [](const std::string& s) { return format_model_pool(parse_model_pool(s)); });

  std::mt19937_64 rng(17);
  const auto pairs = testing::random_pairs(rng, Factor::Texture, 30, 9);
  if (format_activation_pairs(parse_activation_pairs(format_activation_pairs(pairs))) !=
      format_activation_pairs(pairs)) {
    c.fail("random ACTP does not round-trip");
  }
  const auto manifest = parse_stimulus_manifest(read_file(dir / "stimulus_manifest.csv"));
  const std::string drawn = format_pair_manifest(sample_pairs(manifest, Factor::Shape, 20, 3));
  if (format_pair_manifest(parse_pair_manifest(drawn)) != drawn) c.fail("pair manifest");

  std::vector<ModelRecord> pool = read_model_pool(dir / "synthetic_pool" / "pool.csv");
  pool = merge_metrics(pool, parse_metric_lines(read_file(dir / "synthetic_pool" / "metrics.jsonl")));
  const std::string results = format_results(pool);
  if (format_results(parse_results(results)) != results) c.fail("results JSON-lines");
  const auto metric_pairs = default_metric_pairs();
  const std::string report = format_report_csv(family_reports(pool, metric_pairs).reports);
  if (format_report_csv(parse_report_csv(report)) != report) c.fail("correlation report");

  std::set<std::string> covered;
  for (const auto& fixture : testing::kErrorFixtures) {
    covered.insert(fixture.file);
    const auto kind = testing::error_kind_of_fixture(dir / "errors" / fixture.file);
    if (kind != fixture.kind) {
      c.fail(std::string(fixture.file) + " raised " + (kind ? std::string(to_string(*kind)) : std::string("nothing")));
    }
  }
  for (const auto& entry : fs::directory_iterator(dir / "errors")) {
    if (!covered.count(entry.path().filename().string())) {
      c.fail("uncovered fixture " + entry.path().filename().string());
    }
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"shape bias equals naive recount", shape_bias_recount},
      {"factor correlation matches two-pass oracle", factor_correlation_oracle},
      {"dimensionality conservation", dimensionality_conservation},
      {"trade-off mechanics", trade_off},
      {"statistics", statistics},
      {"sampler", sampler},
      {"end-to-end synthetic pool", end_to_end},
      {"format round-trips and error paths", round_trips},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Check result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result.fail(std::string("exception: ") + e.what());
    }
    if (result.ok) {
      std::printf("PASS %s\n", name);
    } else {
      std::printf("FAIL %s: %s\n", name, result.detail.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
