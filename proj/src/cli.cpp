#include "shapebias/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shapebias/behavioral.hpp"
#include "shapebias/dimensionality.hpp"
#include "shapebias/error.hpp"
#include "shapebias/formats.hpp"
#include "shapebias/pool.hpp"
#include "shapebias/sampler.hpp"
#include "shapebias/stats.hpp"

namespace shapebias::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string merged;
  std::string out_dir = ".";
  std::string factor;
  std::uint64_t seed = 0;
  std::size_t pair_count = kDefaultPairCount;
  std::size_t min_family_size = kDefaultMinFamilySize;
  std::vector<std::string> metric_pairs;
};

void require_input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorKind::Io, "input '" + path.string() + "' is not a readable file");
  }
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw Error(ErrorKind::Io, "cannot use output directory '" + dir + "'");
  }
  return path;
}

json tally_json(const ShapeTally& tally) {
  json j;
  j["correct_shape_count"] = tally.correct_shape;
  j["correct_texture_count"] = tally.correct_texture;
  j["other_count"] = tally.other;
  return j;
}

int behavioral(const RunConfig& config, std::ostream& out) {
  const fs::path path(config.inputs.at(0));
  require_input(path);
  const std::string content = read_file(path);

  json result;
  std::vector<CueConflictRecord> records;
  if (is_probability_variant(content)) {
    const auto rows = parse_probabilities(content);
    auto aggregated = aggregate_probabilities(rows, AggregationRule::Mean);
    records = std::move(aggregated.records);
    result["source"] = "probabilities";
    result["aggregation_rule"] = to_string(aggregated.rule);
  } else {
    records = parse_predictions(content);
    result["source"] = "predictions";
  }

  const auto overall = compute_shape_bias(records);
  result.update(tally_json(overall.tally));
  result["total"] = overall.tally.total();
  result["shape_bias"] = overall.shape_bias;

  json per_class = json::object();
  const auto& labels = cue_conflict_labels();
  for (const auto& [index, entry] : per_class_shape_bias(records)) {
    json item = tally_json(entry.tally);
    item["shape_bias"] = entry.shape_bias ? json(*entry.shape_bias) : json(nullptr);
    per_class[labels.at(index).name] = std::move(item);
  }
  result["per_class"] = std::move(per_class);
  out << result.dump() << '\n';
  return kExitOk;
}

int dimensionality(const RunConfig& config, std::ostream& out) {
  const fs::path shape_path(config.inputs.at(0));
  const fs::path texture_path(config.inputs.at(1));
  require_input(shape_path);
  require_input(texture_path);
  const auto shape = read_activation_pairs(shape_path);
  const auto texture = read_activation_pairs(texture_path);
  const auto r = model_dimensionality(shape, texture);

  json j;
  j["shape_dim"] = r.shape_dim_fraction;
  j["texture_dim"] = r.texture_dim_fraction;
  j["residual_dim"] = r.residual_dim_fraction;
  j["shape_dim_ratio"] = r.shape_dim_ratio;
  j["shape_dim_count"] = r.shape_dim_count;
  j["texture_dim_count"] = r.texture_dim_count;
  j["residual_dim_count"] = r.residual_dim_count;
  j["neuron_count"] = r.neuron_count;
  j["rho_shape"] = r.rho_shape;
  j["rho_texture"] = r.rho_texture;
  j["valid_neurons_shape"] = r.valid_neurons_shape;
  j["valid_neurons_texture"] = r.valid_neurons_texture;
  j["pair_count_shape"] = shape.pair_count();
  j["pair_count_texture"] = texture.pair_count();
  out << j.dump() << '\n';
  return kExitOk;
}

int sample(const RunConfig& config, std::ostream& out) {
  const fs::path manifest_path(config.inputs.at(0));
  require_input(manifest_path);
  const Factor factor = parse_factor(config.factor);
  const fs::path dir = prepare_out_dir(config.out_dir);

  const auto manifest = read_stimulus_manifest(manifest_path);
  const auto capacity = enumerate_valid_pairs(manifest, factor);
  const auto pairs = sample_pairs(manifest, factor, config.pair_count, config.seed);
  const fs::path target = dir / ("pairs_" + std::string(to_string(factor)) + ".csv");
  write_pair_manifest(target, pairs);

  json j;
  j["factor"] = to_string(factor);
  j["seed"] = config.seed;
  j["count"] = pairs.pairs.size();
  j["capacity"] = capacity;
  j["path"] = target.string();
  out << j.dump() << '\n';
  return kExitOk;
}

int merge(const RunConfig& config, std::ostream& out) {
  const fs::path pool_path(config.inputs.at(0));
  const fs::path metrics_path(config.inputs.at(1));
  require_input(pool_path);
  require_input(metrics_path);
  const fs::path dir = prepare_out_dir(config.out_dir);

  auto pool = read_model_pool(pool_path);
  const auto updates = parse_metric_lines(read_file(metrics_path));
  pool = merge_metrics(std::move(pool), updates);
  const fs::path target = dir / "merged.jsonl";
  write_file_atomic(target, format_results(pool));

  json j;
  j["models"] = pool.size();
  j["path"] = target.string();
  out << j.dump() << '\n';
  return kExitOk;
}

int report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const fs::path merged_path(config.merged);
  require_input(merged_path);
  std::vector<MetricPair> pairs;
  for (const auto& text : config.metric_pairs) pairs.push_back(parse_metric_pair(text));
  if (pairs.empty()) pairs = default_metric_pairs();
  const fs::path dir = prepare_out_dir(config.out_dir);

  const auto pool = read_results(merged_path);
  const auto set = family_reports(pool, pairs, config.min_family_size);
  for (const auto& warning : set.warnings) err << "warning: " << warning << '\n';
  for (const auto& r : set.reports) {
    if (r.p_clamped) {
      err << "warning: p-value for " << r.scope << " " << to_string(r.pair.x) << " vs "
          << to_string(r.pair.y) << " is below " << stats::kMinPValue << "; reported as the floor\n";
    }
  }

  const fs::path csv_path = dir / "correlations.csv";
  write_file_atomic(csv_path, format_report_csv(set.reports));
  json plots = json::array();
  for (const auto& r : set.reports) {
    if (r.scope != kPoolScope) continue;
    const fs::path svg = dir / (std::string(to_string(r.pair.x)) + "_vs_" +
                                std::string(to_string(r.pair.y)) + ".svg");
    emit_scatter(pool, r.pair, r, svg);
    plots.push_back(svg.string());
  }

  json j;
  j["reports"] = set.reports.size();
  j["families"] = set.families;
  j["csv"] = csv_path.string();
  j["plots"] = std::move(plots);
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Shape/texture bias analysis engine", "shapebias"};
  app.require_subcommand(1);

  auto* behavioral_cmd = app.add_subcommand("behavioral", "Shape bias from cue-conflict predictions");
  behavioral_cmd->add_option("predictions", config.inputs, "Predictions CSV")
      ->required()->expected(1);

  auto* dim_cmd = app.add_subcommand("dimensionality", "Shape/texture dimensionality from ACTP pairs");
  dim_cmd->add_option("activations", config.inputs, "Shape ACTP then texture ACTP")
      ->required()->expected(2);

  auto* sample_cmd = app.add_subcommand("sample-pairs", "Sample a pair manifest");
  sample_cmd->add_option("manifest", config.inputs, "Stimulus manifest CSV")
      ->required()->expected(1);
  sample_cmd->add_option("--factor", config.factor, "shape|texture")
      ->required()->check(CLI::IsMember({"shape", "texture"}));
  sample_cmd->add_option("--count", config.pair_count, "Number of pairs P")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", config.seed, "splitmix64 seed");
  sample_cmd->add_option("--out-dir", config.out_dir, "Output directory");

  auto* pool_cmd = app.add_subcommand("pool", "Merge metrics into the model pool");
  pool_cmd->add_option("inputs", config.inputs, "Model pool CSV then metrics JSON-lines")
      ->required()->expected(2);
  pool_cmd->add_option("--out-dir", config.out_dir, "Output directory");

  auto* report_cmd = app.add_subcommand("report", "Correlation report and scatter plots");
  report_cmd->add_option("merged", config.merged, "Merged results JSON-lines")->required();
  report_cmd->add_option("pairs", config.metric_pairs, "Metric pairs x_metric:y_metric");
  report_cmd->add_option("--out-dir", config.out_dir, "Output directory");
  report_cmd->add_option("--min-family-size", config.min_family_size, "Minimum models per family")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "shapebias: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (behavioral_cmd->parsed()) return behavioral(config, out);
    if (dim_cmd->parsed()) return dimensionality(config, out);
    if (sample_cmd->parsed()) return sample(config, out);
    if (pool_cmd->parsed()) return merge(config, out);
    return report(config, out, err);
  } catch (const Error& e) {
    err << "shapebias: " << e.what() << '\n';
    return e.is_io() ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "shapebias: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace shapebias::cli
