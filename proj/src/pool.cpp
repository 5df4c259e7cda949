#include "shapebias/pool.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "csv.hpp"
#include "shapebias/error.hpp"
#include "shapebias/stats.hpp"

namespace shapebias {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Top1Accuracy: return "top1_accuracy";
    case Metric::ShapeBias: return "shape_bias";
    case Metric::ShapeDimRatio: return "shape_dim_ratio";
    case Metric::ShapeDim: return "shape_dim";
    case Metric::TextureDim: return "texture_dim";
  }
  return "";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::Top1Accuracy, Metric::ShapeBias, Metric::ShapeDimRatio, Metric::ShapeDim,
                   Metric::TextureDim}) {
    if (to_string(m) == text) return m;
  }
  throw Error(ErrorKind::Input, "unknown metric '" + std::string(text) + "'");
}

std::optional<double> metric_value(const ModelRecord& record, Metric metric) {
  switch (metric) {
    case Metric::Top1Accuracy: return record.top1_accuracy;
    case Metric::ShapeBias: return record.shape_bias;
    case Metric::ShapeDimRatio: return record.shape_dim_ratio;
    case Metric::ShapeDim: return record.shape_dim;
    case Metric::TextureDim: return record.texture_dim;
  }
  return std::nullopt;
}

MetricPair::MetricPair(Metric x_metric, Metric y_metric) : x(x_metric), y(y_metric) {
  if (x == y) {
    throw Error(ErrorKind::Input, "metric pair needs two different metrics, got " +
                                      std::string(to_string(x)) + " twice");
  }
}

MetricPair parse_metric_pair(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::Input, "metric pair '" + std::string(text) + "' must be x:y");
  }
  return MetricPair(parse_metric(text.substr(0, colon)), parse_metric(text.substr(colon + 1)));
}

std::vector<MetricPair> default_metric_pairs() {
  return {
      {Metric::Top1Accuracy, Metric::ShapeBias},
      {Metric::Top1Accuracy, Metric::ShapeDimRatio},
      {Metric::ShapeBias, Metric::ShapeDimRatio},
      {Metric::ShapeDim, Metric::TextureDim},
      {Metric::Top1Accuracy, Metric::TextureDim},
  };
}

CorrelationReport correlate(std::span<const ModelRecord> pool, const MetricPair& pair,
                            std::string scope) {
  std::vector<double> xs, ys;
  for (const auto& model : pool) {
    const auto x = metric_value(model, pair.x);
    const auto y = metric_value(model, pair.y);
    if (x && y) {
      xs.push_back(*x);
      ys.push_back(*y);
    }
  }
  CorrelationReport report{std::move(scope), pair};
  report.n = xs.size();
  report.r = stats::pearson(xs, ys);
  const auto p = stats::pearson_p_value_detail(report.r, report.n);
  report.p_two_sided = p.p;
  report.p_clamped = p.clamped;
  const auto fit = stats::ols_fit(xs, ys);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  return report;
}

FamilyReportSet family_reports(std::span<const ModelRecord> pool, std::span<const MetricPair> pairs,
                               std::size_t min_family_size) {
  std::map<std::string, std::vector<ModelRecord>> by_family;
  for (const auto& model : pool) by_family[model.family].push_back(model);

  FamilyReportSet out;
  std::vector<std::pair<std::string, std::span<const ModelRecord>>> scopes;
  scopes.emplace_back(std::string(kPoolScope), pool);
  for (const auto& [family, members] : by_family) {
    if (members.size() >= min_family_size) {
      out.families.push_back(family);
      scopes.emplace_back(family, members);
    }
  }
  if (out.families.empty()) {
    out.no_qualifying_family = true;
    out.warnings.push_back("no family has at least " + std::to_string(min_family_size) +
                           " models");
  }

  const auto tasks = static_cast<std::int64_t>(scopes.size() * pairs.size());
  std::vector<std::optional<CorrelationReport>> slots(static_cast<std::size_t>(tasks));
  std::vector<std::string> notes(static_cast<std::size_t>(tasks));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    const auto task = static_cast<std::size_t>(t);
    const auto& [scope, members] = scopes[task / pairs.size()];
    const auto& pair = pairs[task % pairs.size()];
    try {
      slots[task] = correlate(members, pair, scope);
    } catch (const Error& e) {
      notes[task] = "skipped " + scope + " " + std::string(to_string(pair.x)) + " vs " +
                    std::string(to_string(pair.y)) + ": " + e.what();
    }
  }

  for (std::size_t task = 0; task < slots.size(); ++task) {
    if (slots[task]) out.reports.push_back(std::move(*slots[task]));
    if (!notes[task].empty()) out.warnings.push_back(std::move(notes[task]));
  }
  return out;
}

std::vector<ModelRecord> merge_metrics(std::vector<ModelRecord> pool,
                                       std::span<const MetricUpdate> updates) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pool.size(); ++i) index.emplace(pool[i].model_id, i);

  for (const auto& update : updates) {
    const auto it = index.find(update.model_id);
    if (it == index.end()) {
      throw Error(ErrorKind::Integrity, "metrics line " + std::to_string(update.line) +
                                            ": model '" + update.model_id + "' not in pool");
    }
    auto& model = pool[it->second];
    for (const auto& [key, value] : update.values) {
      std::optional<double>* field = nullptr;
      if (key == "shape_bias") field = &model.shape_bias;
      else if (key == "shape_dim") field = &model.shape_dim;
      else if (key == "texture_dim") field = &model.texture_dim;
      else if (key == "residual_dim") field = &model.residual_dim;
      else if (key == "shape_dim_ratio") field = &model.shape_dim_ratio;
      else continue;
      if (*field && **field != value) {
        throw Error(ErrorKind::Integrity, "metrics line " + std::to_string(update.line) +
                                              ": conflicting " + key + " for model '" +
                                              update.model_id + "'");
      }
      *field = value;
    }
  }
  for (const auto& model : pool) validate(model);
  return pool;
}

std::string format_report_csv(std::span<const CorrelationReport> reports) {
  std::string out(kReportHeader);
  out += '\n';
  for (const auto& r : reports) {
    out += r.scope + ',' + std::string(to_string(r.pair.x)) + ',' +
           std::string(to_string(r.pair.y)) + ',' + std::to_string(r.n) + ',' +
           format_double(r.r) + ',' + format_double(r.p_two_sided) + ',' +
           format_double(r.slope) + ',' + format_double(r.intercept) + '\n';
  }
  return out;
}

std::vector<CorrelationReport> parse_report_csv(std::string_view content) {
  std::vector<CorrelationReport> reports;
  csv::for_each_row(content, kReportHeader, 8, [&](const csv::Row& row) {
    const auto& f = row.fields;
    if (f[0].empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(row.line) + ": empty scope");
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), n);
    if (f[3].empty() || ec != std::errc{} || ptr != f[3].data() + f[3].size()) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(row.line) + ": invalid n");
    }
    CorrelationReport report{std::string(f[0]), MetricPair(parse_metric(f[1]), parse_metric(f[2]))};
    report.n = n;
    report.r = csv::parse_number(f[4], row.line);
    report.p_two_sided = csv::parse_number(f[5], row.line);
    report.p_clamped = report.p_two_sided == stats::kMinPValue;
    report.slope = csv::parse_number(f[6], row.line);
    report.intercept = csv::parse_number(f[7], row.line);
    reports.push_back(std::move(report));
  });
  return reports;
}

}  // namespace shapebias
