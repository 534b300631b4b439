#include "odisal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace odisal {

namespace {

constexpr double kKlEps = 1e-10;

void check_fixations(const Raster& pred, const std::vector<PixelCoord>& fixations) {
  if (fixations.empty()) throw NoFixationsError("metric requires at least one fixation");
  for (const PixelCoord& f : fixations) {
    if (f.row < 0 || f.row >= pred.height() || f.col < 0 || f.col >= pred.width()) {
      throw InvalidArgumentError("fixation (" + std::to_string(f.row) + ", " +
                                 std::to_string(f.col) + ") outside the map");
    }
  }
}

void append_row(std::string& out, const MetricReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.name.c_str(), r.kl,
                r.cc, r.nss, r.auc, r.a);
  out += buf;
}

}  // namespace

double kl_div(const Raster& gt, const Raster& pred) {
  if (!gt.same_shape(pred)) throw ShapeMismatchError("kl_div: map shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    acc += gt[i] * std::log((gt[i] + kKlEps) / (pred[i] + kKlEps));
  }
  return acc;
}

double pearson_cc(const Raster& gt, const Raster& pred) {
  if (!gt.same_shape(pred)) throw ShapeMismatchError("pearson_cc: map shapes differ");
  std::size_t n = gt.size();
  double mean_g = gt.sum() / n;
  double mean_p = pred.sum() / n;
  double vg = 0.0, vp = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dg = gt[i] - mean_g;
    double dp = pred[i] - mean_p;
    vg += dg * dg;
    vp += dp * dp;
    cov += dg * dp;
  }
  if (vg <= 0.0 || vp <= 0.0) {
    throw ZeroVarianceError("pearson_cc: constant map has no correlation");
  }
  return cov / std::sqrt(vg * vp);
}

double nss(const Raster& pred, const std::vector<PixelCoord>& fixations) {
  check_fixations(pred, fixations);
  std::size_t n = pred.size();
  double mean = pred.sum() / n;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = pred[i] - mean;
    var += d * d;
  }
  double sd = std::sqrt(var / n);
  if (sd < 1e-12) return 0.0;
  double acc = 0.0;
  for (const PixelCoord& f : fixations) {
    acc += (pred.at(f.row, f.col) - mean) / sd;
  }
  return acc / static_cast<double>(fixations.size());
}

double auc_judd(const Raster& pred, const std::vector<PixelCoord>& fixations) {
  check_fixations(pred, fixations);

  std::vector<double> fix_values;
  fix_values.reserve(fixations.size());
  for (const PixelCoord& f : fixations) fix_values.push_back(pred.at(f.row, f.col));
  std::sort(fix_values.begin(), fix_values.end(), std::greater<>());

  std::vector<double> all_values = pred.values();
  std::sort(all_values.begin(), all_values.end(), std::greater<>());

  double n_fix = static_cast<double>(fix_values.size());
  double n_pix = static_cast<double>(all_values.size());

  // Thresholds descend, so TPR and FPR ascend along the curve.
  std::vector<std::pair<double, double>> points;  // (fpr, tpr)
  points.emplace_back(0.0, 0.0);
  std::size_t pix_idx = 0;
  for (std::size_t i = 0; i < fix_values.size(); ++i) {
    double t = fix_values[i];
    if (i + 1 < fix_values.size() && fix_values[i + 1] == t) continue;  // dedupe
    while (pix_idx < all_values.size() && all_values[pix_idx] >= t) ++pix_idx;
    double tpr = static_cast<double>(i + 1) / n_fix;
    double fpr = static_cast<double>(pix_idx) / n_pix;
    points.emplace_back(fpr, tpr);
  }
  points.emplace_back(1.0, 1.0);

  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].first - points[i - 1].first) * (points[i].second + points[i - 1].second) /
            2.0;
  }
  return area;
}

double integrated_metric(const MetricReport& r, const MetricNormalization& n) {
  return 0.25 * (-(r.kl - n.m_kl) / n.s_kl + (r.cc - n.m_cc) / n.s_cc +
                 (r.nss - n.m_nss) / n.s_nss + (r.auc - n.m_auc) / n.s_auc);
}

MetricNormalization fit_normalization(const std::vector<MetricReport>& reports) {
  if (reports.size() < 2) {
    throw InvalidArgumentError("fit_normalization needs at least 2 reports");
  }
  double n = static_cast<double>(reports.size());
  auto stats = [&](auto getter, double& mean, double& sd, const char* which) {
    mean = 0.0;
    for (const MetricReport& r : reports) mean += getter(r);
    mean /= n;
    double var = 0.0;
    for (const MetricReport& r : reports) {
      double d = getter(r) - mean;
      var += d * d;
    }
    sd = std::sqrt(var / n);
    if (sd <= 1e-12 * std::max(std::abs(mean), 1.0)) {
      throw DegenerateSetError(std::string("fit_normalization: zero spread in ") + which);
    }
  };
  MetricNormalization out;
  stats([](const MetricReport& r) { return r.kl; }, out.m_kl, out.s_kl, "kl");
  stats([](const MetricReport& r) { return r.cc; }, out.m_cc, out.s_cc, "cc");
  stats([](const MetricReport& r) { return r.nss; }, out.m_nss, out.s_nss, "nss");
  stats([](const MetricReport& r) { return r.auc; }, out.m_auc, out.s_auc, "auc");
  return out;
}

MetricReport evaluate_map(const std::string& name, const Raster& gt, const Raster& pred,
                          const std::vector<PixelCoord>& fixations,
                          const MetricNormalization& n) {
  MetricReport r;
  r.name = name;
  r.kl = kl_div(gt, pred);
  r.cc = pearson_cc(gt, pred);
  r.nss = nss(pred, fixations);
  r.auc = auc_judd(pred, fixations);
  r.a = integrated_metric(r, n);
  return r;
}

MetricReport mean_report(const std::vector<MetricReport>& reports, const MetricNormalization& n) {
  if (reports.empty()) throw EmptyInputError("mean_report: no reports");
  MetricReport m;
  m.name = "__mean__";
  for (const MetricReport& r : reports) {
    m.kl += r.kl;
    m.cc += r.cc;
    m.nss += r.nss;
    m.auc += r.auc;
  }
  double count = static_cast<double>(reports.size());
  m.kl /= count;
  m.cc /= count;
  m.nss /= count;
  m.auc /= count;
  m.a = integrated_metric(m, n);
  return m;
}

std::string report_csv(const std::vector<MetricReport>& reports, const MetricNormalization& n) {
  std::string out = "name,kl,cc,nss,auc,a\n";
  for (const MetricReport& r : reports) append_row(out, r);
  if (!reports.empty()) append_row(out, mean_report(reports, n));
  return out;
}

namespace {

void check_pipeline(const PipelineConfig& config) {
  if (!config.backend) throw InvalidArgumentError("sweep: pipeline backend is not set");
}

}  // namespace

BlurSweepResult sweep_blur(const std::vector<EvalCase>& cases, const PipelineConfig& config,
                           const ViewGrid& grid, const std::vector<double>& sigmas) {
  check_pipeline(config);
  if (cases.empty()) throw EmptyInputError("sweep_blur: no cases");

  BlurSweepResult result;
  result.sigmas = sigmas;
  std::sort(result.sigmas.begin(), result.sigmas.end());
  result.sigmas.erase(std::unique(result.sigmas.begin(), result.sigmas.end()),
                      result.sigmas.end());
  if (result.sigmas.empty() || result.sigmas.front() != 0.0) {
    throw InvalidArgumentError("sweep_blur: sigma list must include 0");
  }

  // Extraction, prediction, and integration do not depend on sigma; only the
  // final blur + normalization do.
  std::vector<FusedMap> unblurred;
  unblurred.reserve(cases.size());
  for (const EvalCase& c : cases) {
    EstimateOptions opts = config.options;
    opts.source_id = c.name;
    unblurred.push_back(estimate_unblurred(c.odi, *config.backend, grid, config.prior, opts));
  }

  double best_a = 0.0;
  for (std::size_t s = 0; s < result.sigmas.size(); ++s) {
    BlurSpec blur = config.blur;
    blur.sigma = result.sigmas[s];
    std::vector<MetricReport> reports;
    reports.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
      Raster pred = normalize_sum(gaussian_blur(unblurred[i].map, blur));
      reports.push_back(evaluate_map(cases[i].name, cases[i].gt, pred, cases[i].fixations,
                                     config.normalization));
    }
    MetricReport mean = mean_report(reports, config.normalization);
    mean.name = "sigma=" + std::to_string(result.sigmas[s]);
    if (s == 0 || mean.a > best_a) {
      best_a = mean.a;
      result.best_sigma = result.sigmas[s];
    }
    result.reports.push_back(std::move(reports));
    result.mean_reports.push_back(std::move(mean));
  }
  return result;
}

std::vector<IntervalSweepEntry> sweep_interval(const std::vector<EvalCase>& cases,
                                               const PipelineConfig& config, double fov,
                                               const std::vector<double>& intervals) {
  check_pipeline(config);
  if (cases.empty()) throw EmptyInputError("sweep_interval: no cases");
  if (intervals.empty()) throw EmptyInputError("sweep_interval: no intervals");
  if (std::holds_alternative<LatitudeBiasSet>(config.prior)) {
    throw InvalidArgumentError(
        "sweep_interval: latitude biases are bound to one grid; fit one per interval instead");
  }

  std::vector<IntervalSweepEntry> entries;
  for (double interval : intervals) {
    ViewGrid grid = view_grid(interval, fov);
    IntervalSweepEntry entry;
    entry.interval_deg = interval;
    entry.view_count = static_cast<int>(grid.frames.size());
    for (const EvalCase& c : cases) {
      EstimateOptions opts = config.options;
      opts.source_id = c.name;
      FusedMap fused = estimate(c.odi, *config.backend, grid, config.prior, config.blur, opts);
      entry.reports.push_back(
          evaluate_map(c.name, c.gt, fused.map, c.fixations, config.normalization));
    }
    entry.mean = mean_report(entry.reports, config.normalization);
    entry.mean.name = "interval=" + std::to_string(interval);
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace odisal
