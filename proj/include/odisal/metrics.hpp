#pragma once

#include <string>
#include <vector>

#include "odisal/fusion.hpp"
#include "odisal/raster.hpp"

namespace odisal {

/// Per-metric means and standard deviations used to standardize the four
/// metrics into the integrated metric a. Defaults follow the reference
/// operating point for this model family.
struct MetricNormalization {
  double m_kl = 0.400;
  double m_cc = 0.623;
  double m_nss = 0.806;
  double m_auc = 0.713;
  double s_kl = 0.035;
  double s_cc = 0.055;
  double s_nss = 0.072;
  double s_auc = 0.016;
};

struct MetricReport {
  std::string name;
  double kl = 0.0;
  double cc = 0.0;
  double nss = 0.0;
  double auc = 0.0;
  double a = 0.0;
};

/// KL divergence sum(gt * log((gt+eps)/(pred+eps))), eps = 1e-10. Both maps
/// are expected to be normalized to sum 1.
double kl_div(const Raster& gt, const Raster& pred);

/// Pearson correlation over all pixels. Throws ZeroVarianceError when either
/// map is constant.
double pearson_cc(const Raster& gt, const Raster& pred);

/// Mean z-scored saliency at the fixation pixels; 0 for (near-)constant maps.
double nss(const Raster& pred, const std::vector<PixelCoord>& fixations);

/// AUC-Judd: thresholds are the saliency values at fixations, TPR counts
/// fixations, FPR counts all pixels; trapezoidal area through (0,0), (1,1).
double auc_judd(const Raster& pred, const std::vector<PixelCoord>& fixations);

/// a = 1/4 (-(KL-m)/s + (CC-m)/s + (NSS-m)/s + (AUC-m)/s).
double integrated_metric(const MetricReport& r, const MetricNormalization& n);

/// Per-metric mean and population standard deviation over the reports.
/// Throws DegenerateSetError when any metric has zero spread.
MetricNormalization fit_normalization(const std::vector<MetricReport>& reports);

/// All four metrics plus the integrated metric for one estimated map.
MetricReport evaluate_map(const std::string& name, const Raster& gt, const Raster& pred,
                          const std::vector<PixelCoord>& fixations,
                          const MetricNormalization& n = {});

/// Mean of the per-report metrics; `a` is recomputed from the means, which
/// equals the mean of per-report a under a fixed normalization.
MetricReport mean_report(const std::vector<MetricReport>& reports,
                         const MetricNormalization& n = {});

/// CSV with header `name,kl,cc,nss,auc,a`, one row per report and a final
/// `__mean__` row.
std::string report_csv(const std::vector<MetricReport>& reports,
                       const MetricNormalization& n = {});

/// One dataset item for pipeline sweeps.
struct EvalCase {
  std::string name;
  Raster odi;
  Raster gt;  // normalized
  std::vector<PixelCoord> fixations;
};

/// Estimation pipeline settings shared by the sweep protocols.
struct PipelineConfig {
  const SaliencyBackend* backend = nullptr;
  Prior prior;
  EstimateOptions options;
  BlurSpec blur;  // sigma used by sweep_interval; sweep_blur overrides sigma
  MetricNormalization normalization;
};

struct BlurSweepResult {
  double best_sigma = 0.0;
  std::vector<double> sigmas;                      // ascending
  std::vector<std::vector<MetricReport>> reports;  // per sigma, per case
  std::vector<MetricReport> mean_reports;          // per sigma
};

/// Evaluates the pipeline at each blur size and returns the sigma with the
/// highest mean integrated metric; ties break toward the smaller sigma.
/// The sigma list must include 0 (the no-blur candidate).
BlurSweepResult sweep_blur(const std::vector<EvalCase>& cases, const PipelineConfig& config,
                           const ViewGrid& grid, const std::vector<double>& sigmas);

struct IntervalSweepEntry {
  double interval_deg = 0.0;
  int view_count = 0;
  std::vector<MetricReport> reports;
  MetricReport mean;
};

/// Evaluates the pipeline once per viewing-direction interval. Method B
/// priors are grid-bound and not supported here.
std::vector<IntervalSweepEntry> sweep_interval(const std::vector<EvalCase>& cases,
                                               const PipelineConfig& config, double fov,
                                               const std::vector<double>& intervals);

}  // namespace odisal
