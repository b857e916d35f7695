#ifndef OED_HARNESS_HPP
#define OED_HARNESS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "oed/optimizers.hpp"

namespace oed {

/// Everything a run needs, assembled from a preset or a JSON config file.
struct ExperimentConfig {
  std::string name = "custom";
  ModelPtr model;
  Prior prior = Prior::uniform(Vector::Constant(1, 0.0), Vector::Constant(1, 1.0));
  NoiseModel noise = NoiseModel::diagonal(Vector::Constant(1, 1.0));
  int n_exp = 1;
  EstimatorConfig estimator;
  GradientConfig gradient;
  OptimizerConfig optimizer;
  Vector xi0;
  int replications = 10;
  std::uint64_t seed = 2016;
  std::filesystem::path out_dir = "out";

  BayesProblem problem() const { return BayesProblem(model, prior, noise, n_exp); }
};

/// Parse a config file; errors carry the offending JSON path. A "preset" key
/// pulls in a preset first, with the remaining keys applied on top.
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig load_config_json(const std::string& text);

ExperimentConfig preset(const std::string& name);
std::vector<std::pair<std::string, std::string>> preset_catalog();

struct ReplicationResult {
  int replication = 0;
  Vector terminal_xi;
  std::uint64_t ncfm = 0;
  std::uint64_t gradient_draws = 0;
  int iterations = 0;
  int restarts = 0;
  StopReason stop = StopReason::max_iters;
};

struct RunReport {
  std::string name;
  std::vector<ReplicationResult> runs;
  double mean_ncfm = 0.0;
  double median_ncfm = 0.0;
  double mean_gradient_draws = 0.0;
  Vector mean_terminal_xi;
  EIGEstimate eig_initial;
  EIGEstimate eig_terminal;  // at the replication-mean terminal design
};

struct GradcheckPoint {
  Vector xi;
  Vector grad_sg_la;        // batch mean of sg_la
  Vector grad_sg_mcis;      // full_gradient(sg_mcis)
  Vector grad_fd_mcla;      // central FD of eig_mcla under common random numbers
  double max_rel_discrepancy = 0.0;
  double norm_sg_mcis = 0.0;
};

struct GradcheckReport {
  std::vector<GradcheckPoint> points;
  double max_rel_discrepancy = 0.0;
};

/// `estimate`: the named estimator at a fixed design.
EIGEstimate run_estimate(const ExperimentConfig& config, const Vector& xi);

/// `optimize`: seeded replications, one trace file per run plus the aggregate
/// report. Replications run concurrently when workers > 1; the merge is by
/// replication index, so output is independent of scheduling.
RunReport run_optimize(const ExperimentConfig& config, bool write_files = true,
                       bool evaluate_eig = true);

/// `gradcheck`: cross-validates the three gradient routes at the given designs.
GradcheckReport run_gradcheck(const ExperimentConfig& config, const std::vector<Vector>& points);

/// `contour`: estimator sweep over a rectangular design grid; returns CSV rows
/// (xi1, xi2, value, std_error) and optionally writes them.
struct ContourGrid {
  double x1_lo, x1_hi;
  int n1;
  double x2_lo, x2_hi;
  int n2;
};
std::vector<std::array<double, 4>> run_contour(const ExperimentConfig& config,
                                               const ContourGrid& grid);

void write_trace_csv(const OptimizerTrace& trace, std::ostream& os);
void write_trace_csv(const OptimizerTrace& trace, const std::filesystem::path& path);
void write_report_json(const RunReport& report, const std::filesystem::path& path);
std::string report_to_json(const RunReport& report);

std::string to_string(StopReason reason);

}  // namespace oed

#endif  // OED_HARNESS_HPP
