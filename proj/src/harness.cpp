#include "oed/harness.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "oed/models.hpp"
#include "oed/parallel.hpp"

namespace oed {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError("config." + path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) config_fail(path + "." + key, "missing");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array()) config_fail(path, "expected an array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) config_fail(path, "expected a row-major nested array");
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    Vector row = as_vector(j[i], path + "[" + std::to_string(i) + "]");
    if (row.size() != m.cols()) config_fail(path, "ragged rows");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

FDScheme parse_fd(const json& j, const std::string& path) {
  std::string mode = j.contains("mode") ? as_string(j["mode"], path + ".mode") : "forward";
  FDScheme fd;
  if (mode == "forward")
    fd = FDScheme::forward();
  else if (mode == "central")
    fd = FDScheme::central();
  else
    config_fail(path + ".mode", "must be 'forward' or 'central'");
  if (j.contains("rel_step")) fd.rel_step = as_number(j["rel_step"], path + ".rel_step");
  fd.validate();
  return fd;
}

ModelPtr parse_model(const json& j, const std::string& path) {
  std::string name = as_string(require(j, "name", path), path + ".name");
  if (name == "example1_quadratic") {
    Eigen::Index n = j.contains("n") ? as_int(j["n"], path + ".n") : 20;
    return make_example1_quadratic(n);
  }
  if (name == "example2_quadratic_oed") {
    if (j.contains("A")) return make_example2_quadratic_oed(as_matrix(j["A"], path + ".A"));
    return make_example2_quadratic_oed();
  }
  if (name == "timoshenko") {
    TimoshenkoParams p;
    if (j.contains("length")) p.length = as_number(j["length"], path + ".length");
    if (j.contains("height")) p.height = as_number(j["height"], path + ".height");
    if (j.contains("base")) p.base = as_number(j["base"], path + ".base");
    if (j.contains("load")) p.load = as_number(j["load"], path + ".load");
    if (j.contains("shear_factor"))
      p.shear_factor = as_number(j["shear_factor"], path + ".shear_factor");
    return make_timoshenko(p);
  }
  if (name == "linear_gaussian") {
    Matrix J = j.contains("J") ? as_matrix(j["J"], path + ".J") : Matrix::Identity(1, 1);
    Vector offset = j.contains("offset") ? as_vector(j["offset"], path + ".offset") : Vector();
    Eigen::Index dim_xi = j.contains("dim_xi") ? as_int(j["dim_xi"], path + ".dim_xi") : 1;
    return make_linear_gaussian(std::move(J), std::move(offset), dim_xi);
  }
  config_fail(path + ".name", "unknown model '" + name + "'");
}

Prior parse_prior(const json& j, const std::string& path) {
  std::string kind = as_string(require(j, "kind", path), path + ".kind");
  if (kind == "gaussian") {
    Vector mean = as_vector(require(j, "mean", path), path + ".mean");
    if (j.contains("cov")) return Prior::gaussian(mean, as_matrix(j["cov"], path + ".cov"));
    if (j.contains("sd")) {
      Vector sd = as_vector(j["sd"], path + ".sd");
      return Prior::gaussian(mean, Matrix(sd.array().square().matrix().asDiagonal()));
    }
    config_fail(path, "gaussian prior needs 'cov' or 'sd'");
  }
  if (kind == "uniform") {
    return Prior::uniform(as_vector(require(j, "lo", path), path + ".lo"),
                          as_vector(require(j, "hi", path), path + ".hi"));
  }
  config_fail(path + ".kind", "must be 'gaussian' or 'uniform'");
}

NoiseModel parse_noise(const json& j, const std::string& path) {
  if (j.contains("cov")) return NoiseModel(as_matrix(j["cov"], path + ".cov"));
  if (j.contains("sd")) {
    Vector sd = as_vector(j["sd"], path + ".sd");
    return NoiseModel::diagonal(sd.array().square());
  }
  config_fail(path, "noise needs 'cov' or 'sd'");
}

void parse_estimator(const json& j, const std::string& path, EstimatorConfig& out) {
  if (j.contains("kind"))
    out.kind = estimator_kind_from_name(as_string(j["kind"], path + ".kind"));
  if (j.contains("n_outer")) out.n_outer = as_int(j["n_outer"], path + ".n_outer");
  if (j.contains("m_inner")) out.m_inner = as_int(j["m_inner"], path + ".m_inner");
  if (j.contains("fd")) out.fd_scheme = parse_fd(j["fd"], path + ".fd");
  out.validate();
}

void parse_gradient(const json& j, const std::string& path, GradientConfig& out) {
  if (j.contains("kind"))
    out.kind = gradient_kind_from_name(as_string(j["kind"], path + ".kind"));
  if (j.contains("batch")) out.batch = as_int(j["batch"], path + ".batch");
  if (j.contains("m_inner")) out.m_inner = as_int(j["m_inner"], path + ".m_inner");
  if (j.contains("fd")) out.fd_scheme = parse_fd(j["fd"], path + ".fd");
  out.validate();
}

void parse_optimizer(const json& j, const std::string& path, ExperimentConfig& cfg) {
  OptimizerConfig& out = cfg.optimizer;
  if (j.contains("method")) out.method = opt_method_from_name(as_string(j["method"], path + ".method"));
  if (j.contains("alpha0")) out.alpha0 = as_number(j["alpha0"], path + ".alpha0");
  if (j.contains("q")) out.q = as_number(j["q"], path + ".q");
  if (j.contains("schedule")) {
    std::string s = as_string(j["schedule"], path + ".schedule");
    if (s == "constant")
      out.schedule = StepSchedule::constant;
    else if (s == "inv_sqrt")
      out.schedule = StepSchedule::inv_sqrt;
    else
      config_fail(path + ".schedule", "must be 'constant' or 'inv_sqrt'");
  }
  if (j.contains("max_iters")) out.max_iters = as_int(j["max_iters"], path + ".max_iters");
  if (j.contains("max_ncfm"))
    out.max_ncfm = static_cast<std::uint64_t>(as_number(j["max_ncfm"], path + ".max_ncfm"));
  if (j.contains("tol")) out.tol = as_number(j["tol"], path + ".tol");
  if (j.contains("xi0")) cfg.xi0 = as_vector(j["xi0"], path + ".xi0");
  if (j.contains("target")) out.target = as_vector(j["target"], path + ".target");
}

// ---------------------------------------------------------------------------
// Presets

ExperimentConfig example1_base(double sigma_theta) {
  ExperimentConfig cfg;
  cfg.model = make_example1_quadratic(20);
  Vector mean = Vector::Zero(20);
  cfg.prior = Prior::gaussian(
      mean, sigma_theta * sigma_theta * Matrix::Identity(20, 20));
  cfg.noise = NoiseModel::diagonal(Vector::Constant(1, 1.0));
  cfg.n_exp = 1;
  cfg.gradient.kind = GradientKind::analytic;
  cfg.optimizer.method = OptMethod::rasgd;
  cfg.optimizer.alpha0 = 2.0 / 21.0;
  cfg.optimizer.schedule = StepSchedule::inv_sqrt;
  cfg.optimizer.max_iters = 60000;
  cfg.optimizer.projection_box = cfg.model->bounds();
  cfg.optimizer.target = Vector::Zero(20);
  cfg.optimizer.tol = 1e-2;
  cfg.xi0 = Vector::Zero(20);
  cfg.xi0[0] = 10.0;  // mass on the slowest coordinate
  cfg.estimator.kind = EstimatorKind::mcla;
  cfg.estimator.n_outer = 100;
  return cfg;
}

ExperimentConfig example2_base() {
  ExperimentConfig cfg;
  cfg.model = make_example2_quadratic_oed();
  cfg.prior = Prior::gaussian(Vector::Zero(1), 1e-4 * Matrix::Identity(1, 1));
  cfg.noise = NoiseModel::diagonal(Vector::Constant(1, 1e-4));
  cfg.n_exp = 1;
  cfg.estimator.kind = EstimatorKind::mcla;
  cfg.estimator.n_outer = 966;
  cfg.optimizer.alpha0 = 1.0;
  cfg.optimizer.schedule = StepSchedule::inv_sqrt;
  cfg.optimizer.max_iters = 20000;
  cfg.optimizer.projection_box = cfg.model->bounds();
  cfg.optimizer.target = Vector::Zero(2);
  cfg.optimizer.tol = 1e-2;
  cfg.xi0 = Vector::Constant(2, 1.5);
  return cfg;
}

// Table-2 sample sizes per estimator family.
void example2_apply_estimator(ExperimentConfig& cfg, const std::string& est) {
  if (est == "mc") {
    cfg.gradient.kind = GradientKind::sg_mc;
    cfg.gradient.m_inner = 80;
    cfg.estimator.kind = EstimatorKind::dlmc;
    cfg.estimator.n_outer = 2447;
    cfg.estimator.m_inner = 80;
  } else if (est == "mcis") {
    cfg.gradient.kind = GradientKind::sg_mcis;
    cfg.gradient.m_inner = 7;
    cfg.estimator.kind = EstimatorKind::dlmcis;
    cfg.estimator.n_outer = 2402;
    cfg.estimator.m_inner = 7;
  } else if (est == "la") {
    cfg.gradient.kind = GradientKind::sg_la;
    cfg.estimator.kind = EstimatorKind::mcla;
    cfg.estimator.n_outer = 966;
  } else {
    throw ConfigError("unknown example2 estimator suffix '" + est + "'");
  }
}

void example2_apply_method(ExperimentConfig& cfg, const std::string& method) {
  cfg.optimizer.method = opt_method_from_name(method);
  cfg.optimizer.q = 0.0;
  if (cfg.optimizer.method == OptMethod::fgd) {
    cfg.optimizer.schedule = StepSchedule::constant;
    // full gradient: batch = the estimator's N*
    cfg.gradient.batch = cfg.estimator.n_outer;
    cfg.optimizer.max_iters = 2000;
    cfg.optimizer.max_ncfm = 30000000;  // 3e7 cap, the paper's costliest cell
  }
}

ExperimentConfig timoshenko_case(int c) {
  struct CaseRow {
    int n_exp;
    double sE, sG, se1, se2;  // prior sd (MPa), noise sd (strain)
  };
  // Tabulated problem parameters; priors stated in GPa, held in MPa.
  static constexpr CaseRow rows[4] = {
      {3, 9000.0, 3460.0, 6.25e-4, 1.30e-4},
      {1, 6000.0, 2310.0, 3.75e-4, 0.78e-4},
      {1, 6000.0, 460.0, 3.75e-4, 0.78e-4},
      {1, 1200.0, 2310.0, 3.75e-4, 0.78e-4},
  };
  const CaseRow& row = rows[c - 1];
  ExperimentConfig cfg;
  cfg.model = make_timoshenko();
  cfg.prior = Prior::gaussian((Vector(2) << 30000.0, 11540.0).finished(),
                              (Vector(2) << row.sE * row.sE, row.sG * row.sG)
                                  .finished()
                                  .asDiagonal());
  cfg.noise = NoiseModel::diagonal((Vector(2) << row.se1 * row.se1, row.se2 * row.se2).finished());
  cfg.n_exp = row.n_exp;
  cfg.estimator.kind = EstimatorKind::mcla;
  cfg.estimator.n_outer = 1000;
  cfg.gradient.kind = GradientKind::sg_la;
  cfg.optimizer.method = OptMethod::rasgd;
  cfg.optimizer.alpha0 = 1e5;
  cfg.optimizer.schedule = StepSchedule::inv_sqrt;
  cfg.optimizer.max_iters = 500;
  cfg.optimizer.projection_box = cfg.model->bounds();
  cfg.xi0 = (Vector(2) << 5500.0, -100.0).finished();
  return cfg;
}

ExperimentConfig linear_gaussian_preset() {
  ExperimentConfig cfg;
  Matrix J(2, 2);
  J << 1.0, 0.4, 0.2, 0.8;
  cfg.model = make_linear_gaussian(J, Vector::Zero(2), 2);
  cfg.prior = Prior::gaussian((Vector(2) << 0.5, -0.3).finished(),
                              (Vector(2) << 1.0, 0.64).finished().asDiagonal());
  cfg.noise = NoiseModel::diagonal((Vector(2) << 1.0, 1.0).finished());
  cfg.n_exp = 1;
  cfg.estimator.kind = EstimatorKind::mcla;
  cfg.estimator.n_outer = 2000;
  cfg.estimator.m_inner = 200;
  cfg.gradient.kind = GradientKind::sg_la;
  cfg.optimizer.method = OptMethod::sgd;
  cfg.optimizer.alpha0 = 0.1;
  cfg.optimizer.projection_box = cfg.model->bounds();
  cfg.optimizer.max_iters = 100;
  cfg.xi0 = Vector::Zero(2);
  return cfg;
}

}  // namespace

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "example1_sigma01" || name == "example1_sigma001" ||
      name == "example1_deterministic") {
    double sigma = name == "example1_sigma01" ? 0.1 : name == "example1_sigma001" ? 0.01 : 0.0;
    cfg = example1_base(sigma);
    if (name == "example1_deterministic") {
      cfg.optimizer.method = OptMethod::fgd;
      cfg.optimizer.schedule = StepSchedule::constant;
      cfg.optimizer.max_iters = 2000;
      cfg.optimizer.target = Vector::Zero(20);
      cfg.optimizer.tol = 1e-8;
      cfg.replications = 1;
    }
  } else if (name.rfind("example2_", 0) == 0) {
    std::string rest = name.substr(9);
    auto us = rest.find('_');
    if (us == std::string::npos) throw ConfigError("unknown preset '" + name + "'");
    cfg = example2_base();
    example2_apply_estimator(cfg, rest.substr(us + 1));
    example2_apply_method(cfg, rest.substr(0, us));
  } else if (name.rfind("timoshenko_case", 0) == 0) {
    int c = std::stoi(name.substr(15));
    if (c < 1 || c > 4) throw ConfigError("timoshenko case must be 1..4");
    cfg = timoshenko_case(c);
  } else if (name == "linear_gaussian") {
    cfg = linear_gaussian_preset();
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.name = name;
  return cfg;
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  std::vector<std::pair<std::string, std::string>> cat = {
      {"example1_sigma01", "stochastic quadratic benchmark, sigma_theta = 0.1"},
      {"example1_sigma001", "stochastic quadratic benchmark, sigma_theta = 0.01"},
      {"example1_deterministic", "noise-free quadratic, fixed-step full gradient"},
      {"linear_gaussian", "conjugate oracle model with closed-form information gain"},
  };
  for (const char* m : {"fgd", "sgd", "asgd", "rasgd"})
    for (const char* e : {"mc", "mcis", "la"})
      cat.emplace_back("example2_" + std::string(m) + "_" + e,
                       "quadratic design model, " + std::string(m) + " + sg_" + std::string(e));
  for (int c = 1; c <= 4; ++c)
    cat.emplace_back("timoshenko_case" + std::to_string(c),
                     "strain-gauge placement, tabulated case " + std::to_string(c));
  return cat;
}

ExperimentConfig load_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("preset")) cfg = preset(as_string(j["preset"], "preset"));

  if (j.contains("model")) cfg.model = parse_model(j["model"], "model");
  if (!cfg.model) config_fail("model", "missing");
  if (j.contains("prior")) cfg.prior = parse_prior(j["prior"], "prior");
  if (j.contains("noise")) cfg.noise = parse_noise(j["noise"], "noise");
  if (j.contains("n_exp")) cfg.n_exp = as_int(j["n_exp"], "n_exp");
  if (j.contains("estimator")) parse_estimator(j["estimator"], "estimator", cfg.estimator);
  if (j.contains("gradient")) parse_gradient(j["gradient"], "gradient", cfg.gradient);
  if (cfg.optimizer.projection_box.dim() == 0)
    cfg.optimizer.projection_box = cfg.model->bounds();
  if (j.contains("optimizer")) parse_optimizer(j["optimizer"], "optimizer", cfg);
  if (j.contains("replications")) cfg.replications = as_int(j["replications"], "replications");
  if (j.contains("seed"))
    cfg.seed = static_cast<std::uint64_t>(as_number(j["seed"], "seed"));
  if (j.contains("out_dir")) cfg.out_dir = as_string(j["out_dir"], "out_dir");
  if (j.contains("name")) cfg.name = as_string(j["name"], "name");

  if (cfg.xi0.size() == 0) cfg.xi0 = 0.5 * (cfg.model->bounds().lo + cfg.model->bounds().hi);

  // Fail fast on inconsistent pieces.
  cfg.problem();
  if (cfg.replications < 1) config_fail("replications", "must be >= 1");
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_json(ss.str());
}

// ---------------------------------------------------------------------------
// Runners

EIGEstimate run_estimate(const ExperimentConfig& config, const Vector& xi) {
  return estimate_eig(config.problem(), xi, config.estimator, RngStream(config.seed));
}

RunReport run_optimize(const ExperimentConfig& config, bool write_files, bool evaluate_eig) {
  BayesProblem problem = config.problem();
  RunReport report;
  report.name = config.name;
  report.runs.resize(config.replications);

  std::vector<OptimizerTrace> traces(config.replications);
  RngStream root(config.seed);
  int outer_workers = std::max(1, std::min(config.estimator.workers, config.replications));
  parallel_for(config.replications, outer_workers, [&](int i) {
    OptimizerConfig oc = config.optimizer;
    oc.seed = root.child(rng_tag::replication).child(i).key();
    traces[i] = run_optimizer(problem, config.gradient, oc, config.xi0);
    ReplicationResult& r = report.runs[i];
    r.replication = i;
    r.terminal_xi = traces[i].terminal_xi();
    r.ncfm = traces[i].total_ncfm;
    r.gradient_draws = traces[i].gradient_draws;
    r.iterations = traces[i].iterations;
    r.restarts = traces[i].restarts;
    r.stop = traces[i].stop;
  });

  std::vector<double> ncfms;
  Vector mean_xi = Vector::Zero(config.xi0.size());
  double mean_draws = 0.0;
  for (const auto& r : report.runs) {
    ncfms.push_back(static_cast<double>(r.ncfm));
    mean_xi += r.terminal_xi;
    mean_draws += static_cast<double>(r.gradient_draws);
  }
  mean_xi /= static_cast<double>(report.runs.size());
  report.mean_terminal_xi = mean_xi;
  report.mean_ncfm =
      std::accumulate(ncfms.begin(), ncfms.end(), 0.0) / static_cast<double>(ncfms.size());
  report.mean_gradient_draws = mean_draws / static_cast<double>(report.runs.size());
  std::sort(ncfms.begin(), ncfms.end());
  std::size_t h = ncfms.size() / 2;
  report.median_ncfm =
      ncfms.size() % 2 ? ncfms[h] : 0.5 * (ncfms[h - 1] + ncfms[h]);

  if (evaluate_eig) {
    RngStream eig_rng(config.seed ^ 0xE16E16ULL);
    report.eig_initial = estimate_eig(problem, config.xi0, config.estimator, eig_rng);
    report.eig_terminal = estimate_eig(problem, mean_xi, config.estimator, eig_rng.child(1));
  }

  if (write_files) {
    std::filesystem::create_directories(config.out_dir);
    for (int i = 0; i < config.replications; ++i) {
      std::ostringstream name;
      name << "run_" << std::setw(3) << std::setfill('0') << i << ".csv";
      write_trace_csv(traces[i], config.out_dir / name.str());
    }
    write_report_json(report, config.out_dir / "report.json");
  }
  return report;
}

GradcheckReport run_gradcheck(const ExperimentConfig& config, const std::vector<Vector>& points) {
  BayesProblem problem = config.problem();
  GradcheckReport report;
  RngStream root(config.seed);

  const int n_mean = config.gradient.batch;
  const int m_is = config.gradient.m_inner;

  int idx = 0;
  for (const Vector& xi : points) {
    RngStream point_rng = root.child(0x6c).child(idx++);
    GradcheckPoint pt;
    pt.xi = xi;
    pt.grad_sg_la =
        full_gradient(problem, xi, GradientKind::sg_la, n_mean, 1, point_rng.child(0),
                      config.estimator.workers)
            .grad;
    pt.grad_sg_mcis =
        full_gradient(problem, xi, GradientKind::sg_mcis, n_mean, m_is, point_rng.child(1),
                      config.estimator.workers)
            .grad;

    // Central FD of the MCLA value under common random numbers: identical
    // seeds on both sides of each difference cancel the sampling noise.
    EstimatorConfig est = config.estimator;
    est.kind = EstimatorKind::mcla;
    FDScheme fd = FDScheme::central();
    Vector fd_grad(xi.size());
    for (Eigen::Index s = 0; s < xi.size(); ++s) {
      double h = fd.step(xi[s]);
      Vector xp = xi, xm = xi;
      xp[s] += h;
      xm[s] -= h;
      RngStream crn = point_rng.child(2);
      double ip = estimate_eig(problem, xp, est, crn).value;
      double im = estimate_eig(problem, xm, est, crn).value;
      fd_grad[s] = (ip - im) / (2.0 * h);
    }
    pt.grad_fd_mcla = fd_grad;

    double scale = std::max({pt.grad_sg_la.norm(), pt.grad_sg_mcis.norm(), fd_grad.norm(), 1e-300});
    pt.max_rel_discrepancy =
        std::max({(pt.grad_sg_la - pt.grad_sg_mcis).norm(), (pt.grad_sg_la - fd_grad).norm(),
                  (pt.grad_sg_mcis - fd_grad).norm()}) /
        scale;
    pt.norm_sg_mcis = pt.grad_sg_mcis.norm();
    report.max_rel_discrepancy = std::max(report.max_rel_discrepancy, pt.max_rel_discrepancy);
    report.points.push_back(std::move(pt));
  }
  return report;
}

std::vector<std::array<double, 4>> run_contour(const ExperimentConfig& config,
                                               const ContourGrid& grid) {
  if (config.model->design_dim() != 2)
    throw ConfigError("contour: requires a 2-d design space");
  if (grid.n1 < 1 || grid.n2 < 1) throw ConfigError("contour: grid counts must be >= 1");
  BayesProblem problem = config.problem();
  const int cells = grid.n1 * grid.n2;
  std::vector<std::array<double, 4>> rows(cells);
  RngStream root(config.seed);

  EstimatorConfig est = config.estimator;
  int workers = est.workers;
  est.workers = 1;  // parallelism across cells instead
  parallel_for(cells, workers, [&](int c) {
    int i = c / grid.n2, j = c % grid.n2;
    double x1 = grid.n1 == 1 ? grid.x1_lo
                             : grid.x1_lo + (grid.x1_hi - grid.x1_lo) * i / (grid.n1 - 1.0);
    double x2 = grid.n2 == 1 ? grid.x2_lo
                             : grid.x2_lo + (grid.x2_hi - grid.x2_lo) * j / (grid.n2 - 1.0);
    Vector xi(2);
    xi << x1, x2;
    EIGEstimate e = estimate_eig(problem, xi, est, root.child(0xC0).child(c));
    rows[c] = {x1, x2, e.value, e.std_error};
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Persistence

void write_trace_csv(const OptimizerTrace& trace, std::ostream& os) {
  const Eigen::Index dim = trace.rows.front().xi.size();
  os << "k";
  for (Eigen::Index i = 0; i < dim; ++i) os << ",xi_" << i;
  for (Eigen::Index i = 0; i < dim; ++i) os << ",xibar_" << i;
  os << ",alpha,gamma,restart,grad_norm,ncfm\n";
  os << std::setprecision(17);
  for (const auto& row : trace.rows) {
    os << row.k;
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << row.xi[i];
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << row.xi_sliding_avg[i];
    os << ',' << row.alpha << ',' << row.gamma << ',' << (row.restarted ? 1 : 0) << ','
       << row.grad_norm << ',' << row.cumulative_ncfm << '\n';
  }
}

void write_trace_csv(const OptimizerTrace& trace, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw EvalError("cannot write trace file '" + path.string() + "'");
  write_trace_csv(trace, os);
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::target_reached: return "target_reached";
    case StopReason::max_iters: return "max_iters";
    case StopReason::max_ncfm: return "max_ncfm";
    case StopReason::gradient_failure: return "gradient_failure";
  }
  return "?";
}

std::string report_to_json(const RunReport& report) {
  json j;
  j["name"] = report.name;
  j["mean_ncfm"] = report.mean_ncfm;
  j["median_ncfm"] = report.median_ncfm;
  j["mean_gradient_draws"] = report.mean_gradient_draws;
  j["mean_terminal_xi"] = std::vector<double>(report.mean_terminal_xi.begin(),
                                              report.mean_terminal_xi.end());
  auto eig_json = [](const EIGEstimate& e) {
    return json{{"value", e.value}, {"std_error", e.std_error}, {"ncfm", e.ncfm}};
  };
  j["eig_initial"] = eig_json(report.eig_initial);
  j["eig_terminal"] = eig_json(report.eig_terminal);
  j["runs"] = json::array();
  for (const auto& r : report.runs) {
    j["runs"].push_back(
        {{"replication", r.replication},
         {"terminal_xi", std::vector<double>(r.terminal_xi.begin(), r.terminal_xi.end())},
         {"ncfm", r.ncfm},
         {"gradient_draws", r.gradient_draws},
         {"iterations", r.iterations},
         {"restarts", r.restarts},
         {"stop", to_string(r.stop)}});
  }
  return j.dump(2);
}

void write_report_json(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw EvalError("cannot write report file '" + path.string() + "'");
  os << report_to_json(report) << '\n';
}

}  // namespace oed
