#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "gwiener/config.hpp"
#include "gwiener/error.hpp"
#include "gwiener/graph.hpp"
#include "gwiener/priors.hpp"
#include "gwiener/random.hpp"
#include "gwiener/sampling.hpp"
#include "gwiener/spectral.hpp"
#include "gwiener/stationarity.hpp"
#include "gwiener/wiener.hpp"

namespace gwiener {

struct GraphSpec {
  std::string kind;  // sensor | er | grid
  Eigen::Index n = 64;
  Eigen::Index k = 6;
  double p = 0.3;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::uint64_t seed = 1;
};

inline Graph generate_graph(const GraphSpec& spec) {
  if (spec.kind == "sensor") return gen_sensor_knn(spec.n, spec.k, spec.seed);
  if (spec.kind == "er") return gen_erdos_renyi(spec.n, spec.p, spec.seed);
  if (spec.kind == "grid") return gen_grid2d(spec.rows, spec.cols);
  throw Error(ErrorCode::InvalidArgument, "unknown graph kind '" + spec.kind + "'");
}

struct ExperimentConfig {
  std::vector<GraphSpec> graphs;
  std::string psd = "gaussian_psd";
  double sigma2 = 0.3;
  std::vector<std::string> noise{"noisy", "clean"};
  Eigen::Index ratio = 4;
  std::vector<std::string> domains{"vertex", "spectral"};
  std::vector<std::string> bands{"fullband", "bandlimited"};
  std::vector<std::string> methods{"unc", "pre", "smo_unc", "smo_pre", "bl"};
  std::string reconstruction = "cosine";
  double smoothness_epsilon = kDefaultSmoothnessEpsilon;
  double smoothness_rho = 1.0;
  double regularization = 0.0;
  Eigen::Index trials = 20;
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"identity", "unc", "pre", "smo_unc", "smo_pre", "bl"};
  return methods;
}

inline void validate(const ExperimentConfig& cfg) {
  auto require_subset = [](const std::vector<std::string>& items, const std::vector<std::string>& allowed,
                           const char* what) {
    if (items.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " list is empty");
    std::set<std::string> seen;
    for (const auto& s : items) {
      if (std::find(allowed.begin(), allowed.end(), s) == allowed.end())
        throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + s + "'");
      if (!seen.insert(s).second) throw Error(ErrorCode::InvalidArgument, std::string("duplicate ") + what + " '" + s + "'");
    }
  };
  if (cfg.graphs.empty()) throw Error(ErrorCode::InvalidArgument, "graph list is empty");
  require_subset(cfg.noise, {"noisy", "clean"}, "noise");
  require_subset(cfg.domains, {"vertex", "spectral"}, "domain");
  require_subset(cfg.bands, {"fullband", "bandlimited"}, "band");
  require_subset(cfg.methods, known_methods(), "method");
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (cfg.ratio < 1) throw Error(ErrorCode::InvalidArgument, "ratio must be >= 1");
  if (!(cfg.sigma2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2 must be >= 0");
  if (cfg.threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be >= 1");
  for (const auto& g : cfg.graphs) {
    const Eigen::Index n = g.kind == "grid" ? g.rows * g.cols : g.n;
    if (n % cfg.ratio != 0)
      throw Error(ErrorCode::NotDivisible,
                  g.kind + ": N = " + std::to_string(n) + " is not divisible by ratio " + std::to_string(cfg.ratio));
  }
}

/// Reads an experiment from a key-value document (see configs/table1_desk.cfg).
inline ExperimentConfig parse_experiment(const KeyValueDocument& doc) {
  static const std::set<std::string> allowed{
      "graphs", "n", "graph_seed", "sensor.k", "er.p", "grid.rows", "grid.cols", "psd", "sigma2", "noise", "ratio",
      "domains", "bands", "methods", "reconstruction", "smoothness.epsilon", "smoothness.rho", "regularization",
      "trials", "seed", "threads"};
  for (const auto& key : doc.keys())
    if (!allowed.count(key)) throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");

  ExperimentConfig cfg;
  const Eigen::Index n = doc.get_int("n", 64);
  const auto graph_seed = static_cast<std::uint64_t>(doc.get_int("graph_seed", 1));
  for (const auto& kind : doc.get_list("graphs", {"sensor", "er", "grid"})) {
    GraphSpec g;
    g.kind = kind;
    g.n = n;
    g.k = doc.get_int("sensor.k", 6);
    g.p = doc.get_double("er.p", 0.3);
    const auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
    g.rows = doc.get_int("grid.rows", side);
    g.cols = doc.get_int("grid.cols", side);
    g.seed = graph_seed;
    cfg.graphs.push_back(g);
  }
  cfg.psd = doc.get("psd", cfg.psd);
  cfg.sigma2 = doc.get_double("sigma2", cfg.sigma2);
  cfg.noise = doc.get_list("noise", cfg.noise);
  cfg.ratio = doc.get_int("ratio", cfg.ratio);
  cfg.domains = doc.get_list("domains", cfg.domains);
  cfg.bands = doc.get_list("bands", cfg.bands);
  cfg.methods = doc.get_list("methods", cfg.methods);
  cfg.reconstruction = doc.get("reconstruction", cfg.reconstruction);
  cfg.smoothness_epsilon = doc.get_double("smoothness.epsilon", cfg.smoothness_epsilon);
  cfg.smoothness_rho = doc.get_double("smoothness.rho", cfg.smoothness_rho);
  cfg.regularization = doc.get_double("regularization", cfg.regularization);
  cfg.trials = doc.get_int("trials", cfg.trials);
  cfg.base_seed = static_cast<std::uint64_t>(doc.get_int("seed", 1));
  cfg.threads = static_cast<unsigned>(doc.get_int("threads", 1));
  validate(cfg);
  return cfg;
}

/// One benchmark cell: everything except the trial index.
struct CellKey {
  std::string graph;
  std::string noise;
  std::string band;
  std::string domain;
  std::string method;
};

/// Per-graph state shared read-only by all trials.
struct GraphContext {
  std::string label;
  Graph graph;
  std::shared_ptr<const SpectralBasis> basis;
  GwssProcess process;
  Eigen::MatrixXd gamma_x;
  Eigen::MatrixXd smooth_sigma;
};

struct ExperimentContext {
  ExperimentConfig config;
  std::vector<GraphContext> graphs;
  std::vector<CellKey> cells;  // ordered graph, noise, band, domain, method
};

inline ExperimentContext prepare_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentContext ctx;
  ctx.config = cfg;
  for (const auto& spec : cfg.graphs) {
    GraphContext g;
    g.label = spec.kind;
    g.graph = generate_graph(spec);
    auto basis = std::make_shared<const SpectralBasis>(eigendecompose(laplacian(g.graph)));
    g.basis = basis;
    g.process = make_process(basis, kernel_by_name(cfg.psd, *basis, basis->size() / cfg.ratio));
    g.gamma_x = covariance_from_psd(g.process).gamma;
    g.smooth_sigma =
        smoothness_covariance({smoothness_measure(basis->lambda_max, cfg.smoothness_epsilon), cfg.smoothness_rho}, *basis)
            .gamma;
    ctx.graphs.push_back(std::move(g));
  }
  for (const auto& g : ctx.graphs)
    for (const auto& noise : cfg.noise)
      for (const auto& band : cfg.bands)
        for (const auto& domain : cfg.domains)
          for (const auto& method : cfg.methods) ctx.cells.push_back({g.label, noise, band, domain, method});
  return ctx;
}

/// Outcome of one cell in one trial; `failure` is set when the pipeline could not be built.
struct CellOutcome {
  double squared_error = 0.0;  // ||x_tilde - x||^2 / N
  double analytic = 0.0;       // analytic MSE / N for this trial's operators
  std::optional<std::string> failure;
};

struct TrialResult {
  Eigen::Index trial = 0;
  std::vector<CellOutcome> cells;  // aligned with ExperimentContext::cells
};

/// Builds the pipeline a method uses for one (graph, band, domain, trial).
inline RecoveryPipeline build_method_pipeline(const GraphContext& g, const ExperimentConfig& cfg, const std::string& band,
                                              const std::string& domain, const std::string& method,
                                              const std::vector<Eigen::Index>& vertices, double sigma2) {
  const SpectralBasis& basis = *g.basis;
  const Eigen::Index n = basis.size();
  const Eigen::Index k = n / cfg.ratio;
  WienerOptions options;
  options.regularization = cfg.regularization;

  if (method == "identity") {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return make_pipeline(vertex_sampler(basis, std::nullopt, all), identity_correction(n),
                         vertex_reconstructor(basis, std::nullopt, all));
  }
  if (method == "bl") {
    if (domain == "vertex") return bandlimited_vertex_baseline(basis, vertices);
    return bandlimited_baseline(basis, cfg.ratio);
  }

  const SpectralKernel sampling_kernel = band == "fullband" ? fullband_sampling(basis.lambda_max) : bandlimited_sampling(k);
  const SpectralKernel recon_kernel = kernel_by_name(cfg.reconstruction, basis, k, cfg.smoothness_epsilon);
  SamplingOperator s = domain == "vertex" ? vertex_sampler(basis, sampling_kernel, vertices)
                                          : spectral_sampler(basis, sampling_kernel, cfg.ratio);
  const Eigen::MatrixXd gamma_eta = white_noise_covariance(k, sigma2);
  const Eigen::MatrixXd no_noise = Eigen::MatrixXd::Zero(k, k);

  if (method == "unc") {
    auto sol = correction_unconstrained(s, g.gamma_x, gamma_eta, options);
    return make_pipeline(std::move(s), std::move(sol.correction), std::move(sol.reconstructor));
  }
  if (method == "smo_unc") {
    // Smoothness-induced covariance, built noiselessly.
    auto sol = correction_unconstrained(s, g.smooth_sigma, no_noise, options);
    return make_pipeline(std::move(s), std::move(sol.correction), std::move(sol.reconstructor));
  }
  ReconstructionOperator w = domain == "vertex" ? vertex_reconstructor(basis, recon_kernel, vertices)
                                                : spectral_reconstructor(basis, recon_kernel, cfg.ratio);
  if (method == "pre") {
    CorrectionFilter h = correction_predefined(s, w, g.gamma_x, gamma_eta, options);
    return make_pipeline(std::move(s), std::move(h), std::move(w));
  }
  if (method == "smo_pre") {
    const SmoothnessPrior prior{smoothness_measure(basis.lambda_max, cfg.smoothness_epsilon), cfg.smoothness_rho};
    CorrectionFilter h = smoothness_correction(prior, basis, s, w, options);
    return make_pipeline(std::move(s), std::move(h), std::move(w));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + method + "'");
}

/// Draws x and eta once per graph and runs every configured cell on them.
/// Seeds are derived from (base seed, graph, trial, role) only.
inline TrialResult run_trial(const ExperimentContext& ctx, Eigen::Index trial) {
  const ExperimentConfig& cfg = ctx.config;
  TrialResult result;
  result.trial = trial;
  result.cells.reserve(ctx.cells.size());
  const auto t = static_cast<std::uint64_t>(trial);
  for (std::size_t gi = 0; gi < ctx.graphs.size(); ++gi) {
    const GraphContext& g = ctx.graphs[gi];
    const Eigen::Index n = g.basis->size();
    const Eigen::Index k = n / cfg.ratio;
    const std::uint64_t graph_base = derive_seed(cfg.base_seed, gi, SeedRole::Graph);
    const Eigen::VectorXd x = sample_signal(g.process, derive_seed(graph_base, t, SeedRole::Signal));
    Rng noise_rng(derive_seed(graph_base, t, SeedRole::Noise));
    const Eigen::VectorXd unit_noise = standard_normal(n, noise_rng);
    const auto vertices = random_vertex_set(n, k, derive_seed(graph_base, t, SeedRole::VertexSet));

    for (const auto& noise : cfg.noise) {
      const double sigma2 = noise == "noisy" ? cfg.sigma2 : 0.0;
      for (const auto& band : cfg.bands) {
        for (const auto& domain : cfg.domains) {
          for (const auto& method : cfg.methods) {
            CellOutcome out;
            try {
              const RecoveryPipeline p = build_method_pipeline(g, cfg, band, domain, method, vertices, sigma2);
              const Eigen::Index kk = p.sample_size();
              const Eigen::VectorXd eta = std::sqrt(sigma2) * unit_noise.head(kk);
              const Eigen::VectorXd x_tilde = p.recover(p.measure(x, eta));
              out.squared_error = (x_tilde - x).squaredNorm() / static_cast<double>(n);
              out.analytic = analytic_mse(p, g.gamma_x, white_noise_covariance(kk, sigma2)) / static_cast<double>(n);
            } catch (const Error& e) {
              out.failure = std::string(method) + ": " + e.what();
            }
            result.cells.push_back(std::move(out));
          }
        }
      }
    }
  }
  return result;
}

inline TrialResult run_trial(const ExperimentConfig& cfg, Eigen::Index trial) {
  return run_trial(prepare_experiment(cfg), trial);
}

struct MseRow {
  CellKey key;
  double mse_db = 0.0;        // 10 log10(mean squared error per vertex)
  double std_db = 0.0;        // sample std of per-trial dB values
  Eigen::Index trials = 0;    // successful trials
  Eigen::Index failed = 0;
  double mean_mse = 0.0;      // linear, per vertex
  double std_mse = 0.0;       // linear, sample std across trials
  double mean_analytic = 0.0; // linear, per vertex, averaged over trials
  std::vector<std::string> failures;
};

struct MseTable {
  std::vector<MseRow> rows;

  const MseRow* find(const std::string& graph, const std::string& noise, const std::string& band,
                     const std::string& domain, const std::string& method) const {
    for (const auto& r : rows)
      if (r.key.graph == graph && r.key.noise == noise && r.key.band == band && r.key.domain == domain &&
          r.key.method == method)
        return &r;
    return nullptr;
  }
};

inline double to_db(double v) { return 10.0 * std::log10(v); }

/// Aggregates trials in trial order, so the table does not depend on scheduling.
inline MseTable aggregate(const ExperimentContext& ctx, const std::vector<TrialResult>& trials) {
  MseTable table;
  for (std::size_t c = 0; c < ctx.cells.size(); ++c) {
    MseRow row;
    row.key = ctx.cells[c];
    std::vector<double> errors, analytic;
    for (const auto& tr : trials) {
      const CellOutcome& o = tr.cells[c];
      if (o.failure) {
        ++row.failed;
        row.failures.push_back(*o.failure);
        continue;
      }
      errors.push_back(o.squared_error);
      analytic.push_back(o.analytic);
    }
    row.trials = static_cast<Eigen::Index>(errors.size());
    if (errors.empty())
      throw Error(ErrorCode::AllTrialsFailed, row.key.graph + "/" + row.key.noise + "/" + row.key.band + "/" +
                                                  row.key.domain + "/" + row.key.method + ": " + row.failures.front());
    const double count = static_cast<double>(errors.size());
    double sum = 0.0, sum_analytic = 0.0, sum_db = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      sum += errors[i];
      sum_analytic += analytic[i];
      sum_db += to_db(errors[i]);
    }
    row.mean_mse = sum / count;
    row.mean_analytic = sum_analytic / count;
    row.mse_db = to_db(row.mean_mse);
    const double mean_db = sum_db / count;
    double var = 0.0, var_db = 0.0;
    for (double e : errors) {
      var += (e - row.mean_mse) * (e - row.mean_mse);
      var_db += (to_db(e) - mean_db) * (to_db(e) - mean_db);
    }
    row.std_mse = errors.size() > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
    row.std_db = errors.size() > 1 ? std::sqrt(var_db / (count - 1.0)) : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Runs all trials, optionally on worker threads pulling trial indices from a shared counter.
inline MseTable run_experiment(const ExperimentConfig& cfg) {
  const ExperimentContext ctx = prepare_experiment(cfg);
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  std::atomic<Eigen::Index> next{0};
  auto worker = [&] {
    for (Eigen::Index t = next++; t < cfg.trials; t = next++) results[static_cast<std::size_t>(t)] = run_trial(ctx, t);
  };
  const unsigned workers = std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return aggregate(ctx, results);
}

// CSV

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_sig4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string to_csv(const MseTable& table) {
  std::ostringstream out;
  out << "graph,noise,band,domain,method,mse_db,std_db,trials\n";
  for (const auto& r : table.rows) {
    out << csv_quote(r.key.graph) << ',' << csv_quote(r.key.noise) << ',' << csv_quote(r.key.band) << ','
        << csv_quote(r.key.domain) << ',' << csv_quote(r.key.method) << ',' << format_sig4(r.mse_db) << ','
        << format_sig4(r.std_db) << ',' << r.trials << '\n';
  }
  return out.str();
}

/// Minimal RFC-4180 reader: returns rows of fields, header included.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gwiener
