#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gwiener/gwiener.hpp"

namespace {

using namespace gwiener;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

std::shared_ptr<const SpectralBasis> load_basis(const std::string& path, DegreeLaplacian* dl_out = nullptr) {
  const DegreeLaplacian dl = laplacian(read_edge_list(read_file(path)));
  if (dl_out) *dl_out = dl;
  return std::make_shared<const SpectralBasis>(eigendecompose(dl));
}

struct GraphGenArgs {
  std::string kind;
  std::optional<long long> n;
  long long k = 6;
  double p = 0.3;
  long long rows = 0, cols = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int graph_gen(const GraphGenArgs& a) {
  GraphSpec spec;
  spec.kind = a.kind;
  spec.seed = a.seed;
  if (a.kind == "grid") {
    if (a.rows < 1 || a.cols < 1) throw Error(ErrorCode::InvalidArgument, "grid requires --rows and --cols >= 1");
    spec.rows = a.rows;
    spec.cols = a.cols;
  } else {
    if (!a.n) throw Error(ErrorCode::InvalidArgument, "--n is required for --kind " + a.kind);
    spec.n = *a.n;
    spec.k = a.k;
    spec.p = a.p;
  }
  const Graph g = generate_graph(spec);
  emit(a.out, write_edge_list(g));
  std::cerr << "vertices " << g.size() << " edges " << g.edge_count() << '\n';
  return 0;
}

struct KernelsArgs {
  std::string graph, kernel, out;
  long long ratio = 4;
  double eps = kDefaultSmoothnessEpsilon;
};

int kernels_dump(const KernelsArgs& a) {
  const auto basis = load_basis(a.graph);
  if (a.ratio < 1) throw Error(ErrorCode::InvalidArgument, "--ratio must be >= 1");
  const SpectralKernel kernel = kernel_by_name(a.kernel, *basis, basis->size() / a.ratio, a.eps);
  emit(a.out, kernel_csv(*basis, kernel));
  return 0;
}

struct RecoverArgs {
  std::string graph, domain = "vertex", method = "unc", band = "fullband", psd = "gaussian_psd",
                     reconstruction = "cosine", out;
  long long ratio = 4;
  double sigma2 = 0.3, eps = kDefaultSmoothnessEpsilon, rho = 1.0, regularization = 0.0;
  std::uint64_t seed = 1;
};

int recover(const RecoverArgs& a) {
  const auto basis = load_basis(a.graph);
  const Eigen::Index n = basis->size();
  if (a.ratio < 1 || a.ratio > n) throw Error(ErrorCode::InvalidArgument, "--ratio must lie in [1, N]");
  if (a.domain == "spectral" && n % a.ratio != 0)
    throw Error(ErrorCode::NotDivisible,
                "N = " + std::to_string(n) + " is not divisible by ratio " + std::to_string(a.ratio));
  if (a.domain != "vertex" && a.domain != "spectral")
    throw Error(ErrorCode::InvalidArgument, "--domain must be vertex or spectral");
  if (!(a.sigma2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "--sigma2 must be >= 0");

  ExperimentConfig cfg;
  cfg.ratio = a.ratio;
  cfg.reconstruction = a.reconstruction;
  cfg.smoothness_epsilon = a.eps;
  cfg.smoothness_rho = a.rho;
  cfg.regularization = a.regularization;

  GraphContext g;
  g.label = a.graph;
  g.basis = basis;
  g.process = make_process(basis, kernel_by_name(a.psd, *basis, n / a.ratio, a.eps));
  g.gamma_x = covariance_from_psd(g.process).gamma;
  g.smooth_sigma = smoothness_covariance({smoothness_measure(basis->lambda_max, a.eps), a.rho}, *basis).gamma;

  const auto vertices = random_vertex_set(n, n / a.ratio, derive_seed(a.seed, 0, SeedRole::VertexSet));
  const RecoveryPipeline p = build_method_pipeline(g, cfg, a.band, a.domain, a.method, vertices, a.sigma2);
  const Eigen::Index k = p.sample_size();
  const Eigen::VectorXd x = sample_signal(g.process, derive_seed(a.seed, 0, SeedRole::Signal));
  Rng noise_rng(derive_seed(a.seed, 0, SeedRole::Noise));
  const Eigen::VectorXd eta = std::sqrt(a.sigma2) * standard_normal(k, noise_rng);
  const Eigen::VectorXd y = p.measure(x, eta);
  const Eigen::VectorXd x_tilde = p.recover(y);

  std::ostringstream csv;
  csv << "index,x,y,x_tilde\n";
  for (Eigen::Index i = 0; i < n; ++i)
    csv << i << ',' << format_real(x[i]) << ',' << (i < k ? format_real(y[i]) : std::string()) << ','
        << format_real(x_tilde[i]) << '\n';
  if (!a.out.empty()) write_file(a.out, csv.str());

  const double empirical = (x_tilde - x).squaredNorm() / static_cast<double>(n);
  const double analytic = analytic_mse(p, g.gamma_x, white_noise_covariance(k, a.sigma2)) / static_cast<double>(n);
  std::cout << "empirical_mse " << format_real(empirical) << '\n' << "analytic_mse " << format_real(analytic) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string config, out;
  std::optional<unsigned> threads;
};

int experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg = parse_experiment(KeyValueDocument::load(a.config));
  if (a.threads) {
    cfg.threads = *a.threads;
    validate(cfg);
  }
  std::cerr << "running " << cfg.trials << " trials on " << cfg.graphs.size() << " graphs with " << cfg.threads
            << " thread(s)\n";
  const MseTable table = run_experiment(cfg);
  for (const auto& row : table.rows)
    if (row.failed > 0)
      std::cerr << "warning: " << row.failed << " failed trial(s) in " << row.key.graph << '/' << row.key.noise << '/'
                << row.key.band << '/' << row.key.domain << '/' << row.key.method << ": " << row.failures.front()
                << '\n';
  emit(a.out, to_csv(table));
  return 0;
}

int selftest(std::uint64_t seed) {
  int failures = 0;
  for (const auto& c : run_selftest(seed)) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.passed) {
      std::cout << ": " << c.detail;
      ++failures;
    }
    std::cout << '\n';
  }
  std::cout << (failures ? "selftest failed" : "selftest passed") << '\n';
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener sampling and recovery of stationary graph signals"};
  app.require_subcommand(1, 1);

  GraphGenArgs gg;
  auto* gen = app.add_subcommand("graph-gen", "Generate a graph and write it as an edge list");
  gen->add_option("--kind", gg.kind, "sensor | er | grid")->required()->check(CLI::IsMember({"sensor", "er", "grid"}));
  gen->add_option("--n", gg.n, "Number of vertices (sensor, er)");
  gen->add_option("--k", gg.k, "Nearest neighbours (sensor)");
  gen->add_option("--p", gg.p, "Edge probability (er)");
  gen->add_option("--rows", gg.rows, "Grid rows");
  gen->add_option("--cols", gg.cols, "Grid columns");
  gen->add_option("--seed", gg.seed, "Random seed");
  gen->add_option("--out", gg.out, "Output path (stdout if omitted)");

  KernelsArgs ka;
  auto* kd = app.add_subcommand("kernels-dump", "Tabulate a catalog kernel over the graph spectrum");
  kd->add_option("--graph", ka.graph, "Edge-list file")->required();
  kd->add_option("--kernel", ka.kernel, "fullband | bandlimited | cosine | smoothness | gaussian_psd | identity")
      ->required();
  kd->add_option("--ratio", ka.ratio, "Sampling ratio N/K (sets the bandlimited passband)");
  kd->add_option("--eps", ka.eps, "Smoothness offset epsilon");
  kd->add_option("--out", ka.out, "Output CSV (stdout if omitted)");

  RecoverArgs ra;
  auto* rc = app.add_subcommand("recover", "Sample, correct and reconstruct one random signal");
  rc->add_option("--graph", ra.graph, "Edge-list file")->required();
  rc->add_option("--domain", ra.domain, "vertex | spectral");
  rc->add_option("--method", ra.method, "identity | unc | pre | smo_unc | smo_pre | bl");
  rc->add_option("--band", ra.band, "fullband | bandlimited")->check(CLI::IsMember({"fullband", "bandlimited"}));
  rc->add_option("--psd", ra.psd, "Signal PSD kernel");
  rc->add_option("--reconstruction", ra.reconstruction, "Predefined reconstruction kernel");
  rc->add_option("--ratio", ra.ratio, "Sampling ratio N/K");
  rc->add_option("--sigma2", ra.sigma2, "Noise variance");
  rc->add_option("--eps", ra.eps, "Smoothness offset epsilon");
  rc->add_option("--rho", ra.rho, "Smoothness budget");
  rc->add_option("--regularization", ra.regularization, "Ridge added to measurement grams");
  rc->add_option("--seed", ra.seed, "Random seed");
  rc->add_option("--out", ra.out, "Output CSV with index,x,y,x_tilde");

  ExperimentArgs ea;
  auto* ex = app.add_subcommand("experiment", "Run a benchmark grid from a config file");
  ex->add_option("--config", ea.config, "Key-value config file")->required();
  ex->add_option("--out", ea.out, "Output CSV (stdout if omitted)");
  ex->add_option("--threads", ea.threads, "Worker threads (overrides the config)");

  std::uint64_t st_seed = 1;
  auto* st = app.add_subcommand("selftest", "Run the invariant suite on small graphs");
  st->add_option("--seed", st_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return graph_gen(gg);
    if (*kd) return kernels_dump(ka);
    if (*rc) return recover(ra);
    if (*ex) return experiment(ea);
    if (*st) return selftest(st_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
