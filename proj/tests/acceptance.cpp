// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. argv[1] must be the path to
// the mmf CLI binary (used by the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmf/evolution.hpp"
#include "mmf/graphs.hpp"
#include "mmf/io.hpp"
#include "mmf/nystrom.hpp"
#include "mmf/pipeline.hpp"
#include "mmf/rng.hpp"
#include "mmf/selection.hpp"
#include "mmf/stiefel.hpp"
#include "mmf/wavelets.hpp"
#include "mmf/wnn.hpp"

namespace fs = std::filesystem;
using namespace mmf;

namespace {

std::string g_cli_path;
fs::path g_scratch;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw Failure(msg);
}

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m(i, j) = dist(rng);
      m(j, i) = m(i, j);
    }
  return m;
}

Matrix random_orthogonal(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = dist(rng);
  return Eigen::HouseholderQR<Matrix>(g).householderQ();
}

// ---------------------------------------------------------------- criteria

// 1. greedy-jacobi and Stiefel descent both diagonalize random 2x2 matrices.
std::string criterion_exact_diagonalization() {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const SymmetricMatrix a(random_symmetric(2, rng));
    const double greedy_err = factorization_error(a, greedy_jacobi_mmf(a, 1));
    require(greedy_err < 1e-9,
            "greedy error " + std::to_string(greedy_err) + " at trial " +
                std::to_string(trial));
    const NestedSelection sel(2, {SelectionLevel{{1}, {0, 1}}});
    stiefel::StiefelConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.objective_tol = 1e-20;
    cfg.max_outer_iters = 5000;
    const auto [f, report] = stiefel::optimize(a, sel, {}, cfg);
    const double err = factorization_error(a, f);
    require(err < 1e-9, "stiefel error " + std::to_string(err) + " at trial " +
                            std::to_string(trial));
  }
  return "30 random 2x2 instances, both methods below 1e-9";
}

// 2. Analytic gradients match central finite differences.
std::string criterion_gradient_correctness() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int instance = 0; instance < 100; ++instance) {
    const int n = 4 + static_cast<int>(rng() % 7);      // 4..10
    const int depth = 1 + static_cast<int>(rng() % 3);  // 1..3
    const int kmax = std::min(4, n - depth + 1);        // pool shrinks per level
    const int k = 2 + static_cast<int>(rng() % (kmax - 1));
    const SymmetricMatrix a(random_symmetric(n, rng));

    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<SelectionLevel> levels;
    for (int l = 0; l < depth; ++l) {
      std::shuffle(pool.begin(), pool.end(), rng);
      SelectionLevel level;
      level.rotation_support.assign(pool.begin(), pool.begin() + k);
      std::sort(level.rotation_support.begin(), level.rotation_support.end());
      level.wavelet_indices = {level.rotation_support.front()};
      pool.erase(std::find(pool.begin(), pool.end(), level.wavelet_indices[0]));
      levels.push_back(std::move(level));
    }
    const NestedSelection sel(n, std::move(levels));
    std::vector<KPointRotation> rots;
    for (const SelectionLevel& level : sel.levels())
      rots.emplace_back(n, level.rotation_support, random_orthogonal(k, rng));

    const std::vector<Matrix> analytic = stiefel::gradient(a, sel, rots);
    const double h = 1e-6;
    double max_abs = 0.0, scale = 1.0;
    for (int l = 0; l < depth; ++l)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double saved = rots[l].core(i, j);
          rots[l].core(i, j) = saved + h;
          const double fp = stiefel::objective(a, sel, rots);
          rots[l].core(i, j) = saved - h;
          const double fm = stiefel::objective(a, sel, rots);
          rots[l].core(i, j) = saved;
          const double fd = (fp - fm) / (2 * h);
          max_abs = std::max(max_abs, std::abs(analytic[l](i, j) - fd));
          scale = std::max(scale, std::abs(fd));
        }
    worst = std::max(worst, max_abs / scale);
  }
  require(worst < 1e-5, "max relative gradient error " + std::to_string(worst));
  std::ostringstream os;
  os << "100 instances, max relative error " << worst;
  return os.str();
}

// 3. Manifold feasibility, monotone descent and the descent-curve identity
// on the karate factorization.
std::string criterion_manifold_descent() {
  const SymmetricMatrix lap = normalized_laplacian(karate_graph());
  const Candidate cand = heuristic_candidate(lap, 26, 1);
  const NestedSelection sel = build_selection(cand, lap, 26, 8, 1);
  stiefel::StiefelConfig cfg;
  cfg.max_outer_iters = 500;
  cfg.epsilon = 1e-2;  // keeps |F'(0)| large enough for a conditioned
                       // finite-difference measurement at every iterate
  cfg.record_diagnostics = true;
  const auto [f, report] = stiefel::optimize(lap, sel, {}, cfg);
  require(report.iterations > 10, "descent made too few steps");
  for (double err : report.max_core_orthogonality_error)
    require(err < 1e-9, "core orthogonality drift " + std::to_string(err));
  for (const KPointRotation& u : f.rotations)
    require(u.orthogonality_error() < 1e-9, "final core drift");
  for (std::size_t i = 1; i < report.objective_trace.size(); ++i)
    require(report.objective_trace[i] <= report.objective_trace[i - 1],
            "objective trace increased");
  double worst = 0.0;
  for (std::size_t i = 0; i < report.directional_derivative_measured.size();
       ++i) {
    const double analytic = report.directional_derivative_analytic[i];
    const double measured = report.directional_derivative_measured[i];
    if (analytic == 0.0) continue;  // stationary-escape bookkeeping entries
    worst = std::max(worst, std::abs(measured - analytic) / std::abs(analytic));
  }
  require(worst < 1e-4,
          "directional derivative mismatch " + std::to_string(worst));
  std::ostringstream os;
  os << report.iterations << " iterates, max relative dF/dtau error " << worst;
  return os.str();
}

// 4. Error ordering on the karate d_L grid: EA+Stiefel vs greedy-jacobi and
// Nystrom, at most one grid-point violation tolerated.
std::string criterion_error_ordering() {
  const SymmetricMatrix lap = normalized_laplacian(karate_graph());
  int violations = 0;
  std::ostringstream detail;
  for (int d_l : {4, 8, 12, 16}) {
    const int L = 34 - d_l;
    const int k = std::min(8, d_l + 1);
    double ea_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PipelineOptions opt;
      opt.method = Method::ea;
      opt.L = L;
      opt.k = k;
      opt.c = 1;
      opt.seed = seed;
      opt.jobs = 4;
      opt.population = 40;
      opt.generations = 100;
      opt.mutation_rate = 0.3;
      ea_sum += run_pipeline(lap, opt).final_error;
    }
    const double ea_mean = ea_sum / 3.0;
    PipelineOptions greedy_opt;
    greedy_opt.method = Method::greedy_jacobi;
    greedy_opt.L = L;
    const double greedy = run_pipeline(lap, greedy_opt).final_error;
    double nystrom_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      nystrom_sum += nystrom(lap, d_l, seed).error;
    const double nystrom_mean = nystrom_sum / 20.0;
    const bool ok = ea_mean <= greedy && ea_mean <= nystrom_mean;
    if (!ok) ++violations;
    detail << " d_L=" << d_l << ": " << ea_mean << (ok ? " <= " : " !<= ")
           << "min(" << greedy << ", " << nystrom_mean << ")";
  }
  require(violations <= 1,
          "ordering violated at " + std::to_string(violations) +
              " grid points:" + detail.str());
  return "EA mean vs greedy/nystrom:" + detail.str();
}

// 5. Fitness ordering after 100 generations on karate.
std::string criterion_fitness_ordering() {
  const SymmetricMatrix lap = normalized_laplacian(karate_graph());
  EvoParams params{40, 100, 0.3, 1, 26, 8, 1, 34};
  const EvolveResult ea = evolve_ea(lap, params, 4);
  const EvolveResult de = evolve_de(lap, params, 4);
  for (const EvolveResult* res : {&ea, &de})
    for (std::size_t i = 1; i < res->log.records.size(); ++i)
      require(res->log.records[i].best_fitness <=
                  res->log.records[i - 1].best_fitness,
              "best-fitness trace increased");
  const double heuristic_fitness =
      fitness(lap, heuristic_candidate(lap, 26, 1), 8, 1);
  double best_random = std::numeric_limits<double>::infinity();
  for (int i = 0; i < params.population; ++i)
    best_random = std::min(
        best_random, fitness(lap, random_candidate(34, 26, 1, 9000 + i), 8, 1));
  require(ea.best_fitness <= heuristic_fitness,
          "EA worse than the heuristic candidate");
  require(de.best_fitness <= heuristic_fitness,
          "DE worse than the heuristic candidate");
  require(ea.best_fitness <= best_random, "EA worse than random candidates");
  require(de.best_fitness <= best_random, "DE worse than random candidates");
  std::ostringstream os;
  os << "EA " << ea.best_fitness << ", DE " << de.best_fitness
     << " <= heuristic " << heuristic_fitness << ", best random "
     << best_random;
  return os.str();
}

// 6. DE is faster than EA under the same population settings.
std::string criterion_runtime_ordering() {
  const SymmetricMatrix lap = normalized_laplacian(karate_graph());
  EvoParams params{40, 100, 0.3, 3, 26, 8, 1, 34};
  const auto t0 = std::chrono::steady_clock::now();
  evolve_ea(lap, params);
  const auto t1 = std::chrono::steady_clock::now();
  evolve_de(lap, params);
  const auto t2 = std::chrono::steady_clock::now();
  const double ea_seconds = std::chrono::duration<double>(t1 - t0).count();
  const double de_seconds = std::chrono::duration<double>(t2 - t1).count();
  require(de_seconds < ea_seconds, "DE took " + std::to_string(de_seconds) +
                                       " s vs EA " + std::to_string(ea_seconds) +
                                       " s");
  std::ostringstream os;
  os << "DE " << de_seconds << " s < EA " << ea_seconds << " s";
  return os.str();
}

// 7. The crossover golden example.
std::string criterion_crossover_golden() {
  const auto [o1, o2] = crossover_at(Candidate{{1, 2, 3, 4, 5, 6}},
                                     Candidate{{4, 5, 6, 7, 8, 9}}, 2);
  require(o1.order == std::vector<int>{1, 2, 9, 4, 5, 6},
          "offspring 1 mismatch");
  require(o2.order == std::vector<int>{7, 8, 3, 4, 5, 6},
          "offspring 2 mismatch");
  return "offspring [1,2,9,4,5,6] / [7,8,3,4,5,6] reproduced exactly";
}

// 8. EA and DE reach the exhaustive optimum on 4x4 instances.
std::string criterion_brute_force_optimality() {
  std::mt19937_64 rng(99);
  int ea_hits = 0, de_hits = 0;
  for (int instance = 0; instance < 10; ++instance) {
    const SymmetricMatrix a(random_symmetric(4, rng));
    double optimum = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        optimum = std::min(optimum, fitness(a, Candidate{{i, j}}, 2, 1));
      }
    EvoParams params{16, 80, 0.3, static_cast<std::uint64_t>(instance),
                     2, 2, 1, 4};
    if (std::abs(evolve_ea(a, params).best_fitness - optimum) < 1e-12)
      ++ea_hits;
    if (std::abs(evolve_de(a, params).best_fitness - optimum) < 1e-12)
      ++de_hits;
  }
  require(ea_hits >= 9, "EA hit only " + std::to_string(ea_hits) + "/10");
  require(de_hits >= 9, "DE hit only " + std::to_string(de_hits) + "/10");
  std::ostringstream os;
  os << "EA " << ea_hits << "/10, DE " << de_hits << "/10";
  return os.str();
}

// 9. Generator counts.
std::string criterion_generator_counts() {
  Matrix seed(2, 2);
  seed << 0, 1, 1, 1;
  require(kronecker_power(seed, 9).size() == 512, "kronecker order 9 size");
  require(cayley_tree(4, 4).n == 161, "cayley tree z=4 depth=4 size");
  require(cayley_tree(3, 4).n == 46, "cayley tree z=3 depth=4 size");
  const Graph karate = karate_graph();
  require(karate.n == 34, "karate vertex count");
  require(karate.edges.size() == 78, "karate edge count");
  return "512 / 161 / 46 / 34 vertices / 78 edges, all exact";
}

// 10. Wavelet basis properties on every factorization produced here.
std::string criterion_wavelet_basis() {
  const SymmetricMatrix lap = normalized_laplacian(karate_graph());
  std::vector<MmfFactorization> produced;
  produced.push_back(greedy_jacobi_mmf(lap, 26));
  {
    PipelineOptions opt;
    opt.method = Method::ea;
    opt.L = 26;
    opt.k = 8;
    opt.c = 1;
    opt.seed = 0;
    opt.jobs = 4;
    produced.push_back(run_pipeline(lap, opt).factorization);
  }
  {
    PipelineOptions opt;
    opt.method = Method::heuristic;
    opt.L = 26;
    opt.k = 8;
    opt.c = 1;
    produced.push_back(run_pipeline(lap, opt).factorization);
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1, 1);
  double densest = 0.0;
  for (const MmfFactorization& f : produced) {
    const WaveletBasis basis = extract_basis(f);
    const double orth = (basis.matrix.transpose() * basis.matrix -
                         Matrix::Identity(basis.n, basis.n))
                            .norm();
    require(orth < 1e-8, "basis orthogonality " + std::to_string(orth));
    Vector signal(basis.n);
    for (int i = 0; i < basis.n; ++i) signal(i) = dist(rng);
    const double round_trip =
        (inverse_transform(basis, transform(basis, signal)) - signal).norm();
    require(round_trip < 1e-9, "round trip " + std::to_string(round_trip));
    densest = std::max(densest, sparsity(basis, 1e-8));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap.data());
  WaveletBasis fourier;
  fourier.n = 34;
  fourier.matrix = eig.eigenvectors().transpose();
  const double dense_fraction = sparsity(fourier, 1e-8);
  require(densest < dense_fraction,
          "wavelet fraction " + std::to_string(densest) +
              " not below the eigenbasis fraction " +
              std::to_string(dense_fraction));
  std::ostringstream os;
  os << produced.size() << " factorizations; densest wavelet fraction "
     << densest << " < eigenbasis " << dense_fraction;
  return os.str();
}

// 11. WNN identity map, gradient check, and the separable toy task.
std::string criterion_wnn() {
  // unit filters + identity activation = identity map
  std::mt19937_64 rng(11);
  WaveletBasis basis;
  basis.n = 6;
  basis.matrix = random_orthogonal(6, rng);
  for (int i = 0; i < 6; ++i) basis.father_rows.push_back(i);
  Matrix f0(6, 1);
  for (int i = 0; i < 6; ++i) f0(i, 0) = std::sin(1.0 + i);
  const wnn::WnnLayer unit =
      wnn::WnnLayer::ones(6, 1, 1, wnn::Activation::identity);
  require((wnn::layer_forward(unit, basis, f0) - f0).norm() < 1e-10,
          "unit-filter layer is not the identity");

  // gradients vs finite differences
  wnn::WnnNetwork net;
  net.layers.push_back(wnn::WnnLayer::ones(6, 1, 2, wnn::Activation::relu));
  net.layers.push_back(wnn::WnnLayer::ones(6, 2, 2, wnn::Activation::softmax));
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (auto& layer : net.layers)
    for (auto& row : layer.filters)
      for (Vector& g : row)
        for (int m = 0; m < 6; ++m) g(m) = 1.0 + dist(rng);
  const wnn::LabeledNodes labels{{{0, 0}, {3, 1}}, 2};
  const wnn::FilterGradients analytic = wnn::gradients(net, basis, f0, labels);
  const double h = 1e-5;
  double max_err = 0.0, scale = 1.0;
  for (std::size_t l = 0; l < net.layers.size(); ++l)
    for (int i = 0; i < net.layers[l].in_channels; ++i)
      for (int j = 0; j < net.layers[l].out_channels; ++j)
        for (int m = 0; m < 6; ++m) {
          wnn::WnnNetwork probe = net;
          probe.layers[l].filters[i][j](m) += h;
          const double fp =
              wnn::loss(wnn::network_forward(probe, basis, f0), labels);
          probe.layers[l].filters[i][j](m) -= 2 * h;
          const double fm =
              wnn::loss(wnn::network_forward(probe, basis, f0), labels);
          const double fd = (fp - fm) / (2 * h);
          max_err = std::max(max_err, std::abs(analytic[l][i][j](m) - fd));
          scale = std::max(scale, std::abs(fd));
        }
  require(max_err / scale < 1e-5,
          "gradient mismatch " + std::to_string(max_err / scale));

  // two-clique toy task
  const int m = 5, n = 10;
  std::vector<std::pair<int, int>> edges;
  for (int a2 = 0; a2 < m; ++a2)
    for (int b = a2 + 1; b < m; ++b) {
      edges.emplace_back(a2, b);
      edges.emplace_back(m + a2, m + b);
    }
  edges.emplace_back(m - 1, m);
  const Graph g(n, edges);
  const SymmetricMatrix lap = normalized_laplacian(g);
  const WaveletBasis toy_basis = extract_basis(greedy_jacobi_mmf(lap, 8));
  const Matrix features = g.adjacency();
  const wnn::LabeledNodes train_set{{{0, 0}, {m, 1}}, 2};
  wnn::LabeledNodes heldout{{}, 2};
  for (int v = 0; v < n; ++v)
    if (v != 0 && v != m) heldout.entries.emplace_back(v, v < m ? 0 : 1);
  wnn::WnnNetwork toy;
  toy.layers.push_back(wnn::WnnLayer::ones(n, n, 2, wnn::Activation::softmax));
  const wnn::TrainResult trained =
      wnn::train(toy, toy_basis, features, train_set, 0.5, 200);
  const double acc = wnn::accuracy(
      wnn::network_forward(trained.network, toy_basis, features), heldout);
  require(acc == 1.0, "held-out accuracy " + std::to_string(acc));
  std::ostringstream os;
  os << "identity map ok, gradient error " << max_err / scale
     << ", toy accuracy 1.0";
  return os.str();
}

// ----------------------------------------------------- criterion 12 helpers

int run_cli(const std::string& args) {
  const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>/dev/null";
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "missing output " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Wall-clock readings cannot repeat across runs: manifests are compared with
// duration_seconds erased, CSVs with any *seconds column blanked. Everything
// else must match byte for byte.
void compare_outputs(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a))
    names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  for (const std::string& name : names) {
    const std::string left = slurp(a / name);
    const std::string right = slurp(b / name);
    if (name == "manifest.json") {
      nlohmann::json ja = nlohmann::json::parse(left);
      nlohmann::json jb = nlohmann::json::parse(right);
      require(ja.at("duration_seconds").is_number() &&
                  jb.at("duration_seconds").is_number(),
              "manifest lacks a numeric duration");
      ja.erase("duration_seconds");
      jb.erase("duration_seconds");
      require(ja == jb, "manifest mismatch in " + name);
      continue;
    }
    if (name.ends_with(".csv")) {
      std::istringstream sa(left), sb(right);
      std::string ha, hb;
      std::getline(sa, ha);
      std::getline(sb, hb);
      require(ha == hb, "csv header mismatch in " + name);
      std::vector<std::string> cols;
      {
        std::stringstream hs(ha);
        std::string col;
        while (std::getline(hs, col, ',')) cols.push_back(col);
      }
      int time_col = -1;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == "seconds" || cols[i] == "elapsed_seconds")
          time_col = static_cast<int>(i);
      if (time_col < 0) {
        require(left == right, "csv mismatch in " + name);
        continue;
      }
      std::string la, lb;
      int lineno = 1;
      while (true) {
        const bool more_a = static_cast<bool>(std::getline(sa, la));
        const bool more_b = static_cast<bool>(std::getline(sb, lb));
        require(more_a == more_b, "csv row count mismatch in " + name);
        if (!more_a) break;
        ++lineno;
        auto split = [](const std::string& line) {
          std::vector<std::string> out;
          std::stringstream ss(line);
          std::string tok;
          while (std::getline(ss, tok, ',')) out.push_back(tok);
          return out;
        };
        std::vector<std::string> ra = split(la), rb = split(lb);
        require(ra.size() == rb.size(),
                "csv field count mismatch in " + name);
        for (std::size_t i = 0; i < ra.size(); ++i) {
          if (static_cast<int>(i) == time_col) continue;
          require(ra[i] == rb[i], "csv mismatch in " + name + " line " +
                                      std::to_string(lineno) + " field " +
                                      std::to_string(i));
        }
      }
      continue;
    }
    require(left == right, "byte mismatch in " + name);
  }
}

void write_toy_wnn_inputs(const fs::path& dir) {
  const int m = 5, n = 10;
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      edges.emplace_back(a, b);
      edges.emplace_back(m + a, m + b);
    }
  edges.emplace_back(m - 1, m);
  const Graph g(n, edges);
  io::write_matrix((dir / "toy_matrix.mtx").string(), normalized_laplacian(g));
  {
    std::ofstream out(dir / "toy_labels.csv");
    out << "vertex,class,split\n";
    for (int v = 0; v < n; ++v)
      out << v << "," << (v < m ? 0 : 1) << ","
          << ((v == 0 || v == m) ? "train" : "test") << "\n";
  }
  {
    const Matrix adj = g.adjacency();
    std::ofstream out(dir / "toy_features.csv");
    out << "vertex";
    for (int j = 0; j < n; ++j) out << ",f" << j;
    out << "\n";
    for (int v = 0; v < n; ++v) {
      out << v;
      for (int j = 0; j < n; ++j) out << "," << adj(v, j);
      out << "\n";
    }
  }
}

// 12. Every CLI command replays byte-identically from its manifest.
std::string criterion_determinism() {
  require(!g_cli_path.empty(), "CLI path not supplied (argv[1])");
  const fs::path root = g_scratch / "determinism";
  fs::create_directories(root);
  write_toy_wnn_inputs(root);
  const std::string karate_dir = (root / "karate").string();
  struct Step {
    std::string name;
    std::string args;
  };
  const std::vector<Step> steps = {
      {"generate", "generate karate --out " + karate_dir},
      {"factorize",
       "factorize --matrix " + karate_dir + "/matrix.mtx --method de --L 26 "
       "--k 8 --population 16 --generations 20 --seed 11 --out " +
           (root / "fact").string()},
      {"benchmark",
       "benchmark --matrix " + karate_dir + "/matrix.mtx "
       "--dL-grid 8,16 --methods learned-de,greedy-jacobi,nystrom --seeds 2 "
       "--nystrom-seeds 3 --population 12 --generations 10 --seed 4 "
       "--jobs 3 --out " +
           (root / "bench").string()},
      {"wavelets", "wavelets --factorization " + (root / "fact").string() +
                       "/factorization.json --out " + (root / "wav").string()},
      {"wnn",
       "wnn --matrix " + (root / "toy_matrix.mtx").string() + " --labels " +
           (root / "toy_labels.csv").string() + " --features " +
           (root / "toy_features.csv").string() +
           " --method greedy-jacobi --L 8 --k 2 --lr 0.5 --epochs 50 --out " +
           (root / "wnn").string()},
  };
  for (const Step& step : steps) {
    require(run_cli(step.args) == 0, step.name + " failed");
    const fs::path first =
        (step.name == "generate") ? fs::path(karate_dir) : root / step.name;
    // locate the output dir named in --out
    fs::path out_dir = first;
    if (step.name == "factorize") out_dir = root / "fact";
    if (step.name == "benchmark") out_dir = root / "bench";
    if (step.name == "wavelets") out_dir = root / "wav";
    const fs::path replay = root / (step.name + "_replay");
    require(run_cli("rerun " + (out_dir / "manifest.json").string() +
                    " --out " + replay.string()) == 0,
            step.name + " rerun failed");
    compare_outputs(out_dir, replay);
  }
  return "generate/factorize/benchmark(jobs=3)/wavelets/wnn all replay "
         "byte-identically (wall-clock fields excluded)";
}

struct CriterionSpec {
  int id;
  const char* name;
  double time_limit_seconds;  // 0 = none stated
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  g_scratch = fs::temp_directory_path() / "mmf_acceptance";
  fs::remove_all(g_scratch);
  fs::create_directories(g_scratch);

  const std::vector<CriterionSpec> criteria = {
      {1, "exact-diagonalization sanity", 1.0, criterion_exact_diagonalization},
      {2, "gradient correctness", 30.0, criterion_gradient_correctness},
      {3, "manifold feasibility & descent", 0.0, criterion_manifold_descent},
      {4, "error ordering on the d_L grid", 900.0, criterion_error_ordering},
      {5, "fitness ordering after 100 generations", 600.0,
       criterion_fitness_ordering},
      {6, "DE faster than EA", 0.0, criterion_runtime_ordering},
      {7, "crossover golden example", 0.0, criterion_crossover_golden},
      {8, "metaheuristic optimality on 4x4 instances", 120.0,
       criterion_brute_force_optimality},
      {9, "generator counts", 0.0, criterion_generator_counts},
      {10, "wavelet basis properties", 0.0, criterion_wavelet_basis},
      {11, "wavelet network checks", 60.0, criterion_wnn},
      {12, "manifest determinism", 0.0, criterion_determinism},
  };

  int failures = 0;
  for (const CriterionSpec& spec : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
      detail = spec.run();
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (pass && spec.time_limit_seconds > 0.0 &&
        seconds > spec.time_limit_seconds) {
      pass = false;
      detail = "exceeded the stated runtime limit of " +
               std::to_string(spec.time_limit_seconds) + " s";
    }
    if (!pass) ++failures;
    std::printf("[%s] criterion %2d: %s — %s (%.2f s)\n",
                pass ? "PASS" : "FAIL", spec.id, spec.name, detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
