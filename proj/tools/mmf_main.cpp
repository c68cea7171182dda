// Command-line surface: generate | factorize | benchmark | wavelets | wnn |
// rerun. Every command writes its outputs plus a manifest.json into --out;
// `mmf rerun <manifest>` replays a manifest into a fresh directory.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmf/evolution.hpp"
#include "mmf/graphs.hpp"
#include "mmf/io.hpp"
#include "mmf/log.hpp"
#include "mmf/nystrom.hpp"
#include "mmf/pipeline.hpp"
#include "mmf/rng.hpp"
#include "mmf/version.hpp"
#include "mmf/wavelets.hpp"
#include "mmf/wnn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mmf;

namespace {

using Clock = std::chrono::steady_clock;

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const fs::path& path) : out(path) {
    if (!out) throw std::runtime_error("cannot open " + path.string());
  }
  void line(const std::string& s) { out << s << "\n"; }
};

std::string fmt(double v) { return io::format_double(v); }

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      out.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("malformed ") + what + ": " + csv);
    }
  }
  if (out.empty())
    throw std::runtime_error(std::string("empty ") + what);
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(token);
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const json& params, const std::vector<std::string>& outputs,
                    double duration_seconds) {
  json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["seed"] = params.value("seed", std::uint64_t{0});
  manifest["parameters"] = params;
  manifest["outputs"] = outputs;
  manifest["duration_seconds"] = duration_seconds;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest");
  out << manifest.dump(2) << "\n";
}

stiefel::StiefelConfig stiefel_from(const json& p) {
  stiefel::StiefelConfig cfg;
  cfg.rho1 = p.at("rho1").get<double>();
  cfg.rho2 = p.at("rho2").get<double>();
  cfg.epsilon = p.at("epsilon").get<double>();
  cfg.max_outer_iters = p.at("max_iters").get<int>();
  cfg.tau_init = p.at("tau_init").get<double>();
  cfg.max_halvings = p.at("max_halvings").get<int>();
  return cfg;
}

PipelineOptions pipeline_from(const json& p, Method method, int L, int k,
                              std::uint64_t seed) {
  PipelineOptions opt;
  opt.method = method;
  opt.L = L;
  opt.k = k;
  opt.c = p.at("c").get<int>();
  opt.seed = seed;
  opt.jobs = p.at("jobs").get<int>();
  opt.population = p.at("population").get<int>();
  opt.generations = p.at("generations").get<int>();
  opt.mutation_rate = p.at("mutation_rate").get<double>();
  opt.stiefel = stiefel_from(p);
  return opt;
}

// ---------------------------------------------------------------- generate

std::vector<std::string> run_generate(const json& p, const fs::path& dir) {
  const std::string kind = p.at("kind").get<std::string>();
  std::optional<SymmetricMatrix> matrix;
  if (kind == "karate") {
    matrix = normalized_laplacian(karate_graph());
  } else if (kind == "cayley-tree") {
    matrix = normalized_laplacian(
        cayley_tree(p.at("z").get<int>(), p.at("depth").get<int>()));
  } else if (kind == "kronecker") {
    const std::vector<std::string> entries =
        parse_string_list(p.at("seed_matrix").get<std::string>());
    if (entries.size() != 4)
      throw std::runtime_error("--seed-matrix needs 4 comma-separated values");
    Matrix seed(2, 2);
    seed << std::stod(entries[0]), std::stod(entries[1]),
        std::stod(entries[2]), std::stod(entries[3]);
    matrix = kronecker_power(seed, p.at("order").get<int>());
  } else {
    throw std::runtime_error("unknown generator kind '" + kind + "'");
  }
  io::write_matrix((dir / "matrix.mtx").string(), *matrix);
  log::info("generate " + kind + ": n = " + std::to_string(matrix->size()));
  return {"matrix.mtx"};
}

// --------------------------------------------------------------- factorize

std::vector<std::string> run_factorize(const json& p, const fs::path& dir) {
  const SymmetricMatrix a = io::read_matrix(p.at("matrix").get<std::string>());
  const Method method = parse_method(p.at("method").get<std::string>());
  const int L = p.at("L").get<int>();
  const int k = p.at("k").get<int>();
  const PipelineOptions opt =
      pipeline_from(p, method, L, k, p.at("seed").get<std::uint64_t>());
  if (static_cast<long>(L) * opt.c >= a.size())
    throw std::runtime_error("infeasible sizes: L*c must be < n");

  const PipelineResult result = run_pipeline(a, opt);
  io::write_factorization((dir / "factorization.json").string(),
                          result.factorization);
  std::vector<std::string> outputs = {"factorization.json",
                                      "error_summary.csv"};
  {
    CsvWriter csv(dir / "error_summary.csv");
    csv.line("method,n,L,k,c,d_L,initial_error,final_error");
    std::ostringstream row;
    row << method_name(method) << "," << a.size() << "," << L << "," << k
        << "," << opt.c << "," << (a.size() - L * opt.c) << ","
        << fmt(result.initial_error) << "," << fmt(result.final_error);
    csv.line(row.str());
  }
  if (result.convergence) {
    result.convergence->write_csv((dir / "convergence.csv").string());
    outputs.push_back("convergence.csv");
  }
  log::info("factorize " + method_name(method) +
            ": error " + fmt(result.initial_error) + " -> " +
            fmt(result.final_error));
  return outputs;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkCell {
  std::string method;
  int d_l = 0;
  int seed_index = 0;
};

struct BenchmarkRow {
  double error = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::string reason;
};

std::vector<std::string> run_benchmark(const json& p, const fs::path& dir) {
  const SymmetricMatrix a = io::read_matrix(p.at("matrix").get<std::string>());
  const std::vector<int> grid =
      parse_int_list(p.at("dL_grid").get<std::string>(), "--dL-grid");
  const std::vector<std::string> methods =
      parse_string_list(p.at("methods").get<std::string>());
  const int seeds = p.at("seeds").get<int>();
  const int nystrom_seeds = p.at("nystrom_seeds").get<int>();
  const int c = p.at("c").get<int>();
  const std::uint64_t base_seed = p.at("seed").get<std::uint64_t>();
  const int jobs = std::max(1, p.at("jobs").get<int>());

  std::vector<BenchmarkCell> cells;
  for (const std::string& method : methods) {
    const bool stochastic = method == "learned-ea" || method == "learned-de" ||
                            method == "random";
    const int cell_seeds =
        method == "nystrom" ? nystrom_seeds : (stochastic ? seeds : 1);
    for (int d_l : grid)
      for (int s = 0; s < cell_seeds; ++s)
        cells.push_back(BenchmarkCell{method, d_l, s});
  }

  std::vector<BenchmarkRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const BenchmarkCell& cell = cells[i];
      BenchmarkRow& row = rows[i];
      try {
        const auto start = Clock::now();
        if (cell.method == "nystrom") {
          row.error =
              nystrom(a, cell.d_l,
                      make_rng(base_seed, 0xBE, cell.d_l, cell.seed_index)())
                  .error;
        } else {
          if ((a.size() - cell.d_l) % c != 0)
            throw std::runtime_error("n - d_L not divisible by c");
          const int L = (a.size() - cell.d_l) / c;
          int k = p.at("k").get<int>();
          if (cell.method == "greedy-jacobi") k = 2;
          if (k > cell.d_l + c) {
            k = cell.d_l + c;  // largest feasible order at the last level
            log::info("benchmark: clamped k to " + std::to_string(k) +
                      " for d_L=" + std::to_string(cell.d_l));
          }
          const PipelineOptions opt = pipeline_from(
              p, parse_method(cell.method), L, k,
              make_rng(base_seed, 0xFA, cell.d_l, cell.seed_index)());
          row.error = run_pipeline(a, opt).final_error;
        }
        row.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      } catch (const std::exception& e) {
        row.reason = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  CsvWriter csv(dir / "benchmark.csv");
  csv.line("method,d_L,seed,error,seconds,reason");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::ostringstream row;
    row << cells[i].method << "," << cells[i].d_l << "," << cells[i].seed_index
        << "," << (std::isnan(rows[i].error) ? "NaN" : fmt(rows[i].error))
        << ",";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", rows[i].seconds);
    row << buf << "," << rows[i].reason;
    csv.line(row.str());
  }
  // per-(method, d_L) mean and min summaries on the log stream
  for (const std::string& method : methods)
    for (int d_l : grid) {
      double sum = 0.0, best = std::numeric_limits<double>::infinity();
      int count = 0;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].method == method && cells[i].d_l == d_l &&
            !std::isnan(rows[i].error)) {
          sum += rows[i].error;
          best = std::min(best, rows[i].error);
          ++count;
        }
      if (count > 0) {
        std::ostringstream os;
        os << "benchmark " << method << " d_L=" << d_l << ": mean "
           << (sum / count) << ", min " << best << " over " << count
           << " seed(s)";
        log::info(os.str());
      }
    }
  return {"benchmark.csv"};
}

// ---------------------------------------------------------------- wavelets

std::vector<std::string> run_wavelets(const json& p, const fs::path& dir) {
  const MmfFactorization f =
      io::read_factorization(p.at("factorization").get<std::string>());
  const WaveletBasis basis = extract_basis(f);  // validates orthogonality
  std::vector<std::string> outputs = {"basis.mtx", "basis_tags.json"};
  io::write_basis((dir / "basis.mtx").string(),
                  (dir / "basis_tags.json").string(), basis);
  for (int row = 0; row < basis.n; ++row) {
    char name[32];
    std::snprintf(name, sizeof(name), "wavelet_%03d.csv", row);
    CsvWriter csv(dir / name);
    csv.line("vertex,value");
    for (int v = 0; v < basis.n; ++v)
      csv.line(std::to_string(v) + "," + fmt(basis.matrix(row, v)));
    outputs.push_back(name);
  }
  const double fraction = sparsity(basis, p.at("threshold").get<double>());
  std::cout << "sparsity " << fmt(fraction) << "\n";
  return outputs;
}

// --------------------------------------------------------------------- wnn

struct LabelFile {
  wnn::LabeledNodes train;
  wnn::LabeledNodes test;
};

LabelFile read_labels(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "vertex,class,split")
    throw std::runtime_error(path + ": expected header vertex,class,split");
  LabelFile out;
  std::vector<char> seen(n, 0);
  int lineno = 1;
  int max_class = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string v_str, c_str, split;
    if (!std::getline(ss, v_str, ',') || !std::getline(ss, c_str, ',') ||
        !std::getline(ss, split, ','))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected vertex,class,split");
    const int v = std::stoi(v_str), c = std::stoi(c_str);
    if (v < 0 || v >= n)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": vertex out of range");
    if (seen[v])
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": duplicate vertex");
    seen[v] = 1;
    max_class = std::max(max_class, c);
    if (split == "train")
      out.train.entries.emplace_back(v, c);
    else if (split == "test")
      out.test.entries.emplace_back(v, c);
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": split must be train or test");
  }
  out.train.num_classes = out.test.num_classes = max_class + 1;
  return out;
}

Matrix read_features(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("vertex,", 0) != 0)
    throw std::runtime_error(path + ": expected header vertex,f0,...");
  const int cols = static_cast<int>(
      std::count(line.begin(), line.end(), ','));
  Matrix features = Matrix::Zero(n, cols);
  std::vector<char> seen(n, 0);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    if (!std::getline(ss, token, ','))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty row");
    const int v = std::stoi(token);
    if (v < 0 || v >= n || seen[v])
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad or duplicate vertex");
    seen[v] = 1;
    for (int j = 0; j < cols; ++j) {
      if (!std::getline(ss, token, ','))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(cols) +
                                 " features");
      features(v, j) = std::stod(token);
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[v])
      throw std::runtime_error(path + ": missing features for vertex " +
                               std::to_string(v));
  return features;
}

std::vector<std::string> run_wnn(const json& p, const fs::path& dir) {
  const SymmetricMatrix a = io::read_matrix(p.at("matrix").get<std::string>());
  const LabelFile labels = read_labels(p.at("labels").get<std::string>(),
                                       a.size());
  const Matrix f0 = read_features(p.at("features").get<std::string>(),
                                  a.size());
  if (labels.train.num_classes < 2)
    throw std::runtime_error("need at least two classes");

  const Method method = parse_method(p.at("method").get<std::string>());
  const PipelineOptions opt =
      pipeline_from(p, method, p.at("L").get<int>(), p.at("k").get<int>(),
                    p.at("seed").get<std::uint64_t>());
  if (opt.c != 1) throw std::runtime_error("wnn requires c = 1");
  const PipelineResult pipeline = run_pipeline(a, opt);
  const WaveletBasis basis = extract_basis(pipeline.factorization);

  const int layers = p.at("layers").get<int>();
  const int hidden = p.at("hidden").get<int>();
  const int classes = labels.train.num_classes;
  wnn::WnnNetwork net;
  int in_channels = static_cast<int>(f0.cols());
  for (int l = 0; l < layers; ++l) {
    const bool top = (l == layers - 1);
    const int out_channels = top ? classes : hidden;
    net.layers.push_back(wnn::WnnLayer::ones(
        a.size(), in_channels, out_channels,
        top ? wnn::Activation::softmax : wnn::Activation::relu));
    in_channels = out_channels;
  }

  const wnn::TrainResult trained =
      wnn::train(net, basis, f0, labels.train, p.at("lr").get<double>(),
                 p.at("epochs").get<int>());
  const Matrix out = wnn::network_forward(trained.network, basis, f0);
  const double final_loss = wnn::loss(out, labels.train);
  const double test_accuracy = wnn::accuracy(out, labels.test);
  io::write_network((dir / "network.json").string(), trained.network,
                    a.size());

  {
    CsvWriter csv(dir / "loss_trace.csv");
    csv.line("epoch,loss");
    for (std::size_t e = 0; e < trained.loss_trace.size(); ++e)
      csv.line(std::to_string(e) + "," + fmt(trained.loss_trace[e]));
  }
  {
    CsvWriter csv(dir / "metrics.csv");
    csv.line("train_count,test_count,final_loss,test_accuracy,diverged");
    std::ostringstream row;
    row << labels.train.entries.size() << "," << labels.test.entries.size()
        << "," << fmt(final_loss) << "," << fmt(test_accuracy) << ","
        << (trained.diverged ? 1 : 0);
    csv.line(row.str());
  }
  log::info("wnn: test accuracy " + fmt(test_accuracy));
  return {"loss_trace.csv", "metrics.csv", "network.json"};
}

// ------------------------------------------------------------------ driver

std::vector<std::string> dispatch(const std::string& command, const json& p,
                                  const fs::path& dir) {
  if (command == "generate") return run_generate(p, dir);
  if (command == "factorize") return run_factorize(p, dir);
  if (command == "benchmark") return run_benchmark(p, dir);
  if (command == "wavelets") return run_wavelets(p, dir);
  if (command == "wnn") return run_wnn(p, dir);
  throw std::runtime_error("unknown command '" + command + "'");
}

int execute(const std::string& command, const json& params,
            const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto start = Clock::now();
  const std::vector<std::string> outputs = dispatch(command, params, dir);
  const double duration =
      std::chrono::duration<double>(Clock::now() - start).count();
  write_manifest(dir, command, params, outputs, duration);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiresolution matrix factorization toolkit"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;

  // generate
  auto* gen = app.add_subcommand("generate", "write a test matrix");
  std::string gen_kind;
  int gen_z = 4, gen_depth = 4, gen_order = 9;
  std::string gen_seed_matrix = "0,1,1,1";
  gen->add_option("kind", gen_kind, "karate | kronecker | cayley-tree")
      ->required();
  gen->add_option("--z", gen_z, "coordination number (cayley-tree)");
  gen->add_option("--depth", gen_depth, "levels below the root (cayley-tree)");
  gen->add_option("--order", gen_order, "Kronecker power order");
  gen->add_option("--seed-matrix", gen_seed_matrix,
                  "2x2 seed entries a,b,c,d (kronecker)");

  // shared factorization options
  std::string matrix_path, method = "de";
  int L = 0, k = 8, c = 1;
  int population = 40, generations = 100;
  double mutation_rate = 0.3;
  double rho1 = 1e-4, rho2 = 0.9, epsilon = 1e-6, tau_init = 1.0;
  int max_iters = 500, max_halvings = 40;
  auto add_pipeline_flags = [&](CLI::App* cmd, bool with_L) {
    cmd->add_option("--matrix", matrix_path, "MatrixMarket input")->required();
    if (with_L) cmd->add_option("--L", L, "resolution levels")->required();
    cmd->add_option("--k", k, "rotation order");
    cmd->add_option("--c", c, "wavelets dropped per level");
    cmd->add_option("--population", population, "metaheuristic population");
    cmd->add_option("--generations", generations, "metaheuristic generations");
    cmd->add_option("--mutation-rate", mutation_rate, "EA mutation rate");
    cmd->add_option("--rho1", rho1, "sufficient-decrease parameter");
    cmd->add_option("--rho2", rho2, "curvature parameter");
    cmd->add_option("--epsilon", epsilon, "gradient stopping threshold");
    cmd->add_option("--max-iters", max_iters, "descent iteration cap");
    cmd->add_option("--tau-init", tau_init, "initial curvilinear step");
    cmd->add_option("--max-halvings", max_halvings, "line-search halvings");
  };

  auto* fac = app.add_subcommand("factorize", "factorize a matrix");
  add_pipeline_flags(fac, true);
  fac->add_option("--method", method,
                  "ea | de | heuristic | random | greedy-jacobi")
      ->required();

  auto* bench = app.add_subcommand("benchmark", "error/time grid over d_L");
  std::string dl_grid = "4,8,12,16";
  std::string methods = "learned-ea,greedy-jacobi,nystrom";
  int bench_seeds = 3, nystrom_seeds = 20;
  add_pipeline_flags(bench, false);
  bench->add_option("--dL-grid", dl_grid, "comma-separated core sizes");
  bench->add_option("--methods", methods, "comma-separated method list");
  bench->add_option("--seeds", bench_seeds, "seeds per stochastic method");
  bench->add_option("--nystrom-seeds", nystrom_seeds, "seeds for nystrom");

  auto* wav = app.add_subcommand("wavelets", "export a wavelet basis");
  std::string factorization_path;
  double threshold = 1e-8;
  wav->add_option("--factorization", factorization_path, "factorization JSON")
      ->required();
  wav->add_option("--threshold", threshold, "sparsity threshold");

  auto* wnn_cmd = app.add_subcommand("wnn", "train a wavelet network");
  std::string labels_path, features_path;
  int layers = 1, hidden = 8, epochs = 200;
  double lr = 0.5;
  add_pipeline_flags(wnn_cmd, true);
  wnn_cmd->add_option("--labels", labels_path, "vertex,class,split CSV")
      ->required();
  wnn_cmd->add_option("--features", features_path, "vertex,f0,... CSV")
      ->required();
  wnn_cmd->add_option("--layers", layers, "convolution layers");
  wnn_cmd->add_option("--hidden", hidden, "hidden channels");
  wnn_cmd->add_option("--lr", lr, "learning rate");
  wnn_cmd->add_option("--epochs", epochs, "training epochs");
  wnn_cmd->add_option("--method", method,
                      "ea | de | heuristic | random | greedy-jacobi");

  auto* rerun = app.add_subcommand("rerun", "replay a manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "manifest.json path")
      ->required();

  for (CLI::App* cmd : {gen, fac, bench, wav, wnn_cmd, rerun}) {
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--jobs", jobs, "parallel workers");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    json p;
    p["seed"] = seed;
    p["jobs"] = jobs;
    if (gen->parsed()) {
      p["kind"] = gen_kind;
      p["z"] = gen_z;
      p["depth"] = gen_depth;
      p["order"] = gen_order;
      p["seed_matrix"] = gen_seed_matrix;
      return execute("generate", p, out_dir);
    }
    auto fill_pipeline = [&](bool with_L) {
      p["matrix"] = matrix_path;
      if (with_L) p["L"] = L;
      p["k"] = k;
      p["c"] = c;
      p["population"] = population;
      p["generations"] = generations;
      p["mutation_rate"] = mutation_rate;
      p["rho1"] = rho1;
      p["rho2"] = rho2;
      p["epsilon"] = epsilon;
      p["max_iters"] = max_iters;
      p["tau_init"] = tau_init;
      p["max_halvings"] = max_halvings;
    };
    if (fac->parsed()) {
      fill_pipeline(true);
      p["method"] = method;
      return execute("factorize", p, out_dir);
    }
    if (bench->parsed()) {
      fill_pipeline(false);
      p["dL_grid"] = dl_grid;
      p["methods"] = methods;
      p["seeds"] = bench_seeds;
      p["nystrom_seeds"] = nystrom_seeds;
      return execute("benchmark", p, out_dir);
    }
    if (wav->parsed()) {
      p["factorization"] = factorization_path;
      p["threshold"] = threshold;
      return execute("wavelets", p, out_dir);
    }
    if (wnn_cmd->parsed()) {
      fill_pipeline(true);
      p["method"] = method;
      p["labels"] = labels_path;
      p["features"] = features_path;
      p["layers"] = layers;
      p["hidden"] = hidden;
      p["lr"] = lr;
      p["epochs"] = epochs;
      return execute("wnn", p, out_dir);
    }
    if (rerun->parsed()) {
      std::ifstream in(manifest_path);
      if (!in) throw std::runtime_error("cannot open " + manifest_path);
      json manifest;
      in >> manifest;
      const std::string command = manifest.at("command").get<std::string>();
      return execute(command, manifest.at("parameters"), out_dir);
    }
  } catch (const std::exception& e) {
    log::error(e.what());
    return 1;
  }
  return 0;
}
