#include "mmf/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mmf::io {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& msg) {
  std::ostringstream os;
  os << path << ":" << line << ": " << msg;
  throw std::runtime_error(os.str());
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

const json& require_field(const json& j, const char* field,
                          const std::string& path) {
  if (!j.contains(field))
    throw std::runtime_error(path + ": missing field '" + field + "'");
  return j.at(field);
}

Matrix matrix_from_row_major(const json& values, int rows, int cols,
                             const char* field, const std::string& path) {
  if (!values.is_array() || static_cast<int>(values.size()) != rows * cols)
    throw std::runtime_error(path + ": field '" + field + "' must hold " +
                             std::to_string(rows * cols) + " numbers");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = values[i * cols + j].get<double>();
  return m;
}

json row_major(const Matrix& m) {
  json values = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  return values;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SymmetricMatrix read_matrix(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "empty file");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lowercase(object) != "matrix")
      parse_fail(path, lineno, "expected '%%MatrixMarket matrix ...' header");
    if (lowercase(fmt) != "coordinate")
      parse_fail(path, lineno, "expected coordinate format");
    if (lowercase(field) != "real")
      parse_fail(path, lineno, "expected real field");
    if (lowercase(symmetry) != "symmetric")
      parse_fail(path, lineno,
                 "expected symmetric kind, got '" + symmetry + "'");
  }

  int rows = -1, cols = -1;
  long nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz))
      parse_fail(path, lineno, "malformed size line");
    break;
  }
  if (rows < 1 || rows != cols)
    parse_fail(path, lineno, "matrix must be square with n >= 1");

  Matrix a = Matrix::Zero(rows, cols);
  std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
  long read_count = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int i, j;
    double v;
    if (!(ss >> i >> j >> v)) parse_fail(path, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      parse_fail(path, lineno, "entry index out of bounds");
    if (j > i)
      parse_fail(path, lineno,
                 "symmetric files must store lower-triangle entries (i >= j)");
    const std::size_t key = static_cast<std::size_t>(i - 1) * cols + (j - 1);
    if (seen[key]) parse_fail(path, lineno, "duplicate entry");
    seen[key] = 1;
    a(i - 1, j - 1) = v;
    a(j - 1, i - 1) = v;
    ++read_count;
  }
  if (nnz >= 0 && read_count != nnz)
    parse_fail(path, lineno, "entry count does not match the size line");
  return SymmetricMatrix(std::move(a));
}

void write_matrix(const std::string& path, const SymmetricMatrix& a) {
  std::ofstream out = open_for_write(path);
  const int n = a.size();
  long nnz = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (a(i, j) != 0.0) ++nnz;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << " " << n << " " << nnz << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (a(i, j) != 0.0)
        out << (i + 1) << " " << (j + 1) << " " << format_double(a(i, j))
            << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int lineno = 0;
  int declared_n = -1;
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      // directive `# n=<N>` may appear in a comment
      std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string token;
      if (cs >> token && token.rfind("n=", 0) == 0) {
        try {
          declared_n = std::stoi(token.substr(2));
        } catch (const std::exception&) {
          parse_fail(path, lineno, "malformed n= directive");
        }
        if (declared_n < 1) parse_fail(path, lineno, "n directive must be >= 1");
      }
      line = line.substr(0, hash);
    }
    std::istringstream ss(line);
    long u, v;
    if (!(ss >> u)) continue;  // blank or comment-only line
    if (!(ss >> v)) parse_fail(path, lineno, "expected `u v` pair");
    if (u < 0 || v < 0) parse_fail(path, lineno, "negative vertex index");
    if (u == v) parse_fail(path, lineno, "self-loop");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_index = std::max(max_index, static_cast<int>(std::max(u, v)));
  }
  int n = (declared_n > 0) ? declared_n : max_index + 1;
  if (n < 1) throw std::runtime_error(path + ": no vertices");
  if (declared_n > 0 && max_index >= declared_n)
    throw std::runtime_error(path + ": edge index exceeds declared n");
  return Graph(n, std::move(edges));
}

MmfFactorization read_factorization(const std::string& path) {
  std::ifstream in = open_for_read(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  const int n = require_field(j, "n", path).get<int>();
  const int depth = require_field(j, "L", path).get<int>();
  const int k = require_field(j, "k", path).get<int>();
  const int c = require_field(j, "c", path).get<int>();
  const json& levels = require_field(j, "levels", path);
  if (!levels.is_array() || static_cast<int>(levels.size()) != depth)
    throw std::runtime_error(path + ": field 'levels' must hold L records");

  std::vector<SelectionLevel> sel_levels;
  std::vector<KPointRotation> rotations;
  for (int l = 0; l < depth; ++l) {
    const json& level = levels[l];
    SelectionLevel s;
    for (const json& w : require_field(level, "wavelet_indices", path))
      s.wavelet_indices.push_back(w.get<int>());
    for (const json& r : require_field(level, "rotation_support", path))
      s.rotation_support.push_back(r.get<int>());
    if (static_cast<int>(s.wavelet_indices.size()) != c ||
        static_cast<int>(s.rotation_support.size()) != k)
      throw std::runtime_error(path + ": level " + std::to_string(l) +
                               " sizes disagree with k/c");
    Matrix core = matrix_from_row_major(require_field(level, "core", path), k,
                                        k, "core", path);
    KPointRotation rot(n, s.rotation_support, std::move(core));
    const double err = rot.orthogonality_error();
    if (err > kOrthogonalityTol) {
      std::ostringstream os;
      os << path << ": rotation core at level " << l
         << " violates orthogonality (error " << err << ")";
      throw std::runtime_error(os.str());
    }
    sel_levels.push_back(std::move(s));
    rotations.push_back(std::move(rot));
  }

  std::vector<int> core_indices;
  for (const json& idx : require_field(j, "core_indices", path))
    core_indices.push_back(idx.get<int>());
  const int s = static_cast<int>(core_indices.size());
  Matrix h_core = matrix_from_row_major(require_field(j, "h_core", path), s, s,
                                        "h_core", path);
  const json& jdiag = require_field(j, "h_diagonal", path);
  if (!jdiag.is_array() || static_cast<int>(jdiag.size()) != n)
    throw std::runtime_error(path + ": field 'h_diagonal' must hold n numbers");
  Vector h_diag(n);
  for (int i = 0; i < n; ++i) h_diag(i) = jdiag[i].get<double>();

  try {
    NestedSelection selection(n, std::move(sel_levels));
    CoreDiagonalMatrix h(n, std::move(core_indices), std::move(h_core),
                         std::move(h_diag));
    MmfFactorization f{std::move(selection), std::move(rotations), std::move(h)};
    f.validate();
    return f;
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_factorization(const std::string& path, const MmfFactorization& f) {
  f.validate();
  json j;
  j["n"] = f.selection.size();
  j["L"] = f.selection.depth();
  j["k"] = f.selection.depth() > 0 ? f.selection.rotation_order() : 0;
  j["c"] = f.selection.depth() > 0 ? f.selection.wavelets_per_level() : 0;
  json levels = json::array();
  for (int l = 0; l < f.selection.depth(); ++l) {
    json level;
    level["wavelet_indices"] = f.selection.levels()[l].wavelet_indices;
    level["rotation_support"] = f.selection.levels()[l].rotation_support;
    level["core"] = row_major(f.rotations[l].core);
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  j["core_indices"] = f.h.core_indices;
  j["h_core"] = row_major(f.h.core);
  json diag = json::array();
  for (int i = 0; i < f.h.n; ++i) diag.push_back(f.h.diagonal(i));
  j["h_diagonal"] = std::move(diag);

  std::ofstream out = open_for_write(path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string activation_name(wnn::Activation a) {
  switch (a) {
    case wnn::Activation::identity: return "identity";
    case wnn::Activation::relu: return "relu";
    case wnn::Activation::softmax: return "softmax";
  }
  throw std::logic_error("unknown activation");
}

wnn::Activation activation_from(const std::string& name,
                                const std::string& path) {
  if (name == "identity") return wnn::Activation::identity;
  if (name == "relu") return wnn::Activation::relu;
  if (name == "softmax") return wnn::Activation::softmax;
  throw std::runtime_error(path + ": unknown activation '" + name + "'");
}

}  // namespace

void write_network(const std::string& path, const wnn::WnnNetwork& net, int n) {
  json j;
  j["n"] = n;
  json layers = json::array();
  for (const wnn::WnnLayer& layer : net.layers) {
    json jl;
    jl["in_channels"] = layer.in_channels;
    jl["out_channels"] = layer.out_channels;
    jl["activation"] = activation_name(layer.activation);
    json filters = json::array();
    for (const auto& row : layer.filters) {
      json jrow = json::array();
      for (const Vector& g : row) {
        json diag = json::array();
        for (int m = 0; m < g.size(); ++m) diag.push_back(g(m));
        jrow.push_back(std::move(diag));
      }
      filters.push_back(std::move(jrow));
    }
    jl["filters"] = std::move(filters);
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

wnn::WnnNetwork read_network(const std::string& path) {
  std::ifstream in = open_for_read(path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  const int n = require_field(j, "n", path).get<int>();
  wnn::WnnNetwork net;
  for (const json& jl : require_field(j, "layers", path)) {
    wnn::WnnLayer layer;
    layer.in_channels = require_field(jl, "in_channels", path).get<int>();
    layer.out_channels = require_field(jl, "out_channels", path).get<int>();
    layer.activation = activation_from(
        require_field(jl, "activation", path).get<std::string>(), path);
    const json& filters = require_field(jl, "filters", path);
    if (static_cast<int>(filters.size()) != layer.in_channels)
      throw std::runtime_error(path + ": filter grid shape mismatch");
    for (const json& jrow : filters) {
      if (static_cast<int>(jrow.size()) != layer.out_channels)
        throw std::runtime_error(path + ": filter grid shape mismatch");
      std::vector<Vector> row;
      for (const json& diag : jrow) {
        if (static_cast<int>(diag.size()) != n)
          throw std::runtime_error(path + ": filter diagonal must hold n values");
        Vector g(n);
        for (int m = 0; m < n; ++m) g(m) = diag[m].get<double>();
        row.push_back(std::move(g));
      }
      layer.filters.push_back(std::move(row));
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

void write_basis(const std::string& matrix_path, const std::string& tags_path,
                 const WaveletBasis& basis) {
  {
    std::ofstream out = open_for_write(matrix_path);
    out << "%%MatrixMarket matrix array real general\n";
    out << basis.n << " " << basis.n << "\n";
    // array format is column-major
    for (int j = 0; j < basis.n; ++j)
      for (int i = 0; i < basis.n; ++i)
        out << format_double(basis.matrix(i, j)) << "\n";
    if (!out) throw std::runtime_error("write failed: " + matrix_path);
  }
  json j;
  j["n"] = basis.n;
  json mothers = json::array();
  for (const MotherTag& tag : basis.mother_rows)
    mothers.push_back({{"row", tag.row}, {"level", tag.level}});
  j["mothers"] = std::move(mothers);
  j["fathers"] = basis.father_rows;
  std::ofstream out = open_for_write(tags_path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + tags_path);
}

}  // namespace mmf::io
