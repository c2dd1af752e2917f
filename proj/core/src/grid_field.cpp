#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sgls/errors.hpp"
#include "sgls/field.hpp"

namespace sgls {

namespace {

constexpr char kBinaryMagic[8] = {'S', 'G', 'L', 'S', 'G', 'R', 'D', '1'};
constexpr const char* kCsvMagic = "# sgls grid v1";

struct Stencil {
  std::array<int, 4> offsets{};
  std::array<double, 4> weights{};
  int size = 0;
};

// Second-order accurate stencil for the order-th derivative at node i of n.
Stencil node_stencil(int order, std::size_t i, std::size_t n, double h) {
  Stencil s;
  const bool first = i == 0;
  const bool last = i + 1 == n;
  if (order == 0) {
    s.size = 1;
    s.offsets[0] = 0;
    s.weights[0] = 1.0;
  } else if (order == 1) {
    s.size = 3;
    if (first) {
      s.offsets = {0, 1, 2, 0};
      s.weights = {-1.5 / h, 2.0 / h, -0.5 / h, 0.0};
    } else if (last) {
      s.offsets = {0, -1, -2, 0};
      s.weights = {1.5 / h, -2.0 / h, 0.5 / h, 0.0};
    } else {
      s.size = 2;
      s.offsets = {1, -1, 0, 0};
      s.weights = {0.5 / h, -0.5 / h, 0.0, 0.0};
    }
  } else {
    const double h2 = h * h;
    if (first) {
      s.size = 4;
      s.offsets = {0, 1, 2, 3};
      s.weights = {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2};
    } else if (last) {
      s.size = 4;
      s.offsets = {0, -1, -2, -3};
      s.weights = {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2};
    } else {
      s.size = 3;
      s.offsets = {-1, 0, 1, 0};
      s.weights = {1.0 / h2, -2.0 / h2, 1.0 / h2, 0.0};
    }
  }
  return s;
}

class GridSampler {
 public:
  explicit GridSampler(GridData grid) : grid_(std::move(grid)) {
    const std::size_t d = grid_.counts.size();
    strides_.assign(d, 1);
    for (std::size_t j = d - 1; j-- > 0;) strides_[j] = strides_[j + 1] * grid_.counts[j + 1];
  }

  double operator()(const MultiIndex& alpha, Point x) const {
    const std::size_t d = grid_.counts.size();
    if (alpha.order() > 2)
      throw Error(ErrorCode::order, "grid fields support derivatives up to order 2");
    std::array<std::size_t, kMaxDim> cell{};
    std::array<double, kMaxDim> frac{};
    const double h = grid_.spacing;
    for (std::size_t j = 0; j < d; ++j) {
      const double s = (x[j] - grid_.origin[j]) / h;
      const double top = static_cast<double>(grid_.counts[j] - 1);
      if (!(s >= -1e-9) || !(s <= top + 1e-9))
        throw Error(ErrorCode::out_of_domain, "point outside the sampled grid");
      const double clamped = std::clamp(s, 0.0, top);
      const auto i = std::min(static_cast<std::size_t>(clamped), grid_.counts[j] - 2);
      cell[j] = i;
      frac[j] = clamped - static_cast<double>(i);
    }
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << d;
    std::array<std::size_t, kMaxDim> node{};
    for (std::size_t c = 0; c < corners; ++c) {
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const bool up = (c >> j) & 1u;
        node[j] = cell[j] + (up ? 1 : 0);
        w *= up ? frac[j] : 1.0 - frac[j];
      }
      if (w == 0.0) continue;
      acc += w * node_derivative(alpha, node);
    }
    return acc;
  }

 private:
  double node_derivative(const MultiIndex& alpha, const std::array<std::size_t, kMaxDim>& node) const {
    const std::size_t d = grid_.counts.size();
    std::array<Stencil, kMaxDim> stencils;
    std::size_t terms = 1;
    for (std::size_t j = 0; j < d; ++j) {
      stencils[j] = node_stencil(alpha.components()[j], node[j], grid_.counts[j], grid_.spacing);
      terms *= static_cast<std::size_t>(stencils[j].size);
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
      std::size_t rem = t;
      std::size_t flat = 0;
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& s = stencils[j];
        const auto k = rem % static_cast<std::size_t>(s.size);
        rem /= static_cast<std::size_t>(s.size);
        const auto idx = static_cast<std::size_t>(static_cast<long long>(node[j]) + s.offsets[k]);
        flat += idx * strides_[j];
        w *= s.weights[k];
      }
      acc += w * grid_.values[flat];
    }
    return acc;
  }

  GridData grid_;
  std::vector<std::size_t> strides_;
};

[[noreturn]] void bad_grid(const std::string& why) {
  throw Error(ErrorCode::config, "grid file: " + why);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) bad_grid("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    bad_grid("not a number: '" + s + "'");
  }
}

}  // namespace

void GridData::validate() const {
  if (counts.empty() || counts.size() > static_cast<std::size_t>(kMaxDim))
    throw Error(ErrorCode::config, "grid dimension must be in [1, 8]");
  if (origin.size() != counts.size()) throw Error(ErrorCode::config, "grid origin has wrong dimension");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::config, "grid spacing must be > 0");
  std::size_t total = 1;
  for (auto n : counts) {
    if (n < 5) throw Error(ErrorCode::config, "grid needs at least 5 samples per axis");
    total *= n;
  }
  if (values.size() != total)
    throw Error(ErrorCode::config, "grid has " + std::to_string(values.size()) +
                                       " values, expected " + std::to_string(total));
}

Box GridData::bounds() const {
  std::vector<double> hi(origin.size());
  for (std::size_t j = 0; j < origin.size(); ++j)
    hi[j] = origin[j] + spacing * static_cast<double>(counts[j] - 1);
  return Box(origin, hi);
}

Field grid_field(GridData grid, std::string label) {
  grid.validate();
  const int dim = grid.dim();
  return Field(std::move(label), dim, 2, GridSampler(std::move(grid)));
}

GridData read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kCsvMagic, 0) != 0) bad_grid("missing '# sgls grid v1' header");
  GridData g;
  std::size_t dim = 0;
  bool have_spacing = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv(line);
    const std::string& key = cells[0];
    if (key == "values") break;
    if (key == "dim") {
      if (cells.size() != 2) bad_grid("dim row needs one value");
      dim = static_cast<std::size_t>(to_double(cells[1]));
    } else if (key == "counts") {
      for (std::size_t i = 1; i < cells.size(); ++i)
        g.counts.push_back(static_cast<std::size_t>(to_double(cells[i])));
    } else if (key == "spacing") {
      if (cells.size() != 2) bad_grid("spacing row needs one value");
      g.spacing = to_double(cells[1]);
      have_spacing = true;
    } else if (key == "origin") {
      for (std::size_t i = 1; i < cells.size(); ++i) g.origin.push_back(to_double(cells[i]));
    } else {
      bad_grid("unknown header row '" + key + "'");
    }
  }
  if (dim == 0 || g.counts.size() != dim || !have_spacing) bad_grid("incomplete header");
  while (std::getline(in, line)) {
    for (const auto& cell : split_csv(line))
      if (!cell.empty()) g.values.push_back(to_double(cell));
  }
  g.validate();
  return g;
}

void write_grid_csv(std::ostream& out, const GridData& grid) {
  grid.validate();
  char buf[40];
  out << kCsvMagic << "\n";
  out << "dim," << grid.dim() << "\n";
  out << "counts";
  for (auto n : grid.counts) out << ',' << n;
  std::snprintf(buf, sizeof buf, "%.17g", grid.spacing);
  out << "\nspacing," << buf << "\norigin";
  for (double o : grid.origin) {
    std::snprintf(buf, sizeof buf, "%.17g", o);
    out << ',' << buf;
  }
  out << "\nvalues\n";
  for (double v : grid.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << "\n";
  }
}

GridData read_grid_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kBinaryMagic, 8) != 0) bad_grid("bad binary magic");
  std::uint32_t dim = 0;
  if (!in.read(reinterpret_cast<char*>(&dim), sizeof dim) || dim == 0 || dim > kMaxDim)
    bad_grid("bad dimension");
  GridData g;
  g.counts.resize(dim);
  g.origin.resize(dim);
  std::size_t total = 1;
  for (auto& n : g.counts) {
    std::uint64_t c = 0;
    if (!in.read(reinterpret_cast<char*>(&c), sizeof c)) bad_grid("truncated counts");
    n = static_cast<std::size_t>(c);
    total *= n;
  }
  if (!in.read(reinterpret_cast<char*>(&g.spacing), sizeof(double))) bad_grid("truncated spacing");
  for (auto& o : g.origin)
    if (!in.read(reinterpret_cast<char*>(&o), sizeof o)) bad_grid("truncated origin");
  if (total > (std::size_t{1} << 32)) bad_grid("grid too large");
  g.values.resize(total);
  if (!in.read(reinterpret_cast<char*>(g.values.data()),
               static_cast<std::streamsize>(total * sizeof(double))))
    bad_grid("truncated values");
  g.validate();
  return g;
}

void write_grid_binary(std::ostream& out, const GridData& grid) {
  grid.validate();
  out.write(kBinaryMagic, 8);
  const auto dim = static_cast<std::uint32_t>(grid.dim());
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (auto n : grid.counts) {
    const auto c = static_cast<std::uint64_t>(n);
    out.write(reinterpret_cast<const char*>(&c), sizeof c);
  }
  out.write(reinterpret_cast<const char*>(&grid.spacing), sizeof(double));
  out.write(reinterpret_cast<const char*>(grid.origin.data()),
            static_cast<std::streamsize>(grid.origin.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(double)));
}

GridData read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open grid file '" + path + "'");
  char head[8] = {};
  in.read(head, 8);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kBinaryMagic, 8) == 0) return read_grid_binary(in);
  return read_grid_csv(in);
}

}  // namespace sgls
