#include "hsnet/kernel_table.hpp"

#include "hsnet/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

namespace hsnet {

namespace {

constexpr const char* kMagic = "hsnet-kernel-table";
constexpr int kVersion = 1;

double swap_if_big_endian(double v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    bits = __builtin_bswap64(bits);
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
}

[[noreturn]] void bad_file(const std::filesystem::path& path,
                           const std::string& what) {
  throw InvalidArgument("kernel table " + path.string() + ": " + what);
}

}  // namespace

std::size_t KernelTable::grid_points() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

void KernelTable::validate() const {
  if (rows < 1 || cols < 1) throw InvalidArgument("kernel table: bad m x n");
  if (dim < 1 || dim > 3) throw InvalidArgument("kernel table: dim must be 1..3");
  const auto axes = static_cast<std::size_t>(2 * dim);
  if (shape.size() != axes || lower.size() != axes || upper.size() != axes) {
    throw InvalidArgument("kernel table: shape and bounds need 2*dim entries");
  }
  for (std::size_t a = 0; a < axes; ++a) {
    if (shape[a] < 2) throw InvalidArgument("kernel table: every axis needs >= 2 nodes");
    if (!(upper[a] > lower[a])) throw InvalidArgument("kernel table: upper must exceed lower");
  }
  if (values.size() != grid_points() * static_cast<std::size_t>(rows * cols)) {
    throw InvalidArgument("kernel table: expected " +
                          std::to_string(grid_points() * rows * cols) +
                          " values, found " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("kernel table: non-finite value");
  }
}

KernelTable read_kernel_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_file(path, "cannot open");

  std::string line;
  if (!std::getline(in, line)) bad_file(path, "empty file");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) bad_file(path, "missing '" + std::string(kMagic) + "' header");
    if (version != kVersion) bad_file(path, "unsupported version " + std::to_string(version));
  }

  KernelTable t;
  std::string encoding;
  bool have_values = false;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    if (key == "values") {
      have_values = true;
      break;
    }
    auto read_list = [&](auto& out) {
      using T = typename std::decay_t<decltype(out)>::value_type;
      T v;
      while (fields >> v) out.push_back(v);
    };
    if (key == "rows") fields >> t.rows;
    else if (key == "cols") fields >> t.cols;
    else if (key == "dim") fields >> t.dim;
    else if (key == "shape") read_list(t.shape);
    else if (key == "lower") read_list(t.lower);
    else if (key == "upper") read_list(t.upper);
    else if (key == "encoding") fields >> encoding;
    else bad_file(path, "unknown header key '" + key + "'");
  }
  if (!have_values) bad_file(path, "missing 'values' line");

  const std::size_t expected = [&] {
    std::size_t n = static_cast<std::size_t>(std::max(t.rows * t.cols, 0));
    for (int s : t.shape) n *= static_cast<std::size_t>(std::max(s, 0));
    return n;
  }();
  if (encoding == "text") {
    t.values.reserve(expected);
    double v;
    while (in >> v) t.values.push_back(v);
    if (!in.eof()) bad_file(path, "malformed value");
  } else if (encoding == "binary-le") {
    t.values.resize(expected);
    in.read(reinterpret_cast<char*>(t.values.data()),
            static_cast<std::streamsize>(expected * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != expected * sizeof(double)) {
      bad_file(path, "truncated binary values");
    }
    for (double& v : t.values) v = swap_if_big_endian(v);
    if (in.peek() != std::char_traits<char>::eof()) bad_file(path, "trailing bytes");
  } else {
    bad_file(path, "encoding must be 'text' or 'binary-le'");
  }
  t.validate();
  return t;
}

void write_kernel_table(const KernelTable& table,
                        const std::filesystem::path& path,
                        TableEncoding encoding) {
  table.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_file(path, "cannot open for writing");
  out << std::setprecision(17);
  out << kMagic << ' ' << kVersion << '\n';
  out << "rows " << table.rows << "\ncols " << table.cols << "\ndim "
      << table.dim << '\n';
  auto list = [&](const char* key, const auto& v) {
    out << key;
    for (const auto& x : v) out << ' ' << x;
    out << '\n';
  };
  list("shape", table.shape);
  list("lower", table.lower);
  list("upper", table.upper);
  out << "encoding "
      << (encoding == TableEncoding::text ? "text" : "binary-le") << '\n';
  out << "values\n";
  if (encoding == TableEncoding::text) {
    const std::size_t per_row = static_cast<std::size_t>(table.rows * table.cols);
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      out << table.values[i] << ((i + 1) % per_row == 0 ? '\n' : ' ');
    }
  } else {
    for (double v : table.values) {
      const double le = swap_if_big_endian(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
  }
  if (!out) bad_file(path, "write failed");
}

KernelTable tabulate(const Kernel& kernel, const Domain& domain, int nodes) {
  if (nodes < 2) throw InvalidArgument("tabulate: need >= 2 nodes per axis");
  const int k = domain.dim();
  KernelTable t;
  t.rows = kernel.rows();
  t.cols = kernel.cols();
  t.dim = k;
  t.shape.assign(static_cast<std::size_t>(2 * k), nodes);
  for (int half = 0; half < 2; ++half) {
    for (int a = 0; a < k; ++a) {
      t.lower.push_back(domain.lower()[a]);
      t.upper.push_back(domain.upper()[a]);
    }
  }
  const std::size_t points = t.grid_points();
  const std::size_t block = static_cast<std::size_t>(t.rows * t.cols);
  t.values.resize(points * block);

  std::vector<int> idx(static_cast<std::size_t>(2 * k), 0);
  Point xi(k), s(k);
  Eigen::MatrixXd value(t.rows, t.cols);
  for (std::size_t g = 0; g < points; ++g) {
    std::size_t rest = g;
    for (int a = 2 * k - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(nodes));
      rest /= static_cast<std::size_t>(nodes);
    }
    for (int a = 0; a < 2 * k; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const double x = t.lower[ua] + (t.upper[ua] - t.lower[ua]) * idx[ua] / (nodes - 1);
      (a < k ? xi[a] : s[a - k]) = x;
    }
    kernel.evaluate(xi, s, value);
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) {
        t.values[g * block + static_cast<std::size_t>(r * t.cols + c)] = value(r, c);
      }
    }
  }
  return t;
}

namespace {

struct TableData {
  KernelTable table;
  std::vector<std::size_t> strides;  // in grid points
};

Eigen::MatrixXd node_matrix(const TableData& d, std::size_t g) {
  const auto& t = d.table;
  const std::size_t block = static_cast<std::size_t>(t.rows * t.cols);
  Eigen::MatrixXd m(t.rows, t.cols);
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c) {
      m(r, c) = t.values[g * block + static_cast<std::size_t>(r * t.cols + c)];
    }
  }
  return m;
}

void interpolate(const TableData& d, const Point& xi, const Point& s,
                 Eigen::MatrixXd& out) {
  const auto& t = d.table;
  const int axes = 2 * t.dim;
  const std::size_t block = static_cast<std::size_t>(t.rows * t.cols);
  std::size_t base = 0;
  double frac[6];
  for (int a = 0; a < axes; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const double x = a < t.dim ? xi[a] : s[a - t.dim];
    const double h = (t.upper[ua] - t.lower[ua]) / (t.shape[ua] - 1);
    double u = (x - t.lower[ua]) / h;
    u = std::clamp(u, 0.0, static_cast<double>(t.shape[ua] - 1));
    auto i = static_cast<std::size_t>(std::floor(u));
    if (i >= static_cast<std::size_t>(t.shape[ua] - 1)) i = static_cast<std::size_t>(t.shape[ua] - 2);
    frac[a] = u - static_cast<double>(i);
    base += i * d.strides[ua];
  }
  out.setZero();
  for (unsigned corner = 0; corner < (1u << axes); ++corner) {
    double w = 1.0;
    std::size_t g = base;
    for (int a = 0; a < axes; ++a) {
      if ((corner >> a) & 1u) {
        w *= frac[a];
        g += d.strides[static_cast<std::size_t>(a)];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w == 0.0) continue;
    const double* v = t.values.data() + g * block;
    for (int r = 0; r < t.rows; ++r) {
      for (int c = 0; c < t.cols; ++c) out(r, c) += w * v[r * t.cols + c];
    }
  }
}

}  // namespace

Kernel make_table_kernel(const KernelTable& table, const Domain& domain,
                         MatrixNorm norm) {
  table.validate();
  const int k = table.dim;
  if (domain.dim() != k) throw InvalidArgument("kernel table dim differs from the domain");
  constexpr double tol = 1e-12;
  for (int half = 0; half < 2; ++half) {
    for (int a = 0; a < k; ++a) {
      const auto ua = static_cast<std::size_t>(half * k + a);
      const double span = table.upper[ua] - table.lower[ua];
      if (domain.lower()[a] < table.lower[ua] - tol * span ||
          domain.upper()[a] > table.upper[ua] + tol * span) {
        throw InvalidArgument("kernel table does not cover the domain on axis " +
                              std::to_string(ua));
      }
    }
  }

  auto data = std::make_shared<TableData>();
  data->table = table;
  const auto axes = static_cast<std::size_t>(2 * k);
  data->strides.assign(axes, 1);
  for (std::size_t a = axes - 1; a-- > 0;) {
    data->strides[a] = data->strides[a + 1] * static_cast<std::size_t>(table.shape[a + 1]);
  }

  AnalyticBounds bounds;
  const std::size_t points = table.grid_points();
  std::vector<double> slope(static_cast<std::size_t>(k), 0.0);
  std::vector<int> idx(axes, 0);
  for (std::size_t g = 0; g < points; ++g) {
    std::size_t rest = g;
    for (std::size_t a = axes; a-- > 0;) {
      idx[a] = static_cast<int>(rest % static_cast<std::size_t>(table.shape[a]));
      rest /= static_cast<std::size_t>(table.shape[a]);
    }
    const Eigen::MatrixXd here = node_matrix(*data, g);
    bounds.sup = std::max(bounds.sup, matrix_norm(here, norm));
    for (int a = 0; a < k; ++a) {
      const auto ua = static_cast<std::size_t>(k + a);
      if (idx[ua] + 1 >= table.shape[ua]) continue;
      const double h = (table.upper[ua] - table.lower[ua]) / (table.shape[ua] - 1);
      const Eigen::MatrixXd next = node_matrix(*data, g + data->strides[ua]);
      slope[static_cast<std::size_t>(a)] =
          std::max(slope[static_cast<std::size_t>(a)], matrix_norm(next - here, norm) / h);
    }
  }
  double sq = 0.0;
  for (double d : slope) sq += d * d;
  bounds.lipschitz = std::sqrt(sq);

  std::ostringstream desc;
  desc << "table(" << table.rows << "x" << table.cols << ", shape";
  for (int s : table.shape) desc << ' ' << s;
  desc << ')';
  Kernel::Evaluator eval = [data](const Point& xi, const Point& s,
                                  Eigen::MatrixXd& out) {
    interpolate(*data, xi, s, out);
  };
  return Kernel(table.rows, table.cols, std::move(eval), desc.str(), norm,
                bounds);
}

}  // namespace hsnet
