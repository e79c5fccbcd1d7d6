#include "sparsereg/serialize.hpp"

#include <bit>
#include <fstream>
#include <optional>
#include <vector>

namespace sparsereg {

static_assert(std::endian::native == std::endian::little,
              "instance blobs are little-endian float64");

namespace {

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ConfigError("instance file truncated");
}

}  // namespace

void save_instance(const std::string& path, const ProblemInstance& p,
                   const nlohmann::json& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");

  nlohmann::json header{{"m", p.m()},
                        {"n", p.n()},
                        {"delta", p.delta},
                        {"has_x_true", p.x_true.has_value()},
                        {"meta", meta}};
  out << header.dump() << '\n';

  const Matrix& a = p.op.entries();
  // row-major blob; Eigen stores column-major
  std::vector<double> row(static_cast<std::size_t>(a.cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j)
      row[static_cast<std::size_t>(j)] = a(i, j);
    write_doubles(out, row.data(), row.size());
  }
  write_doubles(out, p.y_noisy.data(),
                static_cast<std::size_t>(p.y_noisy.size()));
  if (p.x_true)
    write_doubles(out, p.x_true->data(),
                  static_cast<std::size_t>(p.x_true->size()));
  if (!out) throw ConfigError("failed writing " + path);
}

ProblemInstance load_instance(const std::string& path, nlohmann::json* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("missing header in " + path);
  nlohmann::json header = nlohmann::json::parse(line);
  const Index m = header.at("m").get<Index>();
  const Index n = header.at("n").get<Index>();
  const double delta = header.at("delta").get<double>();
  const bool has_x_true = header.at("has_x_true").get<bool>();
  if (meta) *meta = header.value("meta", nlohmann::json::object());

  Matrix a(m, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    read_doubles(in, row.data(), row.size());
    for (Index j = 0; j < n; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
  }
  Vector y(m);
  read_doubles(in, y.data(), static_cast<std::size_t>(m));
  std::optional<Vector> x_true;
  if (has_x_true) {
    Vector x(n);
    read_doubles(in, x.data(), static_cast<std::size_t>(n));
    x_true = std::move(x);
  }
  return ProblemInstance(DenseOperator(std::move(a)), std::move(y),
                         std::move(x_true), delta);
}

}  // namespace sparsereg
