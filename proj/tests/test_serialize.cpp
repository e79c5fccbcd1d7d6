#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "sparsereg/problems.hpp"
#include "sparsereg/serialize.hpp"

using namespace sparsereg;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const char* name) : path(name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("instance round trip is exact") {
  CsSpec spec;
  spec.n = 24;
  spec.m = 10;
  spec.s = 3;
  ProblemInstance p = generate_cs(spec);

  TempFile f("roundtrip.inst");
  nlohmann::json meta{{"family", "cs"}, {"seed", 1}};
  save_instance(f.path, p, meta);

  nlohmann::json meta_back;
  ProblemInstance q = load_instance(f.path, &meta_back);
  CHECK(meta_back == meta);
  CHECK(q.op.entries() == p.op.entries());
  CHECK(q.y_noisy == p.y_noisy);
  REQUIRE(q.x_true.has_value());
  CHECK(*q.x_true == *p.x_true);
  CHECK(q.delta == p.delta);
}

TEST_CASE("missing ground truth is preserved") {
  Matrix a(2, 2);
  a << 1, 0, 0, 2;
  Vector y(2);
  y << 1, -1;
  ProblemInstance p(DenseOperator(a), y, std::nullopt, 0.25);
  TempFile f("no_truth.inst");
  save_instance(f.path, p);
  ProblemInstance q = load_instance(f.path);
  CHECK(!q.x_true.has_value());
  CHECK(q.delta == 0.25);
}

TEST_CASE("same spec and seed produce identical instance bytes") {
  CsSpec spec;
  spec.n = 20;
  spec.m = 8;
  spec.s = 2;
  TempFile f1("det_a.inst"), f2("det_b.inst");
  save_instance(f1.path, generate_cs(spec));
  save_instance(f2.path, generate_cs(spec));
  CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("truncated blob is rejected") {
  CsSpec spec;
  spec.n = 12;
  spec.m = 6;
  spec.s = 2;
  TempFile f("trunc.inst");
  save_instance(f.path, generate_cs(spec));
  const std::string bytes = slurp(f.path);
  {
    std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(),
              static_cast<std::streamsize>(bytes.size() - 16));
  }
  CHECK_THROWS_AS(load_instance(f.path), ConfigError);
}
