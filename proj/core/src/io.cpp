#include "chflow/io.hpp"

#include <cstdio>
#include <fstream>

#include "chflow/errors.hpp"

namespace chflow {

std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorKind::Config, "cannot open output file: " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const ScalarField& f) {
  auto out = open_or_throw(path);
  out << "z1,z2,value\n";
  const Grid g = f.grid;
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      out << fmt_g17(g.z1(i)) << ',' << fmt_g17(g.z2(j)) << ',' << fmt_g17(f(i, j)) << '\n';
}

void write_csv(const std::string& path, const VectorField& f) {
  auto out = open_or_throw(path);
  out << "z1,z2,v1,v2\n";
  const Grid g = f.grid();
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      out << fmt_g17(g.z1(i)) << ',' << fmt_g17(g.z2(j)) << ',' << fmt_g17(f.c1(i, j)) << ','
          << fmt_g17(f.c2(i, j)) << '\n';
}

void write_csv(const std::string& path, const Table& t) {
  auto out = open_or_throw(path);
  for (size_t c = 0; c < t.header.size(); ++c) {
    if (c) out << ',';
    out << t.header[c];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << fmt_g17(row[c]);
    }
    out << '\n';
  }
}

}  // namespace chflow
