#pragma once

#include <string>
#include <vector>

#include "chflow/field.hpp"

namespace chflow {

// Formats a double with 17 significant digits (round-trips exactly).
std::string fmt_g17(double x);

// CSV dumps, row-major in j then i.
// Scalar header: z1,z2,value. Vector header: z1,z2,v1,v2.
void write_csv(const std::string& path, const ScalarField& f);
void write_csv(const std::string& path, const VectorField& f);

// Generic table with a header row; one row of doubles per entry.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const Table& t);

}  // namespace chflow
