// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#include "parex/csv.hpp"

#include <cstdio>

#include "parex/errors.hpp"
#include "parex/field.hpp"

namespace parex {

CsvWriter::CsvWriter(const std::string& path, const std::string& header) : path_(path) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw ConfigError("cannot open output file " + path);
  std::fprintf(f_, "%s\n", header.c_str());
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%s%s", i ? "," : "", format(values[i]).c_str());
  std::fprintf(f_, "\n");
  ++rows_;
}

void CsvWriter::row_labeled(const std::string& label, const std::vector<double>& values) {
  std::fprintf(f_, "%s", label.c_str());
  for (double v : values) std::fprintf(f_, ",%s", format(v).c_str());
  std::fprintf(f_, "\n");
  ++rows_;
}

long write_field_csv(const DiscreteField& f, const std::string& path) {
  std::string header = "t,x1,x2,w";
  for (int c = 0; c < f.ncomp(); ++c) header += ",v" + std::to_string(c);
  CsvWriter w(path, header);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> row{f.points()[i].t, f.points()[i].x.x, f.points()[i].x.y, f.weights()[i]};
    for (int c = 0; c < f.ncomp(); ++c) row.push_back(f.values()[i * f.ncomp() + c]);
    w.row(row);
  }
  return w.rows();
}

}  // namespace parex
