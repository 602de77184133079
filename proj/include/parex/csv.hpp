// Copyright (c) 2026 The parex authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace parex {

// CSV emission with '.' decimal and 17 significant digits so doubles
// round-trip exactly.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_labeled(const std::string& label, const std::vector<double>& values);
  long rows() const { return rows_; }
  const std::string& path() const { return path_; }

  static std::string format(double v);

 private:
  std::FILE* f_{nullptr};
  std::string path_;
  long rows_{0};
};

class DiscreteField;

// Field snapshot rows (t, x1, x2, w, v...); returns the row count.
long write_field_csv(const DiscreteField& f, const std::string& path);

}  // namespace parex
