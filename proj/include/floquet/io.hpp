// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLOQUET_IO_HPP
#define FLOQUET_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>
#include <json.hpp>
#include "floquet/eigensolver.hpp"

namespace floquet
{

using Json = nlohmann::json;

using CsvValue = std::variant<double, long long, std::string>;

// Comma-separated output with a fixed header; doubles with 17 significant digits.
class CsvWriter
{
public:
  CsvWriter(const std::filesystem::path &path, std::vector<std::string> header);

  void Row(const std::vector<CsvValue> &values);
  const std::filesystem::path &path() const { return path_; }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

// Parses a CSV file written by CsvWriter into header and string cells.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int Column(const std::string &name) const;
};
CsvTable ReadCsv(const std::filesystem::path &path);

void WriteJson(const std::filesystem::path &path, const Json &value);
Json ReadJson(const std::filesystem::path &path);

// Lowercase hex SHA-256 of the file contents.
std::string Sha256File(const std::filesystem::path &path);
std::string Sha256(const std::string &bytes);

// Column order of the per-mode CSV.
const std::vector<std::string> &ModeCsvHeader();
// Column order of the time-trace CSV.
const std::vector<std::string> &TraceCsvHeader();

struct Provenance
{
  std::string kappa;  // modulation preset
  double eps = 0.0;
  double dt = 0.0;
};

void WriteModesCsv(const std::filesystem::path &path, const SpectrumReport &report,
                   const Provenance &prov);

// Nonzero entries as "matrix,i,j,re,im" rows; one block per named matrix.
void WriteMatricesCsv(const std::filesystem::path &path,
                      const std::vector<std::pair<std::string, const CMatrix *>> &matrices);

}  // namespace floquet

#endif  // FLOQUET_IO_HPP
