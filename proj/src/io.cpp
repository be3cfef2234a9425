// Copyright 2026 The floquet1d Authors
// SPDX-License-Identifier: Apache-2.0

#include "floquet/io.hpp"

#include <iomanip>
#include <sstream>
#include <openssl/evp.h>
#include "floquet/error.hpp"

namespace floquet
{

namespace fs = std::filesystem;

CsvWriter::CsvWriter(const fs::path &path, std::vector<std::string> header)
  : path_(path), columns_(header.size())
{
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_)
  {
    throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string() + " for writing");
  }
  for (std::size_t i = 0; i < header.size(); i++)
  {
    out_ << (i ? "," : "") << header[i];
  }
  out_ << '\n';
}

void CsvWriter::Row(const std::vector<CsvValue> &values)
{
  if (values.size() != columns_)
  {
    throw Error(ErrorKind::DimensionMismatch, "CSV row width does not match the header");
  }
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < values.size(); i++)
  {
    if (i)
    {
      line << ',';
    }
    std::visit([&](const auto &v) { line << v; }, values[i]);
  }
  out_ << line.str() << '\n';
}

int CsvTable::Column(const std::string &name) const
{
  for (std::size_t i = 0; i < header.size(); i++)
  {
    if (header[i] == name)
    {
      return static_cast<int>(i);
    }
  }
  throw Error(ErrorKind::NotFound, "column '" + name + "' not in CSV header");
}

CsvTable ReadCsv(const fs::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::NotFound, "cannot open " + path.string());
  }
  auto split = [](const std::string &line)
  {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
      cells.push_back(cell);
    }
    return cells;
  };
  CsvTable table;
  std::string line;
  if (std::getline(in, line))
  {
    table.header = split(line);
  }
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

void WriteJson(const fs::path &path, const Json &value)
{
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string() + " for writing");
  }
  out << value.dump(2) << '\n';
}

Json ReadJson(const fs::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorKind::NotFound, "cannot open " + path.string());
  }
  try
  {
    return Json::parse(in);
  }
  catch (const Json::parse_error &e)
  {
    throw Error(ErrorKind::InvalidArgument, path.string() + ": " + e.what());
  }
}

std::string Sha256(const std::string &bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; i++)
  {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string Sha256File(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorKind::NotFound, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return Sha256(buf.str());
}

const std::vector<std::string> &ModeCsvHeader()
{
  static const std::vector<std::string> h = {
      "re_omega", "im_omega", "residual", "K",   "p",  "bc",       "kappa0", "C_inv",
      "C_kappa_prime", "re_omega_raw", "im_omega_raw", "fold_index", "kappa", "eps", "dt"};
  return h;
}

const std::vector<std::string> &TraceCsvHeader()
{
  static const std::vector<std::string> h = {
      "t", "energy", "norm_u", "norm_v", "d_norm", "d_relative", "d_energy_relative",
      "K", "p", "bc", "kappa0", "kappa", "eps", "dt"};
  return h;
}

void WriteModesCsv(const fs::path &path, const SpectrumReport &report, const Provenance &prov)
{
  CsvWriter csv(path, ModeCsvHeader());
  for (const FloquetMode &m : report.modes)
  {
    csv.Row({m.omega.real(), m.omega.imag(), m.residual, static_cast<long long>(report.K),
             static_cast<long long>(report.p), report.bc, report.kappa0, report.diagnostics.C_inv,
             report.diagnostics.C_kappa_prime, m.omega_raw.real(), m.omega_raw.imag(),
             static_cast<long long>(m.fold_index), prov.kappa, prov.eps, prov.dt});
  }
}

void WriteMatricesCsv(const fs::path &path,
                      const std::vector<std::pair<std::string, const CMatrix *>> &matrices)
{
  CsvWriter csv(path, {"matrix", "i", "j", "re", "im"});
  for (const auto &[name, m] : matrices)
  {
    for (Eigen::Index j = 0; j < m->cols(); j++)
    {
      for (Eigen::Index i = 0; i < m->rows(); i++)
      {
        const cplx z = (*m)(i, j);
        if (z != cplx(0.0))
        {
          csv.Row({name, static_cast<long long>(i), static_cast<long long>(j), z.real(), z.imag()});
        }
      }
    }
  }
}

}  // namespace floquet
