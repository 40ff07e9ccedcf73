// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include "simg/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace simg {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'M', 'G', 'M', 'A', 'T', '1'};

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_matrix(const std::string& path, const CMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path);
  out.write(kMagic, 8);
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  // Eigen stores column-major complex<double> contiguously; x86-64 is
  // little-endian, which matches the declared format.
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  if (!out) throw std::runtime_error("write_matrix: short write to " + path);
}

CMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("read_matrix: " + path + " is not a SIMGMAT1 file");
  const std::uint64_t rows = get_u64(in), cols = get_u64(in);
  if (!in) throw std::runtime_error("read_matrix: truncated header in " + path);
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  if (!in) throw std::runtime_error("read_matrix: truncated payload in " + path);
  return m;
}

void write_heatmap_pgm(const std::string& path, const CVector& values, Index rows, Index cols) {
  if (values.size() != rows * cols)
    throw std::invalid_argument("write_heatmap_pgm: value count does not match the grid");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_heatmap_pgm: cannot open " + path);
  out << "P5\n" << cols << " " << rows << "\n255\n";
  const double peak = values.cwiseAbs().maxCoeff();
  std::string bytes(static_cast<std::size_t>(rows * cols), '\0');
  if (peak > 0.0)
    for (Index k = 0; k < values.size(); ++k) {
      const double scaled = 255.0 * std::abs(values(k)) / peak;
      bytes[static_cast<std::size_t>(k)] =
          static_cast<char>(static_cast<unsigned char>(std::floor(scaled + 0.5)));
    }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write_heatmap_pgm: short write to " + path);
}

void write_overlay(const std::string& path, const std::vector<std::pair<Index, Index>>& pixels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_overlay: cannot open " + path);
  for (const auto& [row, col] : pixels) out << row << " " << col << "\n";
  if (!out) throw std::runtime_error("write_overlay: short write to " + path);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector_csv(const std::string& path, const CVector& v) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_vector_csv: cannot open " + path);
  out << "index,real,imag,magnitude\r\n";
  for (Index k = 0; k < v.size(); ++k)
    out << k << "," << format_double(v(k).real()) << "," << format_double(v(k).imag()) << ","
        << format_double(std::abs(v(k))) << "\r\n";
  if (!out) throw std::runtime_error("write_vector_csv: short write to " + path);
}

CVector read_vector_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_vector_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_vector_csv: empty file " + path);
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    long long index = 0;
    double re = 0.0, im = 0.0, mag = 0.0;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf", &index, &re, &im, &mag) < 3)
      throw std::runtime_error("read_vector_csv: malformed row in " + path + ": " + line);
    values.emplace_back(re, im);
  }
  CVector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Index>(i)) = values[i];
  return v;
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_fingerprint: cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace simg
