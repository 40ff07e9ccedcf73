// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "simg/types.hpp"

namespace simg {

// File formats used by the experiment driver. All of them are byte-exact
// given the same inputs:
//  - matrix cache: "SIMGMAT1" magic, rows and cols as little-endian uint64,
//    column-major complex-double payload (re, im interleaved, little-endian),
//  - CSV: RFC 4180 (CRLF line ends), '.' decimal separator, 17 significant
//    digits so doubles round-trip exactly,
//  - heatmaps: binary PGM (P5), 8-bit, |value| normalized to [0, max],
//    rounding half up.

void write_matrix(const std::string& path, const CMatrix& m);
CMatrix read_matrix(const std::string& path);

void write_heatmap_pgm(const std::string& path, const CVector& values, Index rows, Index cols);

/// Plain-text overlay companion for a heatmap: one "row col" pixel pair per
/// line, for cross markers at the true source locations.
void write_overlay(const std::string& path, const std::vector<std::pair<Index, Index>>& pixels);

/// Columns: index, real, imag, magnitude.
void write_vector_csv(const std::string& path, const CVector& v);
CVector read_vector_csv(const std::string& path);

std::string format_double(double v);  // 17 significant digits, shortest form

/// FNV-1a (64-bit) of a file's bytes, as 16 hex digits. Deterministic content
/// fingerprint for manifests; not cryptographic.
std::string file_fingerprint(const std::string& path);

}  // namespace simg
