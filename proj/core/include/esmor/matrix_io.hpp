// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "esmor/common.hpp"
#include "esmor/mesh.hpp"

namespace esmor
{

// Binary dense matrix file:
//   bytes  0..7   magic "ESMORMAT"
//   bytes  8..15  rows, unsigned 64-bit little-endian
//   bytes 16..23  cols, unsigned 64-bit little-endian
//   then rows * cols IEEE-754 binary64 values, little-endian, column-major.
inline constexpr char kMatrixMagic[8] = {'E', 'S', 'M', 'O', 'R', 'M', 'A', 'T'};

void WriteMatrix(const std::filesystem::path &path, const Matrix &m);
Matrix ReadMatrix(const std::filesystem::path &path);

// "i j value" lines (0-based), one per stored entry, preceded by a "rows cols nnz" line.
void WriteCoordinate(const std::filesystem::path &path, const SparseMatrix &m);

// vertices.csv: "index,x,y"; triangles.csv: "index,v0,v1,v2".
void WriteMeshCsv(const std::filesystem::path &vertices, const std::filesystem::path &triangles,
                  const Mesh &mesh);

// Two-column CSV "t,energy".
void WriteEnergyCsv(const std::filesystem::path &path, const Vector &times,
                    const Vector &energies);

// Single-column CSV with a header.
void WriteColumnCsv(const std::filesystem::path &path, const std::string &header,
                    const Vector &values);
void WriteIndexCsv(const std::filesystem::path &path, const std::string &header,
                   const std::vector<Index> &values);
std::vector<Index> ReadIndexCsv(const std::filesystem::path &path);

}  // namespace esmor
