// Copyright The esmor Authors.
// SPDX-License-Identifier: Apache-2.0

#include "esmor/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace esmor
{

namespace
{

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T ToLittle(T v)
{
  if constexpr (std::endian::native == std::endian::big)
  {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <typename T>
void Put(std::ostream &out, T v)
{
  v = ToLittle(v);
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream &in)
{
  T v;
  in.read(reinterpret_cast<char *>(&v), sizeof(T));
  return ToLittle(v);
}

std::ofstream OpenOut(const std::filesystem::path &path, bool binary = false)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out)
  {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out.precision(17);
  return out;
}

}  // namespace

void WriteMatrix(const std::filesystem::path &path, const Matrix &m)
{
  auto out = OpenOut(path, true);
  out.write(kMatrixMagic, sizeof(kMatrixMagic));
  Put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  Put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j)
  {
    for (Index i = 0; i < m.rows(); ++i)
    {
      Put<double>(out, m(i, j));
    }
  }
  if (!out)
  {
    throw Error("write failed for " + path.string());
  }
}

Matrix ReadMatrix(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error("cannot open " + path.string());
  }
  char magic[sizeof(kMatrixMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0)
  {
    throw Error(path.string() + " is not a matrix file");
  }
  const auto rows = Get<std::uint64_t>(in);
  const auto cols = Get<std::uint64_t>(in);
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < m.cols(); ++j)
  {
    for (Index i = 0; i < m.rows(); ++i)
    {
      m(i, j) = Get<double>(in);
    }
  }
  if (!in)
  {
    throw Error(path.string() + " is truncated");
  }
  return m;
}

void WriteCoordinate(const std::filesystem::path &path, const SparseMatrix &m)
{
  auto out = OpenOut(path);
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index k = 0; k < m.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

void WriteMeshCsv(const std::filesystem::path &vertices, const std::filesystem::path &triangles,
                  const Mesh &mesh)
{
  auto v = OpenOut(vertices);
  v << "index,x,y\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
  {
    v << i << ',' << mesh.vertices[i].x() << ',' << mesh.vertices[i].y() << '\n';
  }
  auto t = OpenOut(triangles);
  t << "index,v0,v1,v2\n";
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
  {
    const auto &tri = mesh.triangles[i];
    t << i << ',' << tri[0] << ',' << tri[1] << ',' << tri[2] << '\n';
  }
}

void WriteEnergyCsv(const std::filesystem::path &path, const Vector &times,
                    const Vector &energies)
{
  auto out = OpenOut(path);
  out << "t,energy\n";
  for (Index n = 0; n < energies.size(); ++n)
  {
    out << times[n] << ',' << energies[n] << '\n';
  }
}

void WriteColumnCsv(const std::filesystem::path &path, const std::string &header,
                    const Vector &values)
{
  auto out = OpenOut(path);
  out << header << '\n';
  for (Index i = 0; i < values.size(); ++i)
  {
    out << values[i] << '\n';
  }
}

void WriteIndexCsv(const std::filesystem::path &path, const std::string &header,
                   const std::vector<Index> &values)
{
  auto out = OpenOut(path);
  out << header << '\n';
  for (Index v : values)
  {
    out << v << '\n';
  }
}

std::vector<Index> ReadIndexCsv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error("cannot open " + path.string());
  }
  std::string line;
  std::getline(in, line);  // header
  std::vector<Index> out;
  while (std::getline(in, line))
  {
    if (!line.empty())
    {
      out.push_back(std::stoll(line));
    }
  }
  return out;
}

}  // namespace esmor
