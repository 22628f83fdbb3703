//------------------------------------------------------------------------------
//
//   Copyright 2026 The embscope Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "embscope/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace embscope {
namespace {

constexpr char kMatrixMagic[4]   = {'E', 'M', 'B', 'F'};
constexpr char kNeighborMagic[4] = {'E', 'M', 'B', 'N'};
constexpr std::size_t kHeaderSize = 16;

void PutU32(std::vector<std::uint8_t> &out, std::uint32_t v)
{
  for (int shift = 0; shift < 32; shift += 8)
  {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFFu));
  }
}

std::uint32_t GetU32(std::span<std::uint8_t const> bytes, std::size_t offset)
{
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i)
  {
    v = (v << 8) | bytes[offset + static_cast<std::size_t>(i)];
  }
  return v;
}

std::vector<std::uint8_t> Header(char const (&magic)[4], std::uint32_t rows, std::uint32_t cols,
                                 std::size_t payload)
{
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload);
  out.insert(out.end(), magic, magic + 4);
  PutU32(out, kFormatVersion);
  PutU32(out, rows);
  PutU32(out, cols);
  return out;
}

// Returns (rows, cols) after checking magic, version and payload length.
std::pair<std::uint32_t, std::uint32_t> CheckHeader(std::span<std::uint8_t const> bytes,
                                                    char const (&magic)[4], char const *what)
{
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), magic, 4) != 0)
  {
    Fail(ErrorKind::kFormat, std::string("not an ") + what + " file (bad magic)");
  }
  if (GetU32(bytes, 4) != kFormatVersion)
  {
    Fail(ErrorKind::kFormat, std::string("unsupported ") + what + " version");
  }
  std::uint32_t const rows = GetU32(bytes, 8);
  std::uint32_t const cols = GetU32(bytes, 12);
  std::size_t const   expected =
      kHeaderSize + static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 4u;
  if (bytes.size() != expected)
  {
    Fail(ErrorKind::kFormat, std::string(what) + " payload length does not match header");
  }
  return {rows, cols};
}

}  // namespace

std::vector<std::uint8_t> EncodeMatrix(Matrix const &m)
{
  Require(m.values.size() == static_cast<std::size_t>(m.rows) * m.cols, "matrix shape mismatch");
  auto out = Header(kMatrixMagic, m.rows, m.cols, m.values.size() * 4);
  for (float f : m.values)
  {
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Matrix DecodeMatrix(std::span<std::uint8_t const> bytes)
{
  auto const [rows, cols] = CheckHeader(bytes, kMatrixMagic, "EMBF");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.values.size(); ++i)
  {
    m.values[i] = std::bit_cast<float>(GetU32(bytes, kHeaderSize + 4 * i));
  }
  return m;
}

std::vector<std::uint8_t> EncodeNeighborIds(NeighborIds const &n)
{
  Require(n.ids.size() == static_cast<std::size_t>(n.rows) * n.k, "neighbor table shape mismatch");
  auto out = Header(kNeighborMagic, n.rows, n.k, n.ids.size() * 4);
  for (std::uint32_t id : n.ids)
  {
    PutU32(out, id);
  }
  return out;
}

NeighborIds DecodeNeighborIds(std::span<std::uint8_t const> bytes)
{
  auto const [rows, k] = CheckHeader(bytes, kNeighborMagic, "EMBN");
  NeighborIds n{rows, k, std::vector<std::uint32_t>(static_cast<std::size_t>(rows) * k)};
  for (std::size_t i = 0; i < n.ids.size(); ++i)
  {
    n.ids[i] = GetU32(bytes, kHeaderSize + 4 * i);
  }
  return n;
}

std::vector<std::uint8_t> ReadFileBytes(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    Fail(ErrorKind::kIo, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(std::filesystem::path const &path, std::span<std::uint8_t const> bytes)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  // Write-then-rename so readers never observe a half-written cache file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      Fail(ErrorKind::kIo, "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<char const *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
    {
      Fail(ErrorKind::kIo, "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Matrix ReadMatrix(std::filesystem::path const &path)
{
  auto bytes = ReadFileBytes(path);
  try
  {
    return DecodeMatrix(bytes);
  }
  catch (Error const &e)
  {
    Fail(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteMatrix(std::filesystem::path const &path, Matrix const &m)
{
  WriteFileBytes(path, EncodeMatrix(m));
}

NeighborIds ReadNeighborIds(std::filesystem::path const &path)
{
  auto bytes = ReadFileBytes(path);
  try
  {
    return DecodeNeighborIds(bytes);
  }
  catch (Error const &e)
  {
    Fail(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteNeighborIds(std::filesystem::path const &path, NeighborIds const &n)
{
  WriteFileBytes(path, EncodeNeighborIds(n));
}

}  // namespace embscope
