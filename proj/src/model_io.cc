// src/model_io.cc

// Copyright 2026  The eftw-rbm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "eftw/model_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "eftw/errors.h"

namespace eftw {
namespace binary {

void write_u32(std::ostream &os, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), b.size());
}

void write_f64(std::ostream &os, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(b.data(), b.size());
}

std::uint32_t read_u32(std::istream &is) {
  std::array<unsigned char, 4> b;
  if (!is.read(reinterpret_cast<char *>(b.data()), b.size()))
    throw FormatError("unexpected end of file reading u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double read_f64(std::istream &is) {
  std::array<unsigned char, 8> b;
  if (!is.read(reinterpret_cast<char *>(b.data()), b.size()))
    throw FormatError("unexpected end of file reading f64");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_matrix(std::ostream &os, const Matrix &m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64(os, m(r, c));
}

void read_matrix(std::istream &is, Matrix *m) {
  for (Eigen::Index r = 0; r < m->rows(); ++r)
    for (Eigen::Index c = 0; c < m->cols(); ++c) (*m)(r, c) = read_f64(is);
}

void write_vector(std::ostream &os, const Vector &v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) write_f64(os, v(i));
}

void read_vector(std::istream &is, Vector *v) {
  for (Eigen::Index i = 0; i < v->size(); ++i) (*v)(i) = read_f64(is);
}

}  // namespace binary

void write_model(std::ostream &os, const FactorModel &model) {
  model.Validate();
  if (!model.shape.frame_consistent())
    throw ShapeError("only frame-consistent models can be serialized");
  os.write(kModelMagic, 8);
  const ModelShape &s = model.shape;
  for (std::uint32_t v : {s.input, s.visible, s.hidden, s.factors, s.context,
                          s.n_bins})
    binary::write_u32(os, v);
  binary::write_matrix(os, model.wx_factor);
  binary::write_matrix(os, model.wy_factor);
  binary::write_matrix(os, model.wh_factor);
  binary::write_vector(os, model.bias_x);
  binary::write_vector(os, model.bias_y);
  binary::write_vector(os, model.bias_h);
  binary::write_vector(os, model.sigma_x);
  binary::write_vector(os, model.sigma_y);
  if (!os) throw FormatError("failed writing model");
}

FactorModel read_model(std::istream &is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kModelMagic, 8) != 0)
    throw FormatError("not a model file (bad magic)");
  ModelShape s;
  s.input = binary::read_u32(is);
  s.visible = binary::read_u32(is);
  s.hidden = binary::read_u32(is);
  s.factors = binary::read_u32(is);
  s.context = binary::read_u32(is);
  s.n_bins = binary::read_u32(is);
  if (s.input == 0 || s.visible == 0 || s.hidden == 0 || s.factors == 0 ||
      s.n_bins == 0 || !s.frame_consistent())
    throw FormatError("model file has an inconsistent shape header");
  // Guard against absurd headers before allocating.
  constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 31;
  const std::uint64_t entries =
      std::uint64_t{s.input + s.visible + s.hidden} * (s.factors + 2);
  if (entries > kMaxEntries)
    throw FormatError("model file shape header is too large");

  FactorModel model(s);
  binary::read_matrix(is, &model.wx_factor);
  binary::read_matrix(is, &model.wy_factor);
  binary::read_matrix(is, &model.wh_factor);
  binary::read_vector(is, &model.bias_x);
  binary::read_vector(is, &model.bias_y);
  binary::read_vector(is, &model.bias_h);
  binary::read_vector(is, &model.sigma_x);
  binary::read_vector(is, &model.sigma_y);
  if (is.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing bytes after model payload");
  try {
    model.Validate();
  } catch (const ShapeError &e) {
    throw FormatError(std::string("invalid model file: ") + e.what());
  }
  return model;
}

void save_model(const std::string &path, const FactorModel &model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_model(os, model);
}

FactorModel load_model(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path);
  return read_model(is);
}

}  // namespace eftw
