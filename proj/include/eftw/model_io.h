// include/eftw/model_io.h

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

// Binary model file:
//
//   "EFTWRBM1"                                  8 bytes
//   I, J, K, F, n_t, n_bins                     u32 little-endian each
//   wx_factor (I x F), wy_factor (J x F), wh_factor (K x F),
//   bias_x (I), bias_y (J), bias_h (K), sigma_x (I), sigma_y (J)
//                                               f64 little-endian, row-major

#ifndef EFTW_MODEL_IO_H_
#define EFTW_MODEL_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "eftw/core_model.h"

namespace eftw {

inline constexpr char kModelMagic[] = "EFTWRBM1";

void write_model(std::ostream &os, const FactorModel &model);
FactorModel read_model(std::istream &is);

void save_model(const std::string &path, const FactorModel &model);
FactorModel load_model(const std::string &path);

namespace binary {

// Little-endian primitives shared by the model and spectrogram formats.
void write_u32(std::ostream &os, std::uint32_t v);
void write_f64(std::ostream &os, double v);
std::uint32_t read_u32(std::istream &is);
double read_f64(std::istream &is);

/// Row-major dump of a matrix.
void write_matrix(std::ostream &os, const Matrix &m);
void read_matrix(std::istream &is, Matrix *m);
void write_vector(std::ostream &os, const Vector &v);
void read_vector(std::istream &is, Vector *v);

}  // namespace binary

}  // namespace eftw

#endif  // EFTW_MODEL_IO_H_
