// tests/model_io_test.cc

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

#include <cstring>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "eftw/errors.h"
#include "eftw/model_io.h"
#include "oracles.h"

namespace eftw {
namespace {

FactorModel sample_model(std::uint64_t seed) {
  Rng rng(seed);
  FactorModel m = oracle::random_model(ModelShape::ForFrames(5, 3, 4, 2), rng);
  return m;
}

std::string serialize(const FactorModel &m) {
  std::ostringstream os;
  write_model(os, m);
  return os.str();
}

bool same(const FactorModel &a, const FactorModel &b) {
  return a.shape == b.shape && a.wx_factor == b.wx_factor &&
         a.wy_factor == b.wy_factor && a.wh_factor == b.wh_factor &&
         a.bias_x == b.bias_x && a.bias_y == b.bias_y &&
         a.bias_h == b.bias_h && a.sigma_x == b.sigma_x &&
         a.sigma_y == b.sigma_y;
}

TEST(Binary, LittleEndianPrimitives) {
  std::ostringstream os;
  binary::write_u32(os, 0x01020304u);
  binary::write_f64(os, 1.0);
  const std::string b = os.str();
  ASSERT_EQ(b.size(), 12u);
  EXPECT_EQ(b[0], '\x04');
  EXPECT_EQ(b[3], '\x01');
  // 1.0 is 0x3ff0000000000000.
  EXPECT_EQ(b[10], '\xf0');
  EXPECT_EQ(b[11], '\x3f');
  std::istringstream is(b);
  EXPECT_EQ(binary::read_u32(is), 0x01020304u);
  EXPECT_EQ(binary::read_f64(is), 1.0);
  EXPECT_THROW(binary::read_u32(is), FormatError);
}

TEST(ModelFile, RoundTripIsExact) {
  const FactorModel m = sample_model(3);
  std::istringstream is(serialize(m));
  const FactorModel back = read_model(is);
  EXPECT_TRUE(same(m, back));
}

TEST(ModelFile, SaveLoadSaveIsByteStable) {
  const FactorModel m = sample_model(4);
  const std::string first = serialize(m);
  std::istringstream is(first);
  EXPECT_EQ(serialize(read_model(is)), first);
}

TEST(ModelFile, LayoutSizeAndHeader) {
  const FactorModel m = sample_model(5);
  const ModelShape &s = m.shape;
  const std::string b = serialize(m);
  const std::size_t doubles =
      (s.input + s.visible + s.hidden) * s.factors +
      2 * (s.input + s.visible) + s.hidden;
  EXPECT_EQ(b.size(), 8 + 6 * 4 + 8 * doubles);
  EXPECT_EQ(b.substr(0, 8), std::string(kModelMagic, 8));
  // The first payload value is wx_factor(0, 0).
  double first;
  std::memcpy(&first, b.data() + 32, 8);
  EXPECT_EQ(first, m.wx_factor(0, 0));
  double second;
  std::memcpy(&second, b.data() + 40, 8);
  EXPECT_EQ(second, m.wx_factor(0, 1));
}

TEST(ModelFile, FileRoundTrip) {
  const FactorModel m = sample_model(6);
  const std::string path = ::testing::TempDir() + "model_io_test.bin";
  save_model(path, m);
  EXPECT_TRUE(same(load_model(path), m));
  EXPECT_THROW(load_model(path + ".missing"), FormatError);
}

TEST(ModelFile, RejectsCorruptInput) {
  const std::string good = serialize(sample_model(7));

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  EXPECT_THROW(read_model(a), FormatError);

  std::istringstream b(good.substr(0, good.size() - 3));
  EXPECT_THROW(read_model(b), FormatError);

  std::istringstream c(good + "z");
  EXPECT_THROW(read_model(c), FormatError);

  // Input size that disagrees with n_bins * (context + 1).
  std::string bad_shape = good;
  bad_shape[8] = static_cast<char>(bad_shape[8] + 1);
  std::istringstream d(bad_shape);
  EXPECT_THROW(read_model(d), FormatError);

  // A zero deviation in the last sigma_y entry.
  std::string bad_sigma = good;
  std::memset(bad_sigma.data() + bad_sigma.size() - 8, 0, 8);
  std::istringstream e(bad_sigma);
  EXPECT_THROW(read_model(e), FormatError);

  std::istringstream empty("");
  EXPECT_THROW(read_model(empty), FormatError);
}

TEST(ModelFile, RejectsFreeShapes) {
  FactorModel m(ModelShape::Free(3, 2, 2, 2));
  std::ostringstream os;
  EXPECT_THROW(write_model(os, m), ShapeError);
}

}  // namespace
}  // namespace eftw
