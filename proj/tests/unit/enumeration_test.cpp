// Copyright 2026 The dprocess Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dprocess/enumeration.hpp"

#include <gtest/gtest.h>

#include "dprocess/error.hpp"

namespace dprocess {
namespace {

// Reference tables below come from a separate brute-force walk over every
// trajectory with exact fractions.

Rational q(long a, long b) { return Rational(a) / b; }

TEST(EnumerationTest, Triangle) {
  const auto e = exact_enumeration(3, 2);
  ASSERT_EQ(e.hitting.size(), 1u);
  EXPECT_EQ(e.hitting[0].size(), 1u);
  EXPECT_EQ(e.hitting[0].at(2), 1);
  EXPECT_EQ(e.final_edges.at(3), 1);
  EXPECT_EQ(e.stuck_probability, 0);
}

TEST(EnumerationTest, SingleEdgeAndMatching) {
  const auto two = exact_enumeration(2, 1);
  EXPECT_TRUE(two.hitting.empty());
  EXPECT_EQ(two.final_edges.size(), 1u);
  EXPECT_EQ(two.final_edges.at(1), 1);

  const auto four = exact_enumeration(4, 1);
  EXPECT_EQ(four.final_edges.size(), 1u);
  EXPECT_EQ(four.final_edges.at(2), 1);
  EXPECT_EQ(four.stuck_probability, 0);
}

TEST(EnumerationTest, FourVerticesDegreeTwo) {
  const auto e = exact_enumeration(4, 2);
  EXPECT_EQ(e.hitting[0].at(kNever), q(4, 15));
  EXPECT_EQ(e.hitting[0].at(2), q(1, 5));
  EXPECT_EQ(e.hitting[0].at(3), q(8, 15));
  EXPECT_EQ(e.final_edges.at(3), q(4, 15));
  EXPECT_EQ(e.final_edges.at(4), q(11, 15));
  EXPECT_EQ(e.stuck_probability, q(4, 15));
}

TEST(EnumerationTest, FiveAndSixVertices) {
  const auto five = exact_enumeration(5, 2);
  EXPECT_EQ(five.hitting[0].at(kNever), q(11, 54));
  EXPECT_EQ(five.hitting[0].at(3), q(5, 18));
  EXPECT_EQ(five.hitting[0].at(4), q(14, 27));
  EXPECT_EQ(five.final_edges.at(4), q(10, 27));
  EXPECT_EQ(five.stuck_probability, q(10, 27));

  const auto six = exact_enumeration(6, 2);
  EXPECT_EQ(six.hitting[0].at(3), q(3, 91));
  EXPECT_EQ(six.hitting[0].at(5), q(716, 1365));
  EXPECT_EQ(six.stuck_probability, q(397, 1365));
}

TEST(EnumerationTest, LargestGuardedInstance) {
  const auto e = exact_enumeration(8, 2);
  EXPECT_EQ(e.stuck_probability, q(36740344, 136547775));
  Rational total = 0;
  for (const auto& [_, p] : e.final_edges) total += p;
  EXPECT_EQ(total, 1);
  total = 0;
  for (const auto& [_, p] : e.hitting[0]) total += p;
  EXPECT_EQ(total, 1);
}

TEST(EnumerationTest, Guard) {
  EXPECT_THROW(exact_enumeration(9, 1), DomainError);
  EXPECT_THROW(exact_enumeration(6, 3), DomainError);  // 9 edges
  EXPECT_THROW(exact_enumeration(1, 1), ParameterError);
}

TEST(EnumerationTest, Json) {
  const auto j = to_json(exact_enumeration(4, 2));
  EXPECT_EQ(j.at("n"), 4);
  EXPECT_EQ(j.at("stuck_probability").at("exact"), "4/15");
  EXPECT_NEAR(j.at("stuck_probability").at("value").get<double>(), 4.0 / 15, 1e-15);
  EXPECT_NEAR(to_double(q(1, 3)), 1.0 / 3, 1e-16);
}

}  // namespace
}  // namespace dprocess
