// Copyright 2026 The qcal authors
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

#include <doctest.h>

#include <random>

#include "qcal/dataio.hpp"
#include "support.hpp"

using namespace qcal;
using testsupport::TempDir;

TEST_SUITE_BEGIN("dataio");

namespace {

/// Random dataset with numeric and occasional string columns. String cells
/// draw from an alphabet that exercises RFC 4180 quoting.
DataSet random_dataset(std::mt19937& gen) {
  std::uniform_int_distribution<int> cols(1, 6), rows(1, 40), pick(0, 9);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-30, 30);
  const char* snippets[] = {"plain", "with,comma", "with\"quote",
                            "multi\nline", "0;5;17;", "", "trailing ",
                            " semi;colon", "7e3x", "_"};
  DataSet ds;
  ds.protocol = "random";
  ds.qubit = pick(gen) % 3;
  int nc = cols(gen), nr = rows(gen);
  std::vector<bool> numeric;
  for (int c = 0; c < nc; ++c) {
    bool num = pick(gen) < 7;
    numeric.push_back(num);
    if (num)
      ds.add_numeric_column("n" + std::to_string(c));
    else
      ds.add_string_column("s" + std::to_string(c));
  }
  for (int r = 0; r < nr; ++r) {
    std::vector<Cell> row;
    for (int c = 0; c < nc; ++c) {
      if (numeric[c]) {
        double v;
        switch (pick(gen)) {
          case 0: v = 0.0; break;
          case 1: v = -0.0; break;
          case 2: v = static_cast<double>(expo(gen)); break;
          default: v = std::ldexp(mant(gen), expo(gen));
        }
        row.emplace_back(v);
      } else {
        // Never all-numeric-looking: the strings above cannot parse fully
        // as doubles, so the column keeps its type on re-read.
        row.emplace_back(std::string(snippets[pick(gen)]));
      }
    }
    ds.add_row(row);
  }
  ds.meta["nshots"] = 1024;
  ds.meta["x"] = 1.5;
  return ds;
}

}  // namespace

TEST_CASE("csv and json round trip bitwise") {
  std::mt19937 gen(1234);
  for (int t = 0; t < 100; ++t) {
    DataSet ds = random_dataset(gen);

    ReadResult from_csv = dataset_from_csv(dataset_to_csv(ds));
    CHECK(!from_csv.partial_row);
    CHECK(from_csv.data.columns == ds.columns);

    DataSet from_json = dataset_from_json(dataset_to_json(ds));
    CHECK(from_json.columns == ds.columns);
    CHECK(from_json.meta == ds.meta);
    CHECK(from_json.protocol == ds.protocol);
    CHECK(from_json.qubit == ds.qubit);
  }
}

TEST_CASE("file round trip through both formats") {
  TempDir tmp;
  std::mt19937 gen(9);
  DataSet ds = random_dataset(gen);
  write_dataset(ds, DataFormat::csv, tmp / "d.csv");
  write_dataset(ds, DataFormat::json, tmp / "d.json");
  CHECK(read_dataset(tmp / "d.csv").data.columns == ds.columns);
  CHECK(read_dataset(tmp / "d.json").data == ds);
}

TEST_CASE("empty dataset writes a header-only file") {
  DataSet ds;
  ds.add_numeric_column("freq");
  ds.add_numeric_column("msr");
  std::string csv = dataset_to_csv(ds);
  CHECK(csv == "freq,msr\n");
  ReadResult rr = dataset_from_csv(csv);
  CHECK(rr.data.num_rows() == 0);
  REQUIRE(rr.data.columns.size() == 2);
  CHECK(rr.data.columns[0].name == "freq");
}

TEST_CASE("truncated csv returns complete rows plus an indicator") {
  DataSet ds;
  ds.add_numeric_column("delay");
  ds.add_numeric_column("prob");
  ds.add_row({1.0, 0.5});
  ds.add_row({2.0, 0.25});
  ds.add_row({3.0, 0.125});
  std::string full = dataset_to_csv(ds);

  SUBCASE("cut inside the last row") {
    std::string cut = full.substr(0, full.size() - 3);
    ReadResult rr = dataset_from_csv(cut);
    CHECK(rr.partial_row);
    CHECK(rr.data.num_rows() == 2);
    CHECK(rr.data.numeric_column("delay") == std::vector<double>{1.0, 2.0});
  }
  SUBCASE("cut right after a newline is clean") {
    std::size_t second_row_end = full.find('\n', full.find('\n') + 1) + 1;
    ReadResult rr = dataset_from_csv(full.substr(0, second_row_end));
    CHECK(!rr.partial_row);
    CHECK(rr.data.num_rows() == 1);
  }
  SUBCASE("cut inside an open quote") {
    DataSet sds;
    sds.add_string_column("gates");
    sds.add_row({std::string("a,b")});
    std::string text = dataset_to_csv(sds);
    ReadResult rr = dataset_from_csv(text.substr(0, text.size() - 3));
    CHECK(rr.partial_row);
    CHECK(rr.data.num_rows() == 0);
  }
}

TEST_CASE("malformed inputs raise typed errors") {
  CHECK_THROWS_AS(dataset_from_csv(""), FormatError);
  CHECK_THROWS_AS(dataset_from_csv("a,b\n1,2,3\n"), FormatError);
  CHECK_THROWS_AS(dataset_from_json("{not json"), FormatError);
  CHECK_THROWS_AS(dataset_from_json(R"({"columns": {"a": [1, "x"]}})"),
                  FormatError);
  TempDir tmp;
  CHECK_THROWS_AS(read_dataset(tmp / "absent.csv"), IoError);
  testsupport::write_file(tmp / "d.bin", "x");
  CHECK_THROWS_AS(read_dataset(tmp / "d.bin"), FormatError);
}

TEST_SUITE_END();
