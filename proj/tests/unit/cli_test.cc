// Copyright 2026 The histfilter Authors
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

#include <fstream>
#include <sstream>
#include <vector>

#include "histfilter/cli.h"

namespace histfilter {
namespace {

const std::string kData = HISTFILTER_TEST_DATA;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  args.insert(args.begin(), "histfilter");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("version flag") {
  const Result r = Run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == "histfilter 0.1.0\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(Run({}).code == 2);
  CHECK(Run({"frobnicate"}).code == 2);
  CHECK(Run({"enumerate", "{not json"}).code == 2);
  CHECK(Run({"enumerate", kData + "/missing.json"}).code == 2);
  CHECK(Run({"sample", kData + "/three_deal.json", "--init", "psychic"}).code == 2);
  const Result bad = Run({"enumerate", R"({"config":{"players":1}})"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("construct prints EMPTY for an infeasible public state") {
  const Result r = Run({"construct", kData + "/infeasible.json"});
  CHECK(r.code == 0);
  CHECK(r.out == "EMPTY\n");
  CHECK(Run({"construct", kData + "/three_deal.json"}).out.find("\"deal\"") != std::string::npos);
}

TEST_CASE("domain errors exit with 1") {
  CHECK(Run({"enumerate", kData + "/three_deal.json", "--cap", "2"}).code == 1);
  CHECK(Run({"sample", kData + "/infeasible.json"}).code == 1);
}

TEST_CASE("enumerate output matches the golden files") {
  const Result summary = Run({"enumerate", kData + "/three_deal.json"});
  CHECK(summary.code == 0);
  CHECK(summary.out == Slurp(kData + "/three_deal_enumerate.golden"));
  const Result table = Run({"enumerate", kData + "/three_deal.json", "--table", "-"});
  CHECK(table.code == 0);
  CHECK(table.out == Slurp(kData + "/three_deal_table.golden"));
}

TEST_CASE("generated instances are reproducible") {
  const Result a = Run({"gen-instance", "--regime", "192", "--seed", "4"});
  CHECK(a.code == 0);
  CHECK(a.out == Run({"gen-instance", "--regime", "192", "--seed", "4"}).out);
  CHECK(a.out != Run({"gen-instance", "--regime", "192", "--seed", "5"}).out);
  CHECK(a.out == Slurp(kData + "/regime192_seed4.golden"));
  const Result enumerated = Run({"enumerate", a.out.substr(0, a.out.size() - 1)});
  CHECK(enumerated.code == 0);
}

TEST_CASE("estimate is byte-identical across runs") {
  const std::vector<std::string> args{"estimate", kData + "/three_deal.json", "--replicates", "100",
                                      "--seed", "7", "--samples", "40", "--thinning", "2"};
  const Result a = Run(args);
  CHECK(a.code == 0);
  CHECK(a.out == Run(args).out);
  CHECK(a.out.rfind("instance_id,method,samples,thinning,transitions,error_mean,error_sem,wall_ms\n",
                    0) == 0);
  CHECK(a.err.empty());
}

TEST_CASE("sample writes one history per line") {
  const Result r = Run({"sample", kData + "/three_deal.json", "--samples", "5", "--thinning", "2",
                        "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
  CHECK(r.out == Run({"sample", kData + "/three_deal.json", "--samples", "5", "--thinning", "2",
                      "--seed", "3"}).out);
}

TEST_CASE("stats writes the table header") {
  const Result r = Run({"stats", "--regime", "192", "--replicates", "3", "--biases", "0.5,0.9"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

}  // namespace
}  // namespace histfilter
