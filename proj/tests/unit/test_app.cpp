/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================
*/

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "olab/app.hpp"
#include "olab/io.hpp"
#include "olab/profiles.hpp"

using namespace olab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "olab_app_test";
  fs::create_directories(d);
  return d / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "ostrovsky_lab");
  return parse_config(args).value();
}

}  // namespace

TEST_CASE("valid counterexample config") {
  const RunConfig c = parse({"counterexample", "--s", "0.0", "--k-min", "3", "--k-max", "8", "--out", "r.csv"});
  CHECK(c.subcommand == Subcommand::counterexample);
  CHECK(*c.s == 0.0);
  CHECK(*c.k_min == 3);
  CHECK(*c.k_max == 8);
  CHECK(c.out == "r.csv");
  CHECK(c.seed == 0);
  CHECK(c.sign == Branch::plus);
  CHECK(c.n_t == 256);
}

TEST_CASE("flags override the config file") {
  const fs::path f = scratch("cfg.txt");
  write_text(f, "# comment\ns = 0.25\nk-min = 3\nk-max = 4   # trailing\nsign = -\n");
  const RunConfig c = parse({"counterexample", "--config", f.string(), "--s", "0.1"});
  CHECK(*c.s == 0.1);
  CHECK(*c.k_max == 4);
  CHECK(c.sign == Branch::minus);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(parse({"counterexample", "--s", "0", "--k-min", "5", "--k-max", "3"}), UsageError);
  CHECK_THROWS_WITH_AS(parse({"counterexample", "--k-min", "3", "--k-max", "4"}), doctest::Contains("'s'"), UsageError);
  CHECK_THROWS_WITH_AS(parse({"counterexample", "--s", "x", "--k-min", "3", "--k-max", "4"}), doctest::Contains("'s'"),
                       UsageError);
  CHECK_THROWS_AS(parse({"counterexample", "--alpha", "1"}), UsageError);
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_WITH_AS(parse({"verify-lemmas", "--only", "L2_9"}), doctest::Contains("only"), UsageError);
  CHECK_THROWS_AS(parse({"stochastic-continuity"}), UsageError);
  CHECK_THROWS_AS(parse({"propagate", "--t", "1"}), UsageError);

  const fs::path bad_num = scratch("bad_num.txt");
  write_text(bad_num, "k-min = 3\n\nk-max = four\n");
  CHECK_THROWS_WITH_AS(parse({"counterexample", "--config", bad_num.string(), "--s", "0"}), doctest::Contains(":3:"),
                       UsageError);
  const fs::path unknown = scratch("unknown.txt");
  write_text(unknown, "s = 0\nbogus = 1\n");
  CHECK_THROWS_WITH_AS(parse({"counterexample", "--config", unknown.string()}), doctest::Contains("bogus"), UsageError);
  const fs::path no_eq = scratch("no_eq.txt");
  write_text(no_eq, "s 0\n");
  CHECK_THROWS_WITH_AS(read_config_file(no_eq.string()), doctest::Contains(":1:"), UsageError);
}

TEST_CASE("thread count falls back to the environment") {
  ::setenv("OSTROVSKY_LAB_THREADS", "3", 1);
  CHECK(parse({"khinchine"}).threads == 3);
  CHECK(parse({"khinchine", "--threads", "2"}).threads == 2);
  ::unsetenv("OSTROVSKY_LAB_THREADS");
  CHECK(parse({"khinchine"}).threads == 1);
}

TEST_CASE("trace at t = 0 reports zero deviation") {
  const fs::path out = scratch("trace.csv");
  CHECK(run_cli({"ostrovsky_lab", "trace", "--t", "0", "--out", out.string()}) == kExitOk);
  CHECK(slurp(out) == "t,deviation\n0,0\n");
  const auto meta = nlohmann::json::parse(slurp(out.string() + ".meta.json"));
  CHECK(meta["config"]["subcommand"] == "trace");
  CHECK(meta.contains("wall_clock_seconds"));
  CHECK(meta["version"] == version_string());
}

TEST_CASE("identical invocations give identical bytes") {
  const fs::path a = scratch("k1.csv"), b = scratch("k2.csv");
  CHECK(run_cli({"ostrovsky_lab", "khinchine", "--n", "4000", "--seed", "5", "--out", a.string()}) == kExitOk);
  CHECK(run_cli({"ostrovsky_lab", "khinchine", "--n", "4000", "--seed", "5", "--threads", "3", "--out", b.string()}) ==
        kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("p,ratio,std_error\n", 0) == 0);
}

TEST_CASE("propagate writes a readable field") {
  const fs::path prof = scratch("bump.csv");
  write_profile_csv(default_random_profile(), prof.string());
  const fs::path out = scratch("field.csv");
  CHECK(run_cli({"ostrovsky_lab", "propagate", "--profile", prof.string(), "--t", "0.5", "--points", "33", "--out",
                 out.string()}) == kExitOk);
  std::ifstream in(out);
  const SpaceField u = read_field_csv(in);
  CHECK(u.values.size() == 33);
  CHECK(u.grid.x_min == -20.0);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"ostrovsky_lab", "trace", "--t", "0", "--profile", "/nonexistent/p.csv"}) == kExitError);
  CHECK(run_cli({"ostrovsky_lab", "counterexample", "--k-min", "3"}) == kExitError);
  CHECK(run_cli({"ostrovsky_lab", "--help"}) == kExitOk);

  const fs::path dir = scratch("corpus");
  fs::create_directories(dir);
  write_profile_csv(default_random_profile(), (dir / "bump.csv").string());
  const fs::path out = scratch("lemmas.csv");
  CHECK(run_cli({"ostrovsky_lab", "verify-lemmas", "--corpus", dir.string(), "--only", "L2_6,NORM_EQUIV", "--out",
                 out.string()}) == kExitOk);
  CHECK(slurp(out).rfind("lemma_id,profile_id,params,measured_lhs,bound_rhs,fitted_C,pass\n", 0) == 0);
  CHECK(run_cli({"ostrovsky_lab", "verify-lemmas", "--corpus", dir.string(), "--only", "L2_4", "--c-max", "1e-30",
                 "--out", out.string()}) == kExitCheckFailed);
}
