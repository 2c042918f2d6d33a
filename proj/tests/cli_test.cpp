#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "cfgalg/serialize.hpp"

using namespace cfgalg;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string& cli_bin() {
  static const std::string bin = [] {
    const char* env = std::getenv("CFGALG_BIN");
    REQUIRE(env != nullptr);
    return std::string(env);
  }();
  return bin;
}

fs::path fresh_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("cfgalg_cli_test_" + std::to_string(::getpid()) + "_" +
                                   std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

CmdResult run_cli(const fs::path& dir, const std::string& args) {
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string command = cli_bin() + " " + args + " >" + out_file.string() + " 2>" +
                              err_file.string();
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return CmdResult{WEXITSTATUS(status), slurp(out_file), slurp(err_file)};
}

SchemaFile demo_schema() {
  return SchemaFile({ParamDomain::finite_string("autostart", {"no", "yes"}),
                     ParamDomain::rational_domain("ratio")},
                    {RawValue(std::string("no")), RawValue(Rational(3, 4))});
}

fs::path write_schema(const fs::path& dir) {
  const fs::path path = dir / "schema.json";
  write_json_file(path.string(), schema_to_json(demo_schema()));
  return path;
}

fs::path write_journal(const fs::path& dir, const Json& entries,
                       const std::string& name = "journal.json") {
  const fs::path path = dir / name;
  write_json_file(path.string(), Json{{"format_version", 1}, {"entries", entries}});
  return path;
}

Json delta_entry(std::uint64_t tick, const std::string& param, const std::string& q) {
  return Json{{"tick", tick}, {"op", Json{{"kind", "delta"}, {"q", q}, {"param", param}}}};
}

} // namespace

TEST_CASE("sim writes a trace and reports the run") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);
  const fs::path journal =
      write_journal(dir, Json::array({delta_entry(0, "ratio", "1/4"),
                                      delta_entry(1, "ratio", "1")}));

  const fs::path trace = dir / "trace.json";
  const CmdResult r = run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                                       " --ticks 2 --out " + trace.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("drift events: 0") != std::string::npos);
  CHECK(r.out.find("final: autostart=no ratio=2/1") != std::string::npos);
  REQUIRE(fs::exists(trace));

  const Trace loaded = trace_from_json(load_json_file(trace.string()));
  CHECK(loaded.drift_count == 0);
  CHECK(loaded.final_state == StateVec{Rational(0), Rational(2)});
}

TEST_CASE("values outside the admissible set are flagged as extended") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);
  // push the yes/no parameter out of its encoded image
  const fs::path journal = write_journal(
      dir, Json::array({Json{{"tick", 0},
                             {"op", Json{{"kind", "cee"}, {"q", "5"}, {"param", "autostart"}}}}}));

  const CmdResult r = run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                                       " --ticks 1 --out " + (dir / "t.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("final: autostart=extended(5/1) ratio=3/4") != std::string::npos);
}

TEST_CASE("sim rejects a journal that references an unknown parameter") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);
  const fs::path journal = write_journal(dir, Json::array({delta_entry(0, "ghost", "1")}));

  const CmdResult r = run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                                       " --ticks 1 --out " + (dir / "t.json").string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("SCHEMA_MISMATCH") != std::string::npos);
}

TEST_CASE("missing and malformed files use exit code 2") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);

  const CmdResult missing = run_cli(dir, "sim " + (dir / "nope.json").string() + " " +
                                             (dir / "nope2.json").string() +
                                             " --ticks 1 --out " + (dir / "t.json").string());
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("IO_ERROR") != std::string::npos);

  const fs::path garbage = dir / "garbage.json";
  std::ofstream(garbage) << "{not json";
  const CmdResult malformed =
      run_cli(dir, "sim " + schema.string() + " " + garbage.string() + " --ticks 1 --out " +
                       (dir / "t.json").string());
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.err.find("FORMAT_ERROR") != std::string::npos);

  const CmdResult usage = run_cli(dir, "sim");
  CHECK(usage.exit_code == 2);
}

TEST_CASE("repeated sim runs are byte-identical") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);
  const fs::path journal = write_journal(dir, Json::array({delta_entry(0, "ratio", "1/4")}));

  const std::string base = "sim " + schema.string() + " " + journal.string() +
                           " --ticks 3 --drift-rate 1/2 --drift-style set-random --seed 99";
  const fs::path t1 = dir / "t1.json";
  const fs::path t2 = dir / "t2.json";
  CHECK(run_cli(dir, base + " --out " + t1.string()).exit_code == 0);
  CHECK(run_cli(dir, base + " --out " + t2.string()).exit_code == 0);
  const std::string bytes1 = slurp(t1);
  CHECK(!bytes1.empty());
  CHECK(bytes1 == slurp(t2));
}

TEST_CASE("rollback modes through the CLI") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);

  const fs::path delta_trace = dir / "delta_trace.json";
  const fs::path journal =
      write_journal(dir, Json::array({delta_entry(0, "ratio", "1/4"),
                                      delta_entry(1, "ratio", "-2")}));
  REQUIRE(run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                           " --ticks 2 --out " + delta_trace.string())
              .exit_code == 0);

  SECTION("strict on a closed relative-only trace prints the initial state") {
    const CmdResult r = run_cli(dir, "rollback " + delta_trace.string() + " --mode strict");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("state: autostart=no ratio=3/4") != std::string::npos);
  }

  const fs::path cee_trace = dir / "cee_trace.json";
  const fs::path cee_journal = write_journal(
      dir,
      Json::array({Json{{"tick", 0},
                        {"op", Json{{"kind", "cee"}, {"q", "5"}, {"param", "ratio"}}}}}),
      "cee_journal.json");
  REQUIRE(run_cli(dir, "sim " + schema.string() + " " + cee_journal.string() +
                           " --ticks 1 --out " + cee_trace.string())
              .exit_code == 0);

  SECTION("strict fails on an absolute entry") {
    const CmdResult r = run_cli(dir, "rollback " + cee_trace.string() + " --mode strict");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("NOT_INVERTIBLE") != std::string::npos);
    CHECK(r.err.find("entry 0") != std::string::npos);
    CHECK(r.out.find("entry 0: NOT_INVERTIBLE (components: 1)") != std::string::npos);
  }

  SECTION("meadow grounds the same trace") {
    const CmdResult r = run_cli(dir, "rollback " + cee_trace.string() + " --mode meadow");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("state: autostart=no ratio=0/1") != std::string::npos);
  }

  SECTION("snapshot restores the baseline") {
    const CmdResult r = run_cli(dir, "rollback " + cee_trace.string() + " --mode snapshot");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("state: autostart=no ratio=3/4") != std::string::npos);
  }

  SECTION("policy mode needs a policy file") {
    const CmdResult r = run_cli(dir, "rollback " + cee_trace.string() + " --mode policy");
    CHECK(r.exit_code == 2);

    const fs::path policy = dir / "policy.json";
    write_json_file(policy.string(),
                    Json{{"format_version", 1},
                         {"desired", Json{{"autostart", "yes"}, {"ratio", "1/2"}}}});
    const CmdResult ok = run_cli(dir, "rollback " + cee_trace.string() +
                                          " --mode policy --policy " + policy.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("state: autostart=yes ratio=1/2") != std::string::npos);
  }
}

TEST_CASE("converge and report through the CLI") {
  const fs::path dir = fresh_dir();
  const fs::path schema = write_schema(dir);
  const fs::path journal = write_journal(dir, Json::array({delta_entry(0, "ratio", "1/4")}));
  const fs::path policy = dir / "policy.json";
  write_json_file(policy.string(),
                  Json{{"format_version", 1},
                       {"desired", Json{{"autostart", "yes"}, {"ratio", "1/2"}}}});

  const fs::path closed_trace = dir / "closed.json";
  REQUIRE(run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                           " --ticks 1 --out " + closed_trace.string())
              .exit_code == 0);

  const fs::path open_trace = dir / "open.json";
  REQUIRE(run_cli(dir, "sim " + schema.string() + " " + journal.string() +
                           " --ticks 2 --drift-rate 1 --seed 4 --out " + open_trace.string())
              .exit_code == 0);

  SECTION("converge repairs the drifted final state") {
    const CmdResult r = run_cli(dir, "converge " + open_trace.string() + " " + policy.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("post: autostart=yes ratio=1/2") != std::string::npos);
    CHECK(r.out.find("iterations_to_fixpoint: 1") != std::string::npos);
  }

  SECTION("report tells closed from open") {
    const CmdResult closed = run_cli(dir, "report " + closed_trace.string());
    CHECK(closed.exit_code == 0);
    CHECK(closed.out.find("verdict: |H| = |J|, closed") != std::string::npos);

    const CmdResult open = run_cli(dir, "report " + open_trace.string());
    CHECK(open.exit_code == 0);
    CHECK(open.out.find("verdict: |H| > |J|, open") != std::string::npos);
  }
}
