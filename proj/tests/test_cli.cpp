#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cplc/artifact_io.hpp"
#include "cplc/formats.hpp"

using namespace cplc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path work_dir() {
  fs::path d = fs::temp_directory_path() / "compilance_cli_test";
  fs::create_directories(d);
  return d;
}

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("COMPILANCE_BIN");
  REQUIRE(bin != nullptr);
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(bin) + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::trunc);
  os << content;
}

}  // namespace

TEST_CASE("artifact files round trip byte-identically") {
  auto art = compile_artifact(scheme("parity.len.id"), encode_unary(4), CompileMode::literal);
  auto bytes = serialize_artifact(art);
  CompiledArtifact back = deserialize_artifact(bytes);
  CHECK(serialize_artifact(back) == bytes);
  CHECK(back.problem_id == art.problem_id);
  CHECK(back.scheme_id == art.scheme_id);
  CHECK(back.param_value == art.param_value);
  CHECK(back.checksum == art.checksum);
  for (const char* q : {"", "1", "1011", "0110"})
    CHECK(query_compiled(back, BitStr::from_text(q)) ==
          query_compiled(art, BitStr::from_text(q)));

  auto sparse = compile_artifact(scheme("3sat.nu.dedup"), encode_unary(1), CompileMode::sparse);
  CHECK(serialize_artifact(deserialize_artifact(serialize_artifact(sparse))) ==
        serialize_artifact(sparse));
  auto direct =
      compile_artifact(scheme("hampath.gamma.dpscaffold"), encode_unary(4), CompileMode::direct);
  CHECK(serialize_artifact(deserialize_artifact(serialize_artifact(direct))) ==
        serialize_artifact(direct));
}

TEST_CASE("corrupted artifacts are rejected") {
  auto art = compile_artifact(scheme("parity.len.id"), encode_unary(3), CompileMode::literal);
  auto bytes = serialize_artifact(art);
  auto corrupted = bytes;
  corrupted[bytes.size() / 2] ^= 0x01;
  CHECK_THROWS_AS((void)deserialize_artifact(corrupted), Error);

  auto wrong_version = bytes;
  wrong_version[4] = 9;
  CHECK_THROWS_AS((void)deserialize_artifact(wrong_version), Error);
}

TEST_CASE("cli compile and query honor the exit-code contract") {
  fs::path d = work_dir();
  write_file(d / "inst_yes.txt", "1011\n");
  write_file(d / "inst_no.txt", "1010\n");

  auto compiled = run_cli("compile --problem parity --scheme parity.len.id --param 1111 "
                          "--mode literal --out " +
                          (d / "parity.cplc").string());
  CHECK(compiled.exit_code == 0);
  CHECK(compiled.out.empty());  // diagnostics go to stderr

  auto yes = run_cli("query --artifact " + (d / "parity.cplc").string() + " --instance " +
                     (d / "inst_yes.txt").string());
  CHECK(yes.exit_code == 0);
  CHECK(yes.out == "YES\n");

  auto no = run_cli("query --artifact " + (d / "parity.cplc").string() + " --instance " +
                    (d / "inst_no.txt").string());
  CHECK(no.exit_code == 1);
  CHECK(no.out == "NO\n");
}

TEST_CASE("cli usage, malformed and scale errors") {
  fs::path d = work_dir();
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("compile --problem parity --scheme parity.len.id --out x.cplc").exit_code == 2);

  // malformed instance file
  write_file(d / "bad.txt", "10a1\n");
  write_file(d / "p4.cplc.unused", "");
  auto compiled = run_cli("compile --problem parity --scheme parity.len.id --param 111 "
                          "--mode literal --out " +
                          (d / "p3.cplc").string());
  REQUIRE(compiled.exit_code == 0);
  CHECK(run_cli("query --artifact " + (d / "p3.cplc").string() + " --instance " +
                (d / "bad.txt").string())
            .exit_code == 3);

  // literal mode beyond the magnitude cap
  auto big = run_cli("compile --problem parity --scheme parity.len.id --param " +
                     std::string(30, '1') + " --mode literal --out " + (d / "p30.cplc").string());
  CHECK(big.exit_code == 5);

  // corrupted artifact file
  auto bytes = slurp(d / "p3.cplc");
  bytes[bytes.size() / 2] ^= 0x01;
  std::ofstream os(d / "corrupt.cplc", std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  os.close();
  write_file(d / "q.txt", "1\n");
  CHECK(run_cli("query --artifact " + (d / "corrupt.cplc").string() + " --instance " +
                (d / "q.txt").string())
            .exit_code == 3);
}

TEST_CASE("cli reduce with contract checking") {
  fs::path d = work_dir();
  write_file(d / "phi.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
  auto r = run_cli("reduce --id 3sat.nu-to-2hs --instance " + (d / "phi.cnf").string() +
                   " --out " + (d / "vc.txt").string() + " --check");
  CHECK(r.exit_code == 0);
  // the written image parses as a canonical hs2 instance in edge-list form
  BitStr image = parse_instance_text("hs2", TextFormat::edgelist, slurp(d / "vc.txt"));
  CHECK(validate("hs2", image));
  CHECK(decide("hs2", image) == false);

  CHECK(run_cli("reduce --id nope --instance " + (d / "phi.cnf").string() + " --out " +
                (d / "x.txt").string())
            .exit_code == 2);
}

TEST_CASE("cli verify reports and exit codes") {
  fs::path d = work_dir();
  auto r = run_cli("verify --suite kernels --budget small --report " +
                   (d / "report.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"all_pass\": true") != std::string::npos);
  CHECK(slurp(d / "report.json").find("\"status\": \"PASS\"") != std::string::npos);
  CHECK(run_cli("verify --suite nope --budget small").exit_code == 2);
  CHECK(run_cli("verify --suite kernels --budget giant").exit_code == 2);
}

TEST_CASE("cli bench over a query directory") {
  fs::path d = work_dir();
  fs::path qdir = d / "queries";
  fs::create_directories(qdir);
  for (int i = 0; i < 32; ++i) {
    std::string bits;
    for (int b = 0; b < 5; ++b) bits.push_back(((i >> b) & 1) ? '1' : '0');
    std::ostringstream name;
    name << "q" << (i < 10 ? "0" : "") << i << ".txt";
    write_file(qdir / name.str(), bits + "\n");
  }
  auto compiled = run_cli("compile --problem parity --scheme parity.len.id --param 11111 "
                          "--mode literal --out " +
                          (d / "p5.cplc").string());
  REQUIRE(compiled.exit_code == 0);
  auto r = run_cli("bench --artifact " + (d / "p5.cplc").string() + " --queries " +
                   qdir.string() + " --report " + (d / "bench.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"speedup\"") != std::string::npos);
  CHECK(r.out.find("\"answers_agree\": true") != std::string::npos);
}

TEST_CASE("cli compile accepts --param-of") {
  fs::path d = work_dir();
  write_file(d / "seed.txt", "110\n");
  auto r = run_cli("compile --problem parity --scheme parity.len.id --param-of " +
                   (d / "seed.txt").string() + " --mode literal --out " +
                   (d / "pof.cplc").string());
  CHECK(r.exit_code == 0);
  CompiledArtifact art = load_artifact((d / "pof.cplc").string());
  CHECK(art.param_value == encode_unary(3));
}
