#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cplc/artifact_io.hpp"
#include "cplc/formats.hpp"
#include "cplc/verify.hpp"

namespace fs = std::filesystem;
using namespace cplc;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::usage:
    case Errc::incompatible_endpoints:
    case Errc::invalid_query_set:
      return 2;
    case Errc::scale_exceeded:
    case Errc::oracle_timeout:
    case Errc::overflow:
    case Errc::degree_cap:
      return 5;
    case Errc::length_audit_failure:
    case Errc::missing_table_entry:
      return 4;
    default:
      return 3;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

BitStr read_instance(const std::string& problem_id, const std::string& path,
                     const std::string& format_name) {
  TextFormat fmt = format_name.empty() ? default_format(problem_id)
                                       : parse_format_name(format_name);
  return parse_instance_text(problem_id, fmt, read_file(path));
}

// Advisory lock around artifact writes.
class PathLock {
 public:
  explicit PathLock(const std::string& path) : lock_path_(path + ".lock") {
    fd_ = ::open(lock_path_.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~PathLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
      ::unlink(lock_path_.c_str());
    }
  }

 private:
  std::string lock_path_;
  int fd_ = -1;
};

int cmd_compile(const std::string& problem_id, const std::string& scheme_id,
                const std::string& param_text, const std::string& param_of,
                const std::string& format_name, const std::string& mode_name,
                const std::string& out_path) {
  const Scheme& s = scheme(scheme_id);
  if (s.problem_id != problem_id)
    raise(Errc::usage, "scheme " + scheme_id + " is for problem " + s.problem_id);
  BitStr k;
  if (!param_of.empty()) {
    BitStr inst = read_instance(problem_id, param_of, format_name);
    k = apply_param(s.param_id, inst);
  } else {
    k = BitStr::from_text(param_text);
  }
  CompileMode mode = s.direct_output ? CompileMode::direct : parse_compile_mode(mode_name);
  CompiledArtifact art = compile_artifact(s, k, mode);
  PathLock lock(out_path);
  save_artifact(art, out_path);
  std::cerr << "compiled " << scheme_id << " at parameter of length " << k.size() << " -> "
            << out_path << "\n";
  return 0;
}

int cmd_query(const std::string& artifact_path, const std::string& instance_path,
              const std::string& format_name) {
  CompiledArtifact art = load_artifact(artifact_path);
  BitStr x = read_instance(art.problem_id, instance_path, format_name);
  bool yes = query_compiled(art, x);
  std::cout << (yes ? "YES" : "NO") << "\n";
  return yes ? 0 : 1;
}

int cmd_reduce(const std::string& id, const std::string& instance_path,
               const std::string& out_path, const std::string& format_name, bool check) {
  const Reduction& r = builtin_reduction(id);
  BitStr x = read_instance(r.source.problem_id, instance_path, format_name);
  ApplyResult res = apply_reduction(r, x);
  if (check) {
    bool lhs = decide(r.source.problem_id, x);
    bool rhs = validate(r.target.problem_id, res.image) && decide(r.target.problem_id, res.image);
    if (lhs != rhs) {
      std::cerr << "contract A violated: source " << (lhs ? "YES" : "NO") << ", image "
                << (rhs ? "YES" : "NO") << "\n";
      return 4;
    }
    if (!res.contract_b_held) {
      std::cerr << "contract B violated: target parameter outside s(kappa(x))\n";
      return 4;
    }
    std::cerr << "contracts hold on this instance\n";
  } else if (!res.contract_b_held) {
    std::cerr << "contract B violated: target parameter outside s(kappa(x))\n";
    return 4;
  }
  std::ofstream os(out_path, std::ios::trunc);
  if (!os) raise(Errc::io_error, "cannot open " + out_path);
  os << render_instance_text(r.target.problem_id, default_format(r.target.problem_id),
                             res.image);
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& budget,
               const std::string& report_path) {
  auto reports = run_suite(suite, budget);
  std::string json = suite_to_json(reports);
  std::cout << json << "\n";
  if (!report_path.empty()) {
    std::ofstream os(report_path, std::ios::trunc);
    if (!os) raise(Errc::io_error, "cannot open " + report_path);
    os << json << "\n";
  }
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cerr << verify_status_name(r.status) << " " << r.subject_id << " ("
              << r.instances_checked << " instances)\n";
    all_pass = all_pass && r.pass();
  }
  return all_pass ? 0 : 4;
}

int cmd_bench(const std::string& artifact_path, const std::string& queries_dir,
              const std::string& format_name, const std::string& report_path) {
  auto t0 = std::chrono::steady_clock::now();
  CompiledArtifact art = load_artifact(artifact_path);
  double load_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(queries_dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<BitStr> queries;
  for (const auto& f : files)
    queries.push_back(read_instance(art.problem_id, f.string(), format_name));
  TimingReport rep =
      differential_speed(art.problem_id, scheme(art.scheme_id), art, queries, load_ms);
  std::string json = rep.to_json();
  std::cout << json << "\n";
  if (!report_path.empty()) {
    std::ofstream os(report_path, std::ios::trunc);
    if (!os) raise(Errc::io_error, "cannot open " + report_path);
    os << json << "\n";
  }
  std::cerr << "speedup " << rep.speedup << "x over " << rep.query_count << " queries\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compilance: offline compilation vs online query workbench"};
  app.require_subcommand(1);

  std::string problem_id, scheme_id, param_text, param_of, format_name, mode_name = "sparse";
  std::string artifact_path, instance_path, out_path, reduction_id, suite = "all";
  std::string budget = "small", report_path, queries_dir;
  bool check = false;

  auto* compile = app.add_subcommand("compile", "build a compiled artifact for one parameter");
  compile->add_option("--problem", problem_id)->required();
  auto* popt = compile->add_option("--param", param_text, "parameter value as a 0/1 string");
  compile->add_option("--param-of", param_of, "derive the parameter from this instance file")
      ->excludes(popt);
  compile->add_option("--scheme", scheme_id)->required();
  compile->add_option("--mode", mode_name)->check(CLI::IsMember({"literal", "sparse"}));
  compile->add_option("--format", format_name);
  compile->add_option("--out", out_path)->required();

  auto* query = app.add_subcommand("query", "answer one instance from an artifact");
  query->add_option("--artifact", artifact_path)->required();
  query->add_option("--instance", instance_path)->required();
  query->add_option("--format", format_name)
      ->check(CLI::IsMember({"dimacs", "edgelist", "gates", "raw", "pair"}));

  auto* reduce = app.add_subcommand("reduce", "apply a registry reduction");
  reduce->add_option("--id", reduction_id)->required();
  reduce->add_option("--instance", instance_path)->required();
  reduce->add_option("--out", out_path)->required();
  reduce->add_option("--format", format_name);
  reduce->add_flag("--check", check, "re-verify both contracts on this instance");

  auto* verify = app.add_subcommand("verify", "run the contract verification suites");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "reductions", "schemes", "mixed", "kernels"}));
  verify->add_option("--budget", budget);
  verify->add_option("--report", report_path);

  auto* bench = app.add_subcommand("bench", "brute force vs compiled query timing");
  bench->add_option("--artifact", artifact_path)->required();
  bench->add_option("--queries", queries_dir)->required();
  bench->add_option("--format", format_name);
  bench->add_option("--report", report_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (compile->parsed()) {
      if (param_text.empty() && param_of.empty())
        raise(Errc::usage, "compile needs --param or --param-of");
      return cmd_compile(problem_id, scheme_id, param_text, param_of, format_name, mode_name,
                         out_path);
    }
    if (query->parsed()) return cmd_query(artifact_path, instance_path, format_name);
    if (reduce->parsed())
      return cmd_reduce(reduction_id, instance_path, out_path, format_name, check);
    if (verify->parsed()) return cmd_verify(suite, budget, report_path);
    if (bench->parsed()) return cmd_bench(artifact_path, queries_dir, format_name, report_path);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 2;
}
