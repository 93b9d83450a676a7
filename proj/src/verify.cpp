#include "cplc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace cplc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool failure_less(const Failure& a, const Failure& b) {
  if (a.instance.size() != b.instance.size()) return a.instance.size() < b.instance.size();
  if (a.instance != b.instance) return a.instance < b.instance;
  return a.contract < b.contract;
}

Failure make_failure(const BitStr& x, std::string contract, std::string expected,
                     std::string got) {
  Failure f;
  f.instance = x.size() > kFailureCaptureBytes ? x.substr(0, kFailureCaptureBytes) : x;
  f.contract = std::move(contract);
  f.expected = std::move(expected);
  f.got = std::move(got);
  return f;
}

// Fans instance batches out to a small worker pool; failure aggregation is
// order-independent (sorted canonically, first 10 kept).
struct CheckRun {
  std::uint64_t checked = 0;
  std::vector<Failure> failures;
  bool scale_exceeded = false;
};

CheckRun run_checks(const std::function<void(const InstanceSink&)>& generate,
                    const std::function<void(const BitStr&, std::vector<Failure>&)>& check) {
  unsigned workers = worker_count();
  CheckRun result;

  if (workers <= 1) {
    std::vector<Failure> local;
    try {
      generate([&](const BitStr& x) {
        ++result.checked;
        try {
          check(x, local);
        } catch (const Error& e) {
          if (e.code() == Errc::scale_exceeded) {
            result.scale_exceeded = true;
            return;
          }
          local.push_back(make_failure(x, "error", "no error", e.what()));
        }
        if (local.size() > 4 * kMaxRecordedFailures) {
          std::sort(local.begin(), local.end(), failure_less);
          local.resize(kMaxRecordedFailures);
        }
      });
    } catch (const Error& e) {
      if (e.code() != Errc::scale_exceeded) throw;
      result.scale_exceeded = true;
    }
    result.failures = std::move(local);
  } else {
    constexpr std::size_t kBatch = 1024;
    std::deque<std::vector<BitStr>> queue;
    std::mutex mu;
    std::condition_variable cv_put, cv_get;
    bool done = false;
    bool scale = false;
    std::vector<std::vector<Failure>> worker_failures(workers);

    auto worker = [&](unsigned wi) {
      std::vector<Failure>& local = worker_failures[wi];
      while (true) {
        std::vector<BitStr> batch;
        {
          std::unique_lock lk(mu);
          cv_get.wait(lk, [&] { return !queue.empty() || done; });
          if (queue.empty()) return;
          batch = std::move(queue.front());
          queue.pop_front();
          cv_put.notify_one();
        }
        for (const BitStr& x : batch) {
          try {
            check(x, local);
          } catch (const Error& e) {
            if (e.code() == Errc::scale_exceeded) {
              std::lock_guard lk(mu);
              scale = true;
              continue;
            }
            local.push_back(make_failure(x, "error", "no error", e.what()));
          }
          if (local.size() > 4 * kMaxRecordedFailures) {
            std::sort(local.begin(), local.end(), failure_less);
            local.resize(kMaxRecordedFailures);
          }
        }
      }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker, i);

    std::vector<BitStr> batch;
    batch.reserve(kBatch);
    auto flush = [&] {
      if (batch.empty()) return;
      std::unique_lock lk(mu);
      cv_put.wait(lk, [&] { return queue.size() < 2 * workers; });
      queue.push_back(std::move(batch));
      batch = {};
      batch.reserve(kBatch);
      cv_get.notify_one();
    };
    try {
      generate([&](const BitStr& x) {
        ++result.checked;
        batch.push_back(x);
        if (batch.size() >= kBatch) flush();
      });
      flush();
    } catch (const Error& e) {
      if (e.code() != Errc::scale_exceeded) {
        {
          std::lock_guard lk(mu);
          done = true;
        }
        cv_get.notify_all();
        for (auto& t : pool) t.join();
        throw;
      }
      result.scale_exceeded = true;
      flush();
    }
    {
      std::lock_guard lk(mu);
      done = true;
    }
    cv_get.notify_all();
    for (auto& t : pool) t.join();
    result.scale_exceeded = result.scale_exceeded || scale;
    for (auto& wf : worker_failures)
      result.failures.insert(result.failures.end(), wf.begin(), wf.end());
  }

  std::sort(result.failures.begin(), result.failures.end(), failure_less);
  if (result.failures.size() > kMaxRecordedFailures)
    result.failures.resize(kMaxRecordedFailures);
  return result;
}

VerificationReport finish_report(std::string subject, std::string budget, CheckRun run,
                                 Clock::time_point start) {
  VerificationReport rep;
  rep.subject_id = std::move(subject);
  rep.budget_desc = std::move(budget);
  rep.instances_checked = run.checked;
  rep.failures = std::move(run.failures);
  rep.wall_ms = ms_since(start);
  if (run.scale_exceeded)
    rep.status = VerifyStatus::scale_exceeded;
  else
    rep.status = (rep.failures.empty() && rep.instances_checked > 0) ? VerifyStatus::pass
                                                                     : VerifyStatus::fail;
  return rep;
}

}  // namespace

std::string verify_status_name(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::pass: return "PASS";
    case VerifyStatus::fail: return "FAIL";
    case VerifyStatus::scale_exceeded: return "SCALE_EXCEEDED";
  }
  return "?";
}

unsigned worker_count() {
  if (const char* env = std::getenv("COMPILANCE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 64) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 8u);
}

// ---------------------------------------------------------------- reports

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["subject"] = subject_id;
  j["budget"] = budget_desc;
  j["checked"] = instances_checked;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : failures) {
    j["failures"].push_back({{"instance", f.instance.text()},
                             {"contract", f.contract},
                             {"expected", f.expected},
                             {"got", f.got}});
  }
  j["status"] = verify_status_name(status);
  j["wall_ms"] = wall_ms;
  return j.dump(2);
}

// ---------------------------------------------------------------- verifiers

VerificationReport verify_reduction(const Reduction& r, const Budget& budget) {
  auto start = Clock::now();
  const Problem& src = problem(r.source.problem_id);
  const Problem& tgt = problem(r.target.problem_id);
  auto run = run_checks(
      [&](const InstanceSink& sink) { src.enumerate(budget, sink); },
      [&](const BitStr& x, std::vector<Failure>& out) {
        ApplyResult a;
        try {
          a = apply_reduction(r, x);
        } catch (const Error& e) {
          if (e.code() == Errc::scale_exceeded) throw;
          out.push_back(make_failure(x, "apply", "image", e.what()));
          return;
        }
        bool lhs = src.decide(x);
        bool rhs;
        try {
          rhs = tgt.validate(a.image) && tgt.decide(a.image);
        } catch (const Error& e) {
          if (e.code() == Errc::scale_exceeded) throw;
          out.push_back(make_failure(x, "A", lhs ? "true" : "false", e.what()));
          return;
        }
        if (lhs != rhs)
          out.push_back(make_failure(x, "A", lhs ? "true" : "false", rhs ? "true" : "false"));
        if (!a.contract_b_held)
          out.push_back(make_failure(x, "B", "kappa'(g(x)) in s(kappa(x))", "not a member"));
        BitStr k = apply_param(r.source.param_id, x);
        std::uint64_t enc = r.s.eval(k).encoded_size();
        std::uint64_t declared = r.s.enc_size_poly.eval(k.size());
        if (enc > declared)
          out.push_back(make_failure(x, "S-LEN", "<= " + std::to_string(declared),
                                     std::to_string(enc)));
      });
  return finish_report(r.id, budget.to_string(), std::move(run), start);
}

VerificationReport verify_scheme(const Scheme& w, const Budget& budget) {
  auto start = Clock::now();
  const Problem& src = problem(w.problem_id);
  const Problem& tgt = scheme_target(w);
  auto run = run_checks(
      [&](const InstanceSink& sink) { src.enumerate(budget, sink); },
      [&](const BitStr& x, std::vector<Failure>& out) {
        // offline results memoized per (scheme, parameter value)
        thread_local std::unordered_map<std::string, BitStr> memo;
        if (memo.size() > 1u << 14) memo.clear();
        BitStr k = apply_param(w.param_id, x);
        std::string memo_key = w.id + "|" + k.text();
        auto it = memo.find(memo_key);
        if (it == memo.end()) it = memo.emplace(std::move(memo_key), w.offline(k)).first;
        const BitStr& c = it->second;

        // offline length audit
        if (w.claim == ClassClaim::expcomp) {
          std::uint64_t e = w.offline_len_poly.eval(k.size());
          if (e < 63 && c.size() > (1ull << e))
            out.push_back(make_failure(x, "C-LEN", "<= 2^" + std::to_string(e),
                                       std::to_string(c.size())));
        } else {
          std::uint64_t lim = w.offline_len_poly.eval(k.size());
          if (c.size() > lim)
            out.push_back(make_failure(x, "C-LEN", "<= " + std::to_string(lim),
                                       std::to_string(c.size())));
        }

        BitStr y;
        try {
          y = w.online(c, x);
        } catch (const Error& e) {
          if (e.code() == Errc::scale_exceeded) throw;
          out.push_back(make_failure(x, "online", "image", e.what()));
          return;
        }
        if (w.claim == ClassClaim::chopped && w.chopped_bound) {
          std::uint64_t lim = w.chopped_bound->eval(k.size());
          if (y.size() > lim)
            out.push_back(make_failure(x, "CHOP-LEN", "<= " + std::to_string(lim),
                                       std::to_string(y.size())));
        }
        bool lhs = src.decide(x);
        bool rhs = tgt.validate(y) && tgt.decide(y);
        if (lhs != rhs)
          out.push_back(make_failure(x, "A", lhs ? "true" : "false", rhs ? "true" : "false"));
      });
  return finish_report(w.id, budget.to_string(), std::move(run), start);
}

VerificationReport verify_artifact(const Scheme& s, const CompiledArtifact& artifact,
                                   const Budget& budget) {
  auto start = Clock::now();
  const Problem& src = problem(artifact.problem_id);
  auto run = run_checks(
      [&](const InstanceSink& sink) {
        src.enumerate(budget, [&](const BitStr& x) {
          BitStr kx = apply_param(artifact.param_id, x);
          if (artifact_covers(s, artifact, kx)) sink(x);
        });
      },
      [&](const BitStr& x, std::vector<Failure>& out) {
        bool expected = src.decide(x);
        bool got;
        try {
          got = query_compiled(s, artifact, x);
        } catch (const Error& e) {
          if (e.code() == Errc::scale_exceeded) throw;
          out.push_back(make_failure(x, "QUERY", expected ? "true" : "false", e.what()));
          return;
        }
        if (got != expected)
          out.push_back(
              make_failure(x, "QUERY", expected ? "true" : "false", got ? "true" : "false"));
      });
  return finish_report(artifact.scheme_id + "@" + artifact.param_value.text(),
                       budget.to_string(), std::move(run), start);
}

VerificationReport audit_lengths(const std::string& subject_id,
                                 const std::function<BitStr(const BitStr&)>& fn,
                                 const PolyNat& declared,
                                 const std::string& generator_problem, const Budget& budget) {
  auto start = Clock::now();
  const Problem& gen = problem(generator_problem);
  auto run = run_checks(
      [&](const InstanceSink& sink) { gen.enumerate(budget, sink); },
      [&](const BitStr& x, std::vector<Failure>& out) {
        BitStr y = fn(x);
        std::uint64_t lim = declared.eval(x.size());
        if (y.size() > lim)
          out.push_back(
              make_failure(x, "LEN", "<= " + std::to_string(lim), std::to_string(y.size())));
      });
  return finish_report(subject_id, budget.to_string(), std::move(run), start);
}

VerificationReport verify_mixed_witness(const PairLanguage& B, const MixedCWitness& w,
                                        const Budget& budget) {
  auto start = Clock::now();
  if (B.problem_id.empty()) raise(Errc::usage, "mixed witness audit needs a registered language");
  const Problem& src = problem(B.problem_id);
  auto run = run_checks(
      [&](const InstanceSink& sink) { src.enumerate(budget, sink); },
      [&](const BitStr& enc, std::vector<Failure>& out) {
        bool lhs = B.decide_enc(enc);
        auto [x, y] = decode_pair(enc);
        bool rhs = w.target.decide_enc(
            encode_pair(w.f(x, encode_unary(y.size())), y));
        if (lhs != rhs)
          out.push_back(
              make_failure(enc, "MIXED", lhs ? "true" : "false", rhs ? "true" : "false"));
      });
  return finish_report("mixedc(" + B.id + "," + w.id + ")", budget.to_string(), std::move(run),
                       start);
}

// ---------------------------------------------------------------- mutation

namespace {
BitStr flip_bit(BitStr y, std::size_t bit) {
  if (bit < y.size()) y.set_bit(bit, !y.bit(bit));
  return y;
}
}  // namespace

Reduction mutate_reduction_output(const Reduction& r, std::size_t bit) {
  Reduction out = r;
  out.id = r.id + ".mut" + std::to_string(bit);
  auto base = r.g_online;
  out.g_online = [base, bit](const BitStr& c, const BitStr& x) {
    return flip_bit(base(c, x), bit);
  };
  return out;
}

Scheme mutate_scheme_output(const Scheme& s, std::size_t bit) {
  Scheme out = s;
  out.id = s.id + ".mut" + std::to_string(bit);
  auto base = s.online;
  out.online = [base, bit](const BitStr& c, const BitStr& x) {
    return flip_bit(base(c, x), bit);
  };
  out.offline_calls = std::make_shared<std::atomic<std::uint64_t>>(0);
  return out;
}

bool mutation_sensitive_reduction(const Reduction& r, const Budget& budget) {
  for (std::size_t bit : {0u, 1u, 2u}) {
    VerificationReport rep = verify_reduction(mutate_reduction_output(r, bit), budget);
    if (rep.status == VerifyStatus::fail) return true;
  }
  return false;
}

bool mutation_sensitive_scheme(const Scheme& s, const Budget& budget) {
  for (std::size_t bit : {0u, 1u, 2u}) {
    VerificationReport rep = verify_scheme(mutate_scheme_output(s, bit), budget);
    if (rep.status == VerifyStatus::fail) return true;
  }
  return false;
}

// ---------------------------------------------------------------- timing

std::string TimingReport::to_json() const {
  nlohmann::json j;
  j["baseline_ns"] = baseline_ns;
  j["compiled_ns"] = compiled_ns;
  j["compile_ms"] = compile_ms;
  j["speedup"] = speedup;
  j["query_count"] = query_count;
  j["answers_agree"] = answers_agree;
  return j.dump(2);
}

TimingReport differential_speed(const std::string& problem_id, const Scheme& s,
                                const CompiledArtifact& artifact,
                                const std::vector<BitStr>& queries, double compile_ms) {
  if (queries.size() < 30)
    raise(Errc::invalid_query_set, "need at least 30 queries, got " +
                                       std::to_string(queries.size()));
  const Problem& p = problem(problem_id);
  for (const BitStr& q : queries) {
    BitStr kq = apply_param(artifact.param_id, q);
    if (!artifact_covers(s, artifact, kq))
      raise(Errc::param_mismatch, "query parameter not covered by the artifact");
  }

  // 3 warmup rounds on each path, excluded from the medians
  for (int w = 0; w < 3; ++w) {
    (void)p.decide(queries[w % queries.size()]);
    (void)query_compiled(s, artifact, queries[w % queries.size()]);
  }

  std::vector<double> base_ns, comp_ns;
  bool agree = true;
  base_ns.reserve(queries.size());
  comp_ns.reserve(queries.size());
  for (const BitStr& q : queries) {
    auto t0 = Clock::now();
    bool a = p.decide(q);
    auto t1 = Clock::now();
    bool b = query_compiled(s, artifact, q);
    auto t2 = Clock::now();
    base_ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    comp_ns.push_back(std::chrono::duration<double, std::nano>(t2 - t1).count());
    agree = agree && (a == b);
  }
  auto median = [](std::vector<double>& v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  TimingReport rep;
  rep.query_count = queries.size();
  rep.baseline_ns = median(base_ns);
  rep.compiled_ns = median(comp_ns);
  rep.compile_ms = compile_ms;
  rep.speedup = rep.compiled_ns > 0 ? rep.baseline_ns / rep.compiled_ns : 0.0;
  rep.answers_agree = agree;
  return rep;
}

// ---------------------------------------------------------------- suites

namespace {

struct SuiteEntry {
  std::string suite;
  std::function<VerificationReport(int level)> run;
};

Budget pick(int level, Budget small, Budget medium) { return level >= 2 ? medium : small; }

std::vector<SuiteEntry> suite_entries() {
  std::vector<SuiteEntry> out;
  auto red = [&](const std::string& id, Budget small, Budget medium) {
    out.push_back({"reductions", [id, small, medium](int level) {
                     return verify_reduction(builtin_reduction(id), pick(level, small, medium));
                   }});
  };
  red("hampath.gamma-len", {4, 0, 0}, {6, 0, 0});
  red("hampath.len-gamma", {4, 0, 0}, {6, 0, 0});
  red("3sat.nu-len", {2, 3, 0}, {2, 4, 0});
  red("3sat.len-nu", {2, 3, 0}, {2, 4, 0});
  red("circuitsat.munu-len", {4, 0, 0}, {5, 0, 0});
  red("circuitsat.len-munu", {4, 0, 0}, {5, 0, 0});
  red("3sat.nu-to-2hs", {2, 2, 0}, {2, 3, 0});
  red("hs2-to-hs3", {4, 3, 0}, {5, 3, 0});
  red("hs3-to-hs4", {4, 2, 0}, {4, 3, 0});

  auto sch = [&](const std::string& suite, const std::string& id, Budget small, Budget medium) {
    out.push_back({suite, [id, small, medium](int level) {
                     return verify_scheme(scheme(id), pick(level, small, medium));
                   }});
  };
  sch("schemes", "parity.len.id", {8, 0, 0}, {10, 0, 0});
  sch("schemes", "majority.len.id", {8, 0, 0}, {10, 0, 0});
  sch("schemes", "first1.len.id", {8, 0, 0}, {10, 0, 0});
  sch("schemes", "parity.len.id.norm", {8, 0, 0}, {10, 0, 0});
  sch("schemes", "majority.len.id.norm", {8, 0, 0}, {10, 0, 0});
  sch("schemes", "3sat.len.id", {2, 3, 0}, {2, 4, 0});
  sch("schemes", "3sat.nu.dedup", {2, 3, 0}, {2, 4, 0});
  sch("schemes", "hampath.gamma.id", {4, 0, 0}, {5, 0, 0});
  sch("schemes", "hampath.gamma.dpscaffold", {5, 0, 0}, {6, 0, 0});
  sch("schemes", "circuitsat.munu.id", {4, 0, 0}, {5, 0, 0});
  sch("kernels", "hs2.pi2.kernel", {4, 3, 0}, {5, 4, 0});
  sch("kernels", "hs3.pi2.kernel", {4, 2, 0}, {4, 3, 0});

  // pair-language bridge subjects.
  out.push_back({"mixed", [](int level) {
                   return verify_mixed_witness(toy_pair_language(), toy_mixed_witness(),
                                               pick(level, {4, 4, 0}, {5, 5, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_mixed_witness(ci_pair_language(), ci_mixed_witness(),
                                               pick(level, {2, 2, 0}, {3, 2, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_scheme(mixed_to_chopped(toy_pair_language(), toy_mixed_witness()),
                                        pick(level, {4, 4, 0}, {5, 5, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_scheme(mixed_to_chopped(ci_pair_language(), ci_mixed_witness()),
                                        pick(level, {2, 2, 0}, {3, 2, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_reduction(mixed_reduction_to_polycomp(synthetic_eps_to_toy()),
                                           pick(level, {1, 6, 0}, {1, 8, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_reduction(hardness_from_epsilon(synthetic_eps_to_toy(), "parity"),
                                           pick(level, {6, 0, 0}, {8, 0, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_reduction(slices_to_mu_reduction(toy_pair_language()),
                                           pick(level, {4, 4, 0}, {5, 5, 0}));
                 }});
  out.push_back({"mixed", [](int level) {
                   return verify_reduction(slices_to_mu_reduction(mmc_pair_language()),
                                           pick(level, {2, 2, 0}, {2, 2, 0}));
                 }});
  return out;
}

}  // namespace

bool known_budget_name(const std::string& name) {
  return name == "small" || name == "medium";
}

std::vector<VerificationReport> run_suite(const std::string& suite,
                                          const std::string& budget_name) {
  int level;
  if (budget_name == "small")
    level = 1;
  else if (budget_name == "medium")
    level = 2;
  else
    raise(Errc::usage, "unknown budget name: " + budget_name + " (use small|medium)");
  if (suite != "all" && suite != "reductions" && suite != "schemes" && suite != "mixed" &&
      suite != "kernels")
    raise(Errc::usage, "unknown suite: " + suite);
  std::vector<VerificationReport> reports;
  for (const auto& entry : suite_entries()) {
    if (suite != "all" && entry.suite != suite) continue;
    reports.push_back(entry.run(level));
  }
  return reports;
}

std::string suite_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    arr.push_back(nlohmann::json::parse(r.to_json()));
    all_pass = all_pass && r.pass();
  }
  nlohmann::json j;
  j["reports"] = arr;
  j["all_pass"] = all_pass;
  return j.dump(2);
}

}  // namespace cplc
