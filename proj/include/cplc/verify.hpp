#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cplc/mixed.hpp"
#include "cplc/problems.hpp"
#include "cplc/reductions.hpp"
#include "cplc/schemes.hpp"

namespace cplc {

inline constexpr std::uint64_t kVerifySeed = 0xC0DEC;
inline constexpr std::size_t kFailureCaptureBytes = 4096;
inline constexpr std::size_t kMaxRecordedFailures = 10;

struct Failure {
  BitStr instance;  // captured verbatim up to 4 KiB
  std::string contract;
  std::string expected;
  std::string got;
};

enum class VerifyStatus { pass, fail, scale_exceeded };
std::string verify_status_name(VerifyStatus s);

struct VerificationReport {
  std::string subject_id;
  std::string budget_desc;
  std::uint64_t instances_checked = 0;
  std::vector<Failure> failures;  // canonically sorted, first 10 kept
  double wall_ms = 0.0;
  VerifyStatus status = VerifyStatus::fail;

  bool pass() const { return status == VerifyStatus::pass; }
  std::string to_json() const;  // {subject, budget, checked, failures[], status, wall_ms}
};

/// Checks both reduction contracts and the s-map length audit on every
/// enumerated source instance.
VerificationReport verify_reduction(const Reduction& r, const Budget& budget);

/// Checks decision agreement with the oracles, the offline length audit and
/// (when claimed) the chopped output bound.
VerificationReport verify_scheme(const Scheme& w, const Budget& budget);

/// Replays every covered instance against the compiled artifact.
VerificationReport verify_artifact(const Scheme& s, const CompiledArtifact& artifact,
                                   const Budget& budget);

/// Generic declared-length audit of a string function over a generator.
VerificationReport audit_lengths(const std::string& subject_id,
                                 const std::function<BitStr(const BitStr&)>& fn,
                                 const PolyNat& declared,
                                 const std::string& generator_problem, const Budget& budget);

/// (x,y) in B  <=>  (f(x, un(|y|)), y) in target, over B's grid.
VerificationReport verify_mixed_witness(const PairLanguage& B, const MixedCWitness& w,
                                        const Budget& budget);

// ----------------------------------------------------------------- mutation

Reduction mutate_reduction_output(const Reduction& r, std::size_t bit);
Scheme mutate_scheme_output(const Scheme& s, std::size_t bit);

/// True when some single-bit output mutation makes the subject fail its
/// verification (no vacuous suites).
bool mutation_sensitive_reduction(const Reduction& r, const Budget& budget);
bool mutation_sensitive_scheme(const Scheme& s, const Budget& budget);

// ----------------------------------------------------------------- timing

struct TimingReport {
  double baseline_ns = 0.0;  // median per query
  double compiled_ns = 0.0;  // median per query
  double compile_ms = 0.0;
  double speedup = 0.0;
  std::uint64_t query_count = 0;
  bool answers_agree = false;
  std::string to_json() const;
};

/// Median per-query brute-force vs compiled-path times over the query set
/// (>= 30 queries, all covered by the artifact, 3 warmup rounds excluded).
TimingReport differential_speed(const std::string& problem_id, const Scheme& s,
                                const CompiledArtifact& artifact,
                                const std::vector<BitStr>& queries, double compile_ms);

// ----------------------------------------------------------------- suites

/// Named budget levels: "small" and "medium".
bool known_budget_name(const std::string& name);

/// Runs a verify suite ("all", "reductions", "schemes", "mixed", "kernels")
/// at a named budget; one report per subject.
std::vector<VerificationReport> run_suite(const std::string& suite,
                                          const std::string& budget_name);

std::string suite_to_json(const std::vector<VerificationReport>& reports);

/// Worker count: COMPILANCE_THREADS when set, else hardware concurrency
/// (capped at 8).
unsigned worker_count();

}  // namespace cplc
