#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cplc/bitstr.hpp"
#include "cplc/param.hpp"
#include "cplc/poly.hpp"
#include "cplc/problems.hpp"

namespace cplc {

inline constexpr std::uint64_t kPerStringOracleBudget = 1'000'000;
inline constexpr std::uint32_t kLiteralMagnitudeCap = 22;

enum class ClassClaim { polycomp, chopped, expcomp };

/// Which parameter values an artifact compiled at k can answer. Schemes with
/// a constant offline part (or a prefix-closed scaffold) accept any unary
/// parameter dominated by k; everything else requires equality.
enum class Coverage { exact, unary_dominated };

/// Offline/online split: g(x) = online(offline(kappa(x)), x) decided against
/// target_id. offline is computable and length-bounded (declared polynomial;
/// for expcomp claims the declared polynomial bounds log2 |c(k)|); online is
/// declared poly-time in its total input length.
struct Scheme {
  std::string id;
  std::string problem_id;
  std::string param_id;
  std::string target_id;
  ClassClaim claim = ClassClaim::polycomp;
  std::optional<PolyNat> chopped_bound;  // |g(x)| <= bound(|kappa(x)|)
  PolyNat offline_len_poly;
  PolyNat online_time_poly;
  bool direct_output = false;  // online emits the answer bit itself (target "first1")
  Coverage coverage = Coverage::exact;
  std::uint8_t sparse_kind = 1;  // payload kind used in sparse mode (1 sparse, 2 kernel cache)
  std::function<BitStr(const BitStr&)> offline;
  std::function<BitStr(const BitStr&, const BitStr&)> online;
  /// Enumerates every canonical target string the online map can produce for
  /// queries covered by parameter k (the sparse-mode key set).
  std::function<void(const BitStr&, const InstanceSink&)> sparse_keys;
  /// Set when the target language is constructed rather than registered.
  std::shared_ptr<const Problem> target_override;
  std::shared_ptr<std::atomic<std::uint64_t>> offline_calls =
      std::make_shared<std::atomic<std::uint64_t>>(0);

  BitStr run_offline(const BitStr& k) const {
    ++*offline_calls;
    return offline(k);
  }
  /// g(x) = online(offline(kappa(x)), x).
  BitStr map(const BitStr& x) const;
};

const Scheme& scheme(const std::string& id);
bool has_scheme(const std::string& id);
std::vector<std::string> scheme_ids();

/// The scheme's target language (registry problem or inline override).
const Problem& scheme_target(const Scheme& s);

// ---------------------------------------------------------------- artifacts

struct PackedBits {
  std::vector<std::uint8_t> bytes;
  std::uint64_t count = 0;

  bool get(std::uint64_t i) const { return (bytes[i >> 3] >> (i & 7)) & 1; }
  void push(bool b) {
    if ((count & 7) == 0) bytes.push_back(0);
    if (b) bytes.back() |= std::uint8_t(1u << (count & 7));
    ++count;
  }
  static PackedBits from_bitstr(const BitStr& s);
  BitStr to_bitstr() const;
};

struct ChopTableLiteral {
  std::uint32_t magnitude = 0;  // table covers Sigma^{<= magnitude}
  PackedBits bits;              // 2^{magnitude+1} - 1 membership bits, length-lex order
  BitStr compiled;              // the base scheme's offline part c(k)
};

struct SparseEntry {
  std::uint64_t key_hash;
  std::uint8_t bit;
};

struct ChopTableSparse {
  std::uint64_t magnitude = 0;  // length bound for online outputs
  std::vector<SparseEntry> entries;  // sorted by key_hash
  BitStr compiled;
};

struct DirectPayload {
  BitStr compiled;
};

enum class PayloadKind : std::uint8_t {
  chop_literal = 0,
  chop_sparse = 1,
  kernel_cache = 2,
  normalizer = 3,
};

struct CompiledArtifact {
  std::string problem_id;
  std::string param_id;
  std::string scheme_id;
  BitStr param_value;
  PolyNat declared_poly;
  PayloadKind kind = PayloadKind::chop_literal;
  std::variant<ChopTableLiteral, ChopTableSparse, DirectPayload> payload;
  std::uint32_t checksum = 0;  // CRC32 of the serialized payload
};

enum class CompileMode { literal, sparse, direct };

CompileMode parse_compile_mode(const std::string& name);

/// Builds the compiled artifact for parameter value k.
///   literal: the full membership bit-vector of the target over
///            Sigma^{<= bound(|k|)} plus c(k) plus k (the proof's c+).
///   sparse:  membership bits only for canonical instances reachable from
///            covered queries; everything else decides false by convention.
///   direct:  the offline string alone; online computes the answer bit.
/// Per-string target decisions are pre-metered against
/// kPerStringOracleBudget and abort compilation with OracleTimeout.
CompiledArtifact compile_artifact(const Scheme& s, const BitStr& k, CompileMode mode);

/// Answers a query from the artifact alone: evaluates the online map and
/// looks the output up in the table (or reads the answer bit). Never invokes
/// the target decider or the offline compiler. The first overload resolves
/// the scheme from the registry; the second serves constructed schemes.
bool query_compiled(const CompiledArtifact& artifact, const BitStr& x);
bool query_compiled(const Scheme& s, const CompiledArtifact& artifact, const BitStr& x);

/// Serialized payload bytes (also the checksum input).
std::vector<std::uint8_t> payload_bytes(const CompiledArtifact& artifact);
std::uint32_t payload_checksum(const CompiledArtifact& artifact);

bool artifact_covers(const CompiledArtifact& artifact, const BitStr& param_value);
bool artifact_covers(const Scheme& s, const CompiledArtifact& artifact,
                     const BitStr& param_value);

// ---------------------------------------------------------------- operations

/// chopped-PTIME = polycomp-PTIME, constructive direction: composes the
/// online map with the PTIME target decision, emitting "1" (in P) or "0"
/// (not in P) against the target {strings whose first bit is 1}. The
/// chopped bound becomes the constant 1.
Scheme normalize_to_chopped_ptime(const Scheme& s);

/// Wraps a polynomial kernelization K (answer-preserving self-reduction
/// with |K(x)| bounded by size_bound(|kappa(x)|)) as a chopped scheme:
/// empty offline part, online = K, target = the problem itself.
Scheme kernel_to_chopped(const std::string& id, const std::string& problem_id,
                         const std::string& param_id,
                         std::function<BitStr(const BitStr&)> kernelizer,
                         const PolyNat& size_bound);

/// The registered kernel-backed scheme for d-HITTING-SET ("hsD.pi2.kernel").
Scheme hitting_set_kernel_scheme(std::uint32_t d);

/// Pair language {(a,b) : online(a,b) in target} together with the compiler:
/// x in Q iff (offline(kappa(x)), x) lands in the pair language.
struct ParaWitness {
  std::string source_problem;
  std::function<BitStr(const BitStr&)> compile;
  std::function<bool(const BitStr&, const BitStr&)> pair_decide;
};
ParaWitness extract_para_witness(const Scheme& s);

/// Advice form of a len-parameterized chopped scheme: a(1^n) = offline(1^n),
/// P = {(d, x) : online(d, x) in target}.
struct AdviceWitness {
  std::function<BitStr(const BitStr&)> advice;  // unary length -> advice string
  std::function<bool(const BitStr&, const BitStr&)> pair_decide;
  PolyNat advice_len_poly;
};
AdviceWitness chopped_to_advice(const Scheme& s);

}  // namespace cplc
