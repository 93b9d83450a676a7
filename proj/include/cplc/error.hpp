#pragma once

#include <stdexcept>
#include <string>

namespace cplc {

enum class Errc {
  malformed_pair,
  malformed_instance,
  scale_exceeded,
  overflow,
  degree_cap,
  param_mismatch,
  out_of_table,
  oracle_timeout,
  incompatible_endpoints,
  missing_table_entry,
  missing_slice_poly,
  source_shape_mismatch,
  length_audit_failure,
  invalid_query_set,
  checksum_mismatch,
  io_error,
  usage,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace cplc
