#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cplc/artifact_io.hpp"
#include "cplc/formats.hpp"
#include "cplc/kernel.hpp"
#include "cplc/verify.hpp"

namespace py = pybind11;
using namespace cplc;

namespace {

BitStr bits(const std::string& s) { return BitStr::from_text(s); }

CompiledArtifact artifact_from_bytes(const py::bytes& data) {
  std::string raw = data;
  return deserialize_artifact(std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

py::bytes artifact_to_bytes(const CompiledArtifact& art) {
  auto v = serialize_artifact(art);
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

}  // namespace

PYBIND11_MODULE(pycompilance, m) {
  m.doc() = "compilance workbench: offline compilation vs online membership queries";

  py::register_exception<Error>(m, "CompilanceError");

  // core string substrate
  m.def("encode_unary", [](std::uint64_t n) { return encode_unary(n).text(); });
  m.def("encode_pair", [](const std::string& x, const std::string& y) {
    return encode_pair(bits(x), bits(y)).text();
  });
  m.def("decode_pair", [](const std::string& s) {
    auto [x, y] = decode_pair(bits(s));
    return py::make_tuple(x.text(), y.text());
  });
  m.def("apply_param", [](const std::string& id, const std::string& x) {
    return apply_param(id, bits(x)).text();
  });
  m.def("param_ids", &param_ids);

  // problems
  m.def("problem_ids", &problem_ids);
  m.def("decide",
        [](const std::string& pid, const std::string& x) { return decide(pid, bits(x)); });
  m.def("validate",
        [](const std::string& pid, const std::string& x) { return validate(pid, bits(x)); });
  m.def("enumerate_instances",
        [](const std::string& pid, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
          std::vector<std::string> out;
          enumerate_instances(pid, Budget{a, b, c},
                              [&](const BitStr& x) { out.push_back(x.text()); });
          return out;
        },
        py::arg("problem"), py::arg("a"), py::arg("b") = 0, py::arg("c") = 0);
  m.def("parse_instance_text",
        [](const std::string& pid, const std::string& fmt, const std::string& text) {
          return parse_instance_text(pid, parse_format_name(fmt), text).text();
        });
  m.def("render_instance_text",
        [](const std::string& pid, const std::string& fmt, const std::string& x) {
          return render_instance_text(pid, parse_format_name(fmt), bits(x));
        });

  // schemes and artifacts
  m.def("scheme_ids", &scheme_ids);
  m.def("compile_artifact",
        [](const std::string& scheme_id, const std::string& param, const std::string& mode) {
          const Scheme& s = scheme(scheme_id);
          CompileMode cm = s.direct_output ? CompileMode::direct : parse_compile_mode(mode);
          return artifact_to_bytes(compile_artifact(s, bits(param), cm));
        },
        py::arg("scheme"), py::arg("param"), py::arg("mode") = "sparse");
  m.def("query_compiled", [](const py::bytes& artifact, const std::string& x) {
    return query_compiled(artifact_from_bytes(artifact), bits(x));
  });
  m.def("save_artifact", [](const py::bytes& artifact, const std::string& path) {
    save_artifact(artifact_from_bytes(artifact), path);
  });
  m.def("load_artifact",
        [](const std::string& path) { return artifact_to_bytes(load_artifact(path)); });

  // reductions
  m.def("reduction_ids", &reduction_ids);
  m.def("apply_reduction", [](const std::string& id, const std::string& x) {
    ApplyResult r = apply_reduction(builtin_reduction(id), bits(x));
    return py::make_tuple(r.image.text(), r.contract_b_held);
  });
  m.def("kernelize_hitting_set", [](const std::string& x) {
    return kernelize_hitting_set(Hypergraph::decode(bits(x))).encode().text();
  });

  // verification
  m.def("verify_reduction",
        [](const std::string& id, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
          return verify_reduction(builtin_reduction(id), Budget{a, b, c}).to_json();
        },
        py::arg("reduction"), py::arg("a"), py::arg("b") = 0, py::arg("c") = 0);
  m.def("verify_scheme",
        [](const std::string& id, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
          return verify_scheme(scheme(id), Budget{a, b, c}).to_json();
        },
        py::arg("scheme"), py::arg("a"), py::arg("b") = 0, py::arg("c") = 0);
  m.def("run_suite", [](const std::string& suite, const std::string& budget) {
    return suite_to_json(run_suite(suite, budget));
  });
}
