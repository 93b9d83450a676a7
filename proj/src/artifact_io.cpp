#include "cplc/artifact_io.hpp"

#include <fstream>

#include <zlib.h>

namespace cplc {

namespace {

constexpr char kMagic[4] = {'C', 'P', 'L', 'C'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}
void put_bits(std::vector<std::uint8_t>& out, const BitStr& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  PackedBits p = PackedBits::from_bitstr(s);
  out.insert(out.end(), p.bytes.begin(), p.bytes.end());
}

struct ByteReader {
  const std::vector<std::uint8_t>& data;
  std::size_t pos = 0;

  std::uint8_t u8() {
    if (pos + 1 > data.size()) raise(Errc::io_error, "truncated artifact");
    return data[pos++];
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    if (pos + n > data.size()) raise(Errc::io_error, "truncated artifact string");
    std::string s(data.begin() + pos, data.begin() + pos + n);
    pos += n;
    return s;
  }
  BitStr bits() {
    std::uint32_t n = u32();
    std::size_t bytes = (static_cast<std::size_t>(n) + 7) / 8;
    if (pos + bytes > data.size()) raise(Errc::io_error, "truncated artifact bits");
    PackedBits p;
    p.bytes.assign(data.begin() + pos, data.begin() + pos + bytes);
    p.count = n;
    pos += bytes;
    return p.to_bitstr();
  }
  std::vector<std::uint8_t> raw(std::size_t n) {
    if (pos + n > data.size()) raise(Errc::io_error, "truncated artifact payload");
    std::vector<std::uint8_t> out(data.begin() + pos, data.begin() + pos + n);
    pos += n;
    return out;
  }
};

}  // namespace

std::vector<std::uint8_t> serialize_artifact(const CompiledArtifact& artifact) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  put_string(out, artifact.problem_id);
  put_string(out, artifact.param_id);
  put_string(out, artifact.scheme_id);
  put_bits(out, artifact.param_value);
  const auto& coeffs = artifact.declared_poly.coeffs();
  put_u32(out, static_cast<std::uint32_t>(coeffs.size()));
  for (std::uint64_t c : coeffs) put_u64(out, c);
  out.push_back(static_cast<std::uint8_t>(artifact.kind));
  auto payload = payload_bytes(artifact);
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  std::uint32_t crc =
      static_cast<std::uint32_t>(crc32(0L, out.data(), static_cast<uInt>(out.size())));
  put_u32(out, crc);
  return out;
}

CompiledArtifact deserialize_artifact(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 9) raise(Errc::io_error, "artifact too short");
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  std::uint32_t actual = static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
  if (stored != actual) raise(Errc::checksum_mismatch, "artifact CRC32 mismatch");

  ByteReader r{bytes};
  for (char m : kMagic)
    if (r.u8() != static_cast<std::uint8_t>(m))
      raise(Errc::io_error, "bad artifact magic (want CPLC)");
  std::uint8_t version = r.u8();
  if (version != kVersion)
    raise(Errc::io_error, "unsupported artifact version " + std::to_string(version));

  CompiledArtifact art;
  art.problem_id = r.str();
  art.param_id = r.str();
  art.scheme_id = r.str();
  art.param_value = r.bits();
  std::uint32_t ncoeff = r.u32();
  std::vector<std::uint64_t> coeffs;
  for (std::uint32_t i = 0; i < ncoeff; ++i) coeffs.push_back(r.u64());
  art.declared_poly = PolyNat(coeffs);
  std::uint8_t kind = r.u8();
  if (kind > 3) raise(Errc::io_error, "unknown payload kind " + std::to_string(kind));
  art.kind = static_cast<PayloadKind>(kind);
  std::uint32_t payload_len = r.u32();
  auto payload = r.raw(payload_len);

  ByteReader pr{payload};
  switch (art.kind) {
    case PayloadKind::chop_literal: {
      ChopTableLiteral t;
      t.magnitude = pr.u32();
      std::uint64_t count = pr.u64();
      t.bits.count = count;
      t.bits.bytes = pr.raw((count + 7) / 8);
      t.compiled = pr.bits();
      art.payload = std::move(t);
      break;
    }
    case PayloadKind::chop_sparse:
    case PayloadKind::kernel_cache: {
      ChopTableSparse t;
      t.magnitude = pr.u64();
      std::uint64_t count = pr.u64();
      t.entries.reserve(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        SparseEntry e;
        e.key_hash = pr.u64();
        e.bit = pr.u8();
        t.entries.push_back(e);
      }
      t.compiled = pr.bits();
      art.payload = std::move(t);
      break;
    }
    case PayloadKind::normalizer: {
      DirectPayload t;
      t.compiled = pr.bits();
      art.payload = std::move(t);
      break;
    }
  }
  if (pr.pos != payload.size()) raise(Errc::io_error, "trailing payload bytes");
  art.checksum = payload_checksum(art);
  return art;
}

void save_artifact(const CompiledArtifact& artifact, const std::string& path) {
  auto bytes = serialize_artifact(artifact);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) raise(Errc::io_error, "cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) raise(Errc::io_error, "write failed for " + path);
}

CompiledArtifact load_artifact(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) raise(Errc::io_error, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return deserialize_artifact(bytes);
}

}  // namespace cplc
