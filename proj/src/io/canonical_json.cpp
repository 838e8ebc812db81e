#include "twirlab/io/canonical_json.hpp"

#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include "twirlab/error.hpp"

namespace twirlab {

namespace {

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

bool all_scalars(const Json& j) {
  for (const auto& e : j)
    if (!is_scalar(e)) return false;
  return true;
}

void write(const Json& j, bool pretty, int indent, std::string& out);

void newline(bool pretty, int indent, std::string& out) {
  if (!pretty) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
}

void write_scalar(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case Json::value_t::number_float: out += format_number(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

void write(const Json& j, bool pretty, int indent, std::string& out) {
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    // nlohmann::json stores objects in a std::map: iteration is key-sorted.
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ',';
      first = false;
      newline(pretty, indent + 1, out);
      out += Json(key).dump();
      out += pretty ? ": " : ":";
      write(value, pretty, indent + 1, out);
    }
    newline(pretty, indent, out);
    out += '}';
    return;
  }
  if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool inline_array = all_scalars(j);
    out += '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += pretty && inline_array ? ", " : ",";
      first = false;
      if (!inline_array) newline(pretty, indent + 1, out);
      write(e, pretty, indent + 1, out);
    }
    if (!inline_array) newline(pretty, indent, out);
    out += ']';
    return;
  }
  write_scalar(j, out);
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "cannot serialize a non-finite number");
  if (v == 0.0) return "0";
  if (v == std::trunc(v) && std::abs(v) < 9007199254740992.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_json(const Json& j, bool pretty) {
  std::string out;
  write(j, pretty, 0, out);
  if (pretty) out += '\n';
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::Io, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace twirlab
