#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "fracstab/errors.hpp"

namespace fracstab::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string RunManifest::to_json() const {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = kToolVersion;
  j["input"] = {{"path", input_path}, {"sha256", input_digest}};
  j["config"] = config;
  j["outputs"] = outputs;
  j["elapsed_seconds"] = elapsed;
  return j.dump(2) + "\n";
}

void write_output(const std::filesystem::path& dir, const std::string& name, const std::string& text,
                  RunManifest& manifest) {
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("cannot write '" + path.string() + "'");
  manifest.outputs.push_back(name);
}

}  // namespace fracstab::cli
