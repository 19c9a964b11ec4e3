#ifndef EBMEANS_TOOLS_MANIFEST_HPP
#define EBMEANS_TOOLS_MANIFEST_HPP

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ebmeans::tools {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof(b), "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

// Serialized next to every output so a run can be reproduced exactly from
// the recorded configuration, seeds, and input digests.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::vector<std::string> input_paths;

  void write(const std::filesystem::path& dir) const {
    nlohmann::json j;
    j["tool"] = "ebmeans";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    if (!seeds.empty()) j["seeds"] = seeds;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& path : input_paths) {
      inputs.push_back({{"path", path}, {"sha256", sha256_file(path)}});
    }
    j["inputs"] = inputs;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) {
      throw std::invalid_argument("cannot write manifest in " + dir.string());
    }
    out << j.dump(2) << '\n';
  }
};

}  // namespace ebmeans::tools

#endif
