#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <ctime>
#include <fstream>
#include <memory>

#include "jnr/types.hpp"

namespace jnr::cli {

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 initialisation failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);

  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

RunManifest::RunManifest(std::string command, nlohmann::ordered_json config, std::uint64_t seed)
    : command_(std::move(command)),
      config_(std::move(config)),
      seed_(seed),
      started_wall_(std::chrono::system_clock::now()),
      started_(std::chrono::steady_clock::now()) {}

void RunManifest::AddInput(const std::filesystem::path& path) { inputs_.push_back(path); }
void RunManifest::AddOutput(const std::filesystem::path& path) { outputs_.push_back(path); }

void RunManifest::Write(const std::filesystem::path& path) const {
  auto files = [](const std::vector<std::filesystem::path>& paths) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : paths) {
      arr.push_back({{"path", p.string()}, {"bytes", std::filesystem::file_size(p)}, {"sha256", Sha256File(p)}});
    }
    return arr;
  };

  const std::time_t t = std::chrono::system_clock::to_time_t(started_wall_);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::ordered_json m;
  m["tool"] = "jnr";
  m["version"] = JNR_VERSION;
  m["command"] = command_;
  m["seed"] = seed_;
  m["config"] = config_;
  m["inputs"] = files(inputs_);
  m["outputs"] = files(outputs_);
  m["timing"] = {{"started_utc", stamp},
                 {"wall_seconds",
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count()}};

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << m.dump(2) << '\n';
}

}  // namespace jnr::cli
