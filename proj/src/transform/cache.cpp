#include <openssl/evp.h>
#include <unistd.h>

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <system_error>

#include "levy/error.hpp"
#include "levy/transform.hpp"

namespace levy {

namespace {

constexpr int kCacheVersion = 1;

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Every number of the payload, in file order, separated by '|' and ','.
std::string canonical(const std::vector<StableIndex>& chain, const ChebLogInterpolant& t) {
  std::string s = std::to_string(kCacheVersion) + "|";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(chain[i].num()) + "/" + std::to_string(chain[i].den());
  }
  s += "|" + shortest(t.u_lo()) + "|" + shortest(t.u_hi()) + "|";
  for (std::size_t i = 0; i < t.coeffs().size(); ++i) {
    if (i) s += ',';
    s += shortest(t.coeffs()[i]);
  }
  s += "|" + shortest(t.tail_exponent()) + "|" + shortest(t.origin_c()) + "|" +
       shortest(t.origin_rho());
  return s;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw CacheError("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace

void cache_save(const DensityHandle& d, const std::filesystem::path& path) {
  const auto table = d.table();
  if (!table) throw ConfigError("only tabulated densities can be cached");
  const auto& chain = d.chain();

  std::ostringstream os;
  os << "{\n  \"version\": " << kCacheVersion << ",\n  \"chain\": [";
  for (std::size_t i = 0; i < chain.size(); ++i)
    os << (i ? ", " : "") << "[" << chain[i].num() << ", " << chain[i].den() << "]";
  os << "],\n  \"u_lo\": " << shortest(table->u_lo())
     << ",\n  \"u_hi\": " << shortest(table->u_hi()) << ",\n  \"coeffs\": [";
  for (std::size_t i = 0; i < table->coeffs().size(); ++i)
    os << (i ? ", " : "") << shortest(table->coeffs()[i]);
  os << "],\n  \"tail_exponent\": " << shortest(table->tail_exponent())
     << ",\n  \"origin_c\": " << shortest(table->origin_c())
     << ",\n  \"origin_rho\": " << shortest(table->origin_rho())
     << ",\n  \"checksum\": \"" << sha256_hex(canonical(chain, *table)) << "\"\n}\n";

  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write " + tmp.string());
    out << os.str();
    out.flush();
    if (!out) throw CacheError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw CacheError("cannot move cache file into place at " + path.string());
  }
}

DensityHandle cache_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CacheError("malformed cache file " + path.string() + ": " + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version")) throw CacheError("missing version");
    if (j.at("version").get<int>() != kCacheVersion)
      throw CacheError("unsupported cache version " + j.at("version").dump());
    std::vector<StableIndex> chain;
    for (const auto& e : j.at("chain")) {
      if (!e.is_array() || e.size() != 2) throw CacheError("chain entries must be [l, k]");
      chain.emplace_back(e[0].get<long>(), e[1].get<long>());
    }
    auto table = std::make_shared<const ChebLogInterpolant>(
        j.at("u_lo").get<double>(), j.at("u_hi").get<double>(),
        j.at("coeffs").get<std::vector<double>>(), j.at("tail_exponent").get<double>(),
        j.at("origin_c").get<double>(), j.at("origin_rho").get<double>());
    const std::string want = j.at("checksum").get<std::string>();
    if (sha256_hex(canonical(chain, *table)) != want)
      throw CacheError("checksum mismatch in " + path.string());
    return DensityHandle::tabulated(std::move(chain), std::move(table));
  } catch (const CacheError&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheError("malformed cache file " + path.string() + ": " + e.what());
  }
}

}  // namespace levy
