// Report serialization: JSON documents, per-k CSV rows, and the stable
// content hash used by the determinism checks.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "normsel/complexity.hpp"
#include "normsel/errors.hpp"
#include "normsel/normality.hpp"

namespace normsel {

using json = nlohmann::json;

inline json to_json(const NormalityReport& r) {
  json per_k = json::array();
  for (const auto& e : r.per_k) {
    per_k.push_back({{"k", e.k},
                     {"defect", e.defect.get_d()},
                     {"defect_exact", e.defect.get_str()},
                     {"entropy", e.entropy},
                     {"subwords", e.subwords},
                     {"reliable", e.reliable}});
  }
  return {{"n", r.n},
          {"k_max", r.k_max},
          {"defect", r.defect.get_d()},
          {"defect_exact", r.defect.get_str()},
          {"per_k", per_k}};
}

inline json to_json(const ComplexityEstimate& e) {
  return {{"method", e.method},
          {"bits_total", e.bits_total},
          {"rate", e.rate},
          {"order", e.order},
          {"detail", e.detail}};
}

// One row per k: k, defect_k, h_k, p_k, reliable-flag.
inline std::string normality_csv(const NormalityReport& r) {
  std::ostringstream out;
  out << "k,defect_k,h_k,p_k,reliable\n";
  for (const auto& e : r.per_k)
    out << e.k << ',' << e.defect.get_d() << ',' << e.entropy << ',' << e.subwords << ','
        << (e.reliable ? 1 : 0) << '\n';
  return out.str();
}

// FNV-1a over the canonical dump; stable across reruns by construction.
inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

// Hash of everything except the provenance block (timestamps live there).
inline std::string report_hash(json report) {
  report.erase("provenance");
  report.erase("report_hash");
  return hex64(fnv1a64(report.dump()));
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace normsel
