#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "cxnprobe/lexicon.hpp"

#ifndef CXNPROBE_DATA_DIR
#error "CXNPROBE_DATA_DIR must be defined"
#endif

namespace fixtures {

inline std::filesystem::path data_dir() { return CXNPROBE_DATA_DIR; }

inline const cxnprobe::Lexicon& lexicon() {
  static const cxnprobe::Lexicon lex = cxnprobe::load_lexicon(data_dir() / "lexicon.json");
  return lex;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cxnprobe-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
