#pragma once

#include <map>
#include <optional>
#include <string>

namespace typekg {

// Flat key=value text file. `#` comment lines and blank lines are skipped,
// whitespace around keys and values is trimmed, later keys override earlier
// ones. Used for dataset manifests and run configurations.
class KvConfig {
 public:
  static KvConfig from_file(const std::string& path);
  static KvConfig from_string(const std::string& text, const std::string& where = "<string>");

  std::optional<std::string> get(const std::string& key) const;
  const std::string& require(const std::string& key) const;

  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string where_;
};

}  // namespace typekg
