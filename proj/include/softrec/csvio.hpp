#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace softrec {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal rendering that round-trips the double exactly.
std::string format_double(double v);

/// Run metadata emitted as "# key=value" comment lines at the top of every
/// CSV output.  The body below the header carries no timestamps, so
/// re-running with the header's parameters reproduces it byte for byte.
class RunManifest {
 public:
  RunManifest(std::string subcommand);

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
  void add_seed(std::uint64_t master_seed);

  void write(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace softrec
