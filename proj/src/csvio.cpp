#include "softrec/csvio.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace softrec {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest::RunManifest(std::string subcommand) {
  entries_.emplace_back("tool", "softrec");
  entries_.emplace_back("version", kToolVersion);
  entries_.emplace_back("subcommand", std::move(subcommand));
  entries_.emplace_back("timestamp", utc_timestamp());
}

void RunManifest::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void RunManifest::add(const std::string& key, double value) { add(key, format_double(value)); }

void RunManifest::add(const std::string& key, long value) { add(key, std::to_string(value)); }

void RunManifest::add_seed(std::uint64_t master_seed) {
  add("seed", std::to_string(master_seed));
}

void RunManifest::write(std::ostream& os) const {
  for (const auto& [key, value] : entries_) os << "# " << key << "=" << value << "\n";
}

}  // namespace softrec
