#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndde/errors.hpp"
#include "ndde/vec3.hpp"

namespace ndde::cli {

using json = nlohmann::json;

// Config validation failure: exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueKind { number, integer, text, vector };

// Parses "1.5", "pi", "2pi", "-pi/2", "0.5*pi".
double parse_scalar(const std::string& text);
// Comma-separated scalars, 2 or 3 entries (z defaults to 0).
Vec3 parse_vec(const std::string& text);

// Flags registered against a JSON config. Resolution order: defaults, then the
// --config file, then flags given on the command line.
class ConfigOptions {
 public:
  explicit ConfigOptions(CLI::App* app);

  void add(const std::string& key, ValueKind kind, const json& default_value, const std::string& help);
  // Keys without a fixed default (filled later by the command).
  void add_optional(const std::string& key, ValueKind kind, const std::string& help);

  json resolve() const;

 private:
  struct Entry {
    std::string key;
    ValueKind kind;
    json default_value;
    CLI::Option* option = nullptr;
    std::string raw;
  };
  CLI::App* app_;
  std::string config_path_;
  std::vector<std::unique_ptr<Entry>> entries_;
};

// Typed getters with config-error reporting.
double get_number(const json& cfg, const std::string& key);
long long get_int(const json& cfg, const std::string& key);
std::string get_text(const json& cfg, const std::string& key);
Vec3 get_vec(const json& cfg, const std::string& key);

json metadata(const std::string& command, const json& config);

// Writes to `path` or to `out` when path is "-".
class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& fallback);
  std::ostream& stream();
  void flush();

 private:
  std::unique_ptr<std::ostream> file_;
  std::ostream* stream_;
};

void write_csv_header(std::ostream& os, const json& meta, const std::vector<std::string>& columns);
void write_csv_row(std::ostream& os, const std::vector<double>& values);

// Worker count: explicit flag > NDDE_NUM_WORKERS > hardware concurrency.
unsigned resolve_workers(long long requested);
// Runs job(i) for i in [0, n) on a pool; results are written by index.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job);

}  // namespace ndde::cli
