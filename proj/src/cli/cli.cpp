#include "cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <thread>

#include "cli/commands.hpp"
#include "cli/common.hpp"
#include "ndde/io.hpp"

namespace ndde::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_plain(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

json parse_value(const std::string& raw, ValueKind kind, const std::string& key) {
  try {
    switch (kind) {
      case ValueKind::number: return parse_scalar(raw);
      case ValueKind::integer: {
        const double v = parse_plain(trim(raw));
        if (v != std::floor(v)) throw ConfigError("expected an integer");
        return static_cast<long long>(v);
      }
      case ValueKind::text: return raw;
      case ValueKind::vector: return to_json(parse_vec(raw));
    }
  } catch (const ConfigError& e) {
    throw ConfigError("--" + key + ": " + e.what());
  }
  return nullptr;
}

}  // namespace

double parse_scalar(const std::string& text) {
  std::string s = trim(text);
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return parse_plain(s);
  std::string coef = trim(s.substr(0, pos));
  std::string rest = trim(s.substr(pos + 2));
  if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
  double c = 1.0;
  if (coef == "-")
    c = -1.0;
  else if (coef == "+" || coef.empty())
    c = 1.0;
  else
    c = parse_plain(coef);
  double d = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("bad multiple of pi: '" + text + "'");
    d = parse_plain(trim(rest.substr(1)));
  }
  return c * std::numbers::pi / d;
}

Vec3 parse_vec(const std::string& text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(parse_scalar(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("vector needs 2 or 3 components: '" + text + "'");
  return {parts[0], parts[1], parts.size() == 3 ? parts[2] : 0.0};
}

ConfigOptions::ConfigOptions(CLI::App* app) : app_(app) {
  app_->add_option("--config", config_path_, "JSON config file; flags override its values");
}

void ConfigOptions::add(const std::string& key, ValueKind kind, const json& default_value, const std::string& help) {
  auto e = std::make_unique<Entry>();
  e->key = key;
  e->kind = kind;
  e->default_value = default_value;
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  std::string text = help;
  if (!default_value.is_null()) text += " (default: " + default_value.dump() + ")";
  e->option = app_->add_option("--" + flag, e->raw, text);
  if (kind == ValueKind::number || kind == ValueKind::vector) e->option->allow_extra_args(false);
  entries_.push_back(std::move(e));
}

void ConfigOptions::add_optional(const std::string& key, ValueKind kind, const std::string& help) {
  add(key, kind, nullptr, help);
}

json ConfigOptions::resolve() const {
  json cfg = json::object();
  for (const auto& e : entries_)
    if (!e->default_value.is_null()) cfg[e->key] = e->default_value;
  if (!config_path_.empty()) {
    std::ifstream in(config_path_);
    if (!in) throw ConfigError("cannot open config file " + config_path_);
    json file;
    try {
      in >> file;
    } catch (const json::exception& ex) {
      throw ConfigError("config file is not valid JSON: " + std::string(ex.what()));
    }
    if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
      const bool known = std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e->key == it.key(); });
      if (!known) throw ConfigError("unknown config key '" + it.key() + "'");
      cfg[it.key()] = it.value();
    }
  }
  for (const auto& e : entries_)
    if (e->option->count() > 0) cfg[e->key] = parse_value(e->raw, e->kind, e->key);
  return cfg;
}

double get_number(const json& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) throw ConfigError("missing value for '" + key + "'");
  if (it->is_string()) return parse_scalar(it->get<std::string>());
  if (!it->is_number()) throw ConfigError("'" + key + "' must be a number");
  return it->get<double>();
}

long long get_int(const json& cfg, const std::string& key) {
  const double v = get_number(cfg, key);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError("'" + key + "' must be an integer");
  return static_cast<long long>(v);
}

std::string get_text(const json& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end() || !it->is_string()) throw ConfigError("'" + key + "' must be a string");
  return it->get<std::string>();
}

Vec3 get_vec(const json& cfg, const std::string& key) {
  const auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) throw ConfigError("missing value for '" + key + "'");
  if (it->is_string()) return parse_vec(it->get<std::string>());
  if (!it->is_array() || it->size() < 2 || it->size() > 3) throw ConfigError("'" + key + "' must be a 2- or 3-vector");
  Vec3 v;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& c = (*it)[i];
    v[static_cast<int>(i)] = c.is_string() ? parse_scalar(c.get<std::string>()) : c.get<double>();
  }
  return v;
}

json metadata(const std::string& command, const json& config) {
  return {{"tool", "ndde"}, {"version", NDDE_VERSION}, {"command", command}, {"config", config}};
}

OutputSink::OutputSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
  if (path != "-") {
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw ConfigError("cannot open output file " + path);
    file_ = std::move(f);
    stream_ = file_.get();
  }
}

std::ostream& OutputSink::stream() { return *stream_; }
void OutputSink::flush() { stream_->flush(); }

void write_csv_header(std::ostream& os, const json& meta, const std::vector<std::string>& columns) {
  os << "# " << meta.dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << format_double(values[i]);
  os << '\n';
}

unsigned resolve_workers(long long requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("NDDE_NUM_WORKERS")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError("NDDE_NUM_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"State-dependent neutral delay electrodynamics toolkit", "ndde"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("ndde ") + NDDE_VERSION);
  std::vector<std::unique_ptr<Command>> commands;
  register_commands(app, commands);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& v) {
    out << v.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const auto& c : commands)
      if (c->app->parsed()) failing = c->app;
    err << failing->help();
    return kExitConfig;
  }

  for (const auto& c : commands) {
    if (!c->app->parsed() || c->app->get_subcommands().size() > 0) continue;
    try {
      const json cfg = c->options->resolve();
      return c->execute(cfg, out, err);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const ArgumentError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const Error& e) {
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  err << app.help();
  return kExitConfig;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ndde::cli
