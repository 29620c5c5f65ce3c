#include "vetbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "text.hpp"
#include "vetbench/error.hpp"
#include "vetbench/event.hpp"

namespace vetbench {

namespace {

void check_keys(const toml::table& t, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  for (const auto& [key, _] : t) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key.str() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + std::string(key.str()) + "'");
  }
}

std::string required_string(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = t[key].value<std::string>();
  if (!v) throw ConfigError(where + ": missing string '" + std::string(key) + "'");
  return *v;
}

std::vector<std::string> string_list(const toml::table& t, std::string_view key,
                                     const std::string& where) {
  std::vector<std::string> out;
  const auto* node = t.get(key);
  if (node == nullptr) return out;
  const auto* arr = node->as_array();
  if (arr == nullptr) throw ConfigError(where + ": '" + std::string(key) + "' must be an array");
  for (const auto& item : *arr) {
    auto s = item.value<std::string>();
    if (!s) throw ConfigError(where + ": '" + std::string(key) + "' must hold strings");
    out.push_back(*s);
  }
  return out;
}

Value value_of(const toml::node& n, const std::string& where) {
  if (n.is_integer()) return Value(*n.value<std::int64_t>());
  if (n.is_string()) return Value(*n.value<std::string>());
  throw ConfigError(where + ": values must be strings or integers");
}

const toml::array* tables(const toml::table& root, std::string_view key) {
  const auto* node = root.get(key);
  if (node == nullptr) return nullptr;
  const auto* arr = node->as_array();
  if (arr == nullptr || !arr->is_array_of_tables()) {
    throw ConfigError("'" + std::string(key) + "' must be an array of tables");
  }
  return arr;
}

DeviceSpec parse_device(const toml::table& t, std::size_t index) {
  std::string where = "device #" + std::to_string(index + 1);
  check_keys(t, {"id", "kind", "domain", "range", "initial", "commands", "tags"}, where);
  DeviceSpec d;
  d.id = required_string(t, "id", where);
  where = "device " + d.id;

  auto kind = parse_device_kind(t["kind"].value_or(std::string("actuator")));
  if (!kind) throw ConfigError(where + ": unknown kind");
  d.kind = *kind;

  const bool has_domain = t.contains("domain");
  const bool has_range = t.contains("range");
  if (has_domain == has_range) {
    throw ConfigError(where + ": exactly one of 'domain' and 'range' is required");
  }
  if (has_domain) {
    d.domain = Domain::symbols(string_list(t, "domain", where));
  } else {
    const auto* arr = t["range"].as_array();
    if (arr == nullptr || arr->size() != 2 || !(*arr)[0].is_integer() || !(*arr)[1].is_integer()) {
      throw ConfigError(where + ": 'range' must be [lo, hi]");
    }
    d.domain = Domain::range(*(*arr)[0].value<std::int64_t>(), *(*arr)[1].value<std::int64_t>());
  }

  if (const auto* init = t.get("initial")) {
    d.initial = value_of(*init, where);
  } else if (!d.domain.empty()) {
    d.initial = d.domain.at(0);
  }

  for (const auto& entry : string_list(t, "commands", where)) {
    auto colon = entry.find(':');
    auto target = colon == std::string::npos ? std::nullopt
                                             : Value::parse(detail::trim(entry.substr(colon + 1)));
    if (!target) throw ConfigError(where + ": command '" + entry + "' must be Name:VALUE");
    d.commands[std::string(detail::trim(entry.substr(0, colon)))] = *target;
  }

  if (t.contains("tags")) {
    for (const auto& tag : string_list(t, "tags", where)) {
      if (tag == "trusted") d.tags.trusted = true;
      else if (tag == "untrusted") d.tags.untrusted = true;
      else if (tag == "secure") d.tags.secure = true;
      else if (tag == "insecure") d.tags.insecure = true;
      else throw ConfigError(where + ": unknown tag '" + tag + "'");
    }
  } else {
    d.tags = DeviceTags::physical();
  }
  return d;
}

AppSource parse_app(const toml::table& t, std::size_t index) {
  std::string where = "app #" + std::to_string(index + 1);
  check_keys(t, {"id", "trigger", "condition", "actions"}, where);
  AppSource a;
  a.id = required_string(t, "id", where);
  where = "app " + a.id;
  a.trigger = required_string(t, "trigger", where);
  a.condition = t["condition"].value_or(std::string());
  a.actions = string_list(t, "actions", where);
  return a;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

DeviceRegistry TestbedConfig::registry() const {
  DeviceRegistry r;
  for (const auto& d : devices) r.add(d);
  return r;
}

std::vector<App> TestbedConfig::compiled_apps() const {
  std::vector<App> out;
  for (const auto& src : apps) {
    try {
      App app;
      app.id = src.id;
      app.trigger = Trigger::parse(src.trigger);
      if (!detail::trim(src.condition).empty()) app.condition = parse_condition(src.condition);
      for (const auto& text : src.actions) {
        auto e = Event::parse(text);
        if (!e.is_command()) throw ValidationError("action '" + text + "' is not Device.Command");
        app.actions.push_back(std::get<ActionCommand>(e.body));
      }
      out.push_back(std::move(app));
    } catch (const ParseError& e) {
      throw ValidationError("app " + src.id + ": " + e.what());
    }
  }
  return out;
}

std::vector<PolicySpec> TestbedConfig::compiled_policies() const {
  std::vector<PolicySpec> out;
  std::set<std::string> ids;
  for (const auto& line : policies) {
    try {
      out.push_back(parse_policy_line(line));
    } catch (const ParseError& e) {
      throw ValidationError("policy '" + line + "': " + e.what());
    }
    if (!ids.insert(out.back().id).second) {
      throw ValidationError("duplicate policy id " + out.back().id);
    }
  }
  return out;
}

void TestbedConfig::validate() const {
  try {
    if (chain_limit == 0) throw ValidationError("chain_limit must be positive");
    const auto reg = registry();
    std::set<std::string> ids;
    for (const auto& app : compiled_apps()) {
      if (!ids.insert(app.id).second) throw ValidationError("duplicate app id " + app.id);
      check_app(app, reg);
    }
    for (const auto& p : compiled_policies()) check_policy(p, reg);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string(e.what()));
  }
}

TestbedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ParseError(std::string(e.description()), e.source().begin.line,
                     e.source().begin.column);
  }
  check_keys(root,
             {"name", "defense", "chain_limit", "seed", "fail_closed", "policy_file", "device",
              "app", "policy"},
             "config");

  TestbedConfig c;
  c.name = root["name"].value_or(std::string("testbed"));
  if (auto d = root["defense"].value<std::string>()) {
    auto kind = parse_defense_kind(*d);
    if (!kind) throw ConfigError("config: unknown defense '" + *d + "'");
    c.defense = *kind;
  }
  if (auto n = root["chain_limit"].value<std::int64_t>()) {
    if (*n <= 0) throw ConfigError("config: chain_limit must be positive");
    c.chain_limit = static_cast<std::size_t>(*n);
  }
  if (auto s = root["seed"].value<std::int64_t>()) c.seed = static_cast<std::uint64_t>(*s);
  c.fail_closed = root["fail_closed"].value_or(false);

  if (const auto* arr = tables(root, "device")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      c.devices.push_back(parse_device(*(*arr)[i].as_table(), i));
    }
  }
  if (const auto* arr = tables(root, "app")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      c.apps.push_back(parse_app(*(*arr)[i].as_table(), i));
    }
  }
  if (const auto* arr = tables(root, "policy")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& t = *(*arr)[i].as_table();
      const std::string where = "policy #" + std::to_string(i + 1);
      check_keys(t, {"text"}, where);
      c.policies.push_back(required_string(t, "text", where));
    }
  }
  if (auto file = root["policy_file"].value<std::string>()) {
    const auto path = base_dir / *file;
    const auto content = read_file(path);
    try {
      for (const auto& p : parse_policy_file(content)) c.policies.push_back(p.to_string());
    } catch (const ParseError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }

  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

TestbedConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(read_file(path), path.parent_path());
  } catch (const ParseError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const TestbedConfig& config) {
  auto to_node = [](const Value& v, auto&& insert) {
    if (v.is_integer()) insert(v.as_integer());
    else insert(v.as_symbol());
  };

  toml::table root;
  root.insert("name", config.name);
  root.insert("defense", std::string(to_string(config.defense)));
  root.insert("chain_limit", static_cast<std::int64_t>(config.chain_limit));
  if (config.seed) root.insert("seed", static_cast<std::int64_t>(*config.seed));
  root.insert("fail_closed", config.fail_closed);

  toml::array devices;
  for (const auto& d : config.devices) {
    toml::table t;
    t.insert("id", d.id);
    t.insert("kind", std::string(to_string(d.kind)));
    if (d.domain.is_integer()) {
      t.insert("range", toml::array{d.domain.lo(), d.domain.hi()});
    } else {
      toml::array syms;
      for (const auto& s : d.domain.symbol_names()) syms.push_back(s);
      t.insert("domain", std::move(syms));
    }
    to_node(d.initial, [&](auto v) { t.insert("initial", v); });
    if (!d.commands.empty()) {
      toml::array cmds;
      for (const auto& [name, target] : d.commands) cmds.push_back(name + ":" + target.to_string());
      t.insert("commands", std::move(cmds));
    }
    toml::array tags;
    for (const auto& n : d.tags.names()) tags.push_back(n);
    t.insert("tags", std::move(tags));
    devices.push_back(std::move(t));
  }
  if (!devices.empty()) root.insert("device", std::move(devices));

  toml::array apps;
  for (const auto& a : config.apps) {
    toml::table t;
    t.insert("id", a.id);
    t.insert("trigger", a.trigger);
    if (!a.condition.empty()) t.insert("condition", a.condition);
    toml::array actions;
    for (const auto& act : a.actions) actions.push_back(act);
    t.insert("actions", std::move(actions));
    apps.push_back(std::move(t));
  }
  if (!apps.empty()) root.insert("app", std::move(apps));

  toml::array policies;
  for (const auto& p : config.policies) policies.push_back(toml::table{{"text", p}});
  if (!policies.empty()) root.insert("policy", std::move(policies));

  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

void save_config(const TestbedConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << serialize_config(config);
}

}  // namespace vetbench
