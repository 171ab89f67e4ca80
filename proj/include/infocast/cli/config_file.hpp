#pragma once

#include "infocast/engine/config.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace infocast::cli {

/// Config problem tied to one key (missing, unknown or unparsable).
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string &what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

using KeyValues = std::map<std::string, std::string>;

/// Flat `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Repeated keys are an error.
KeyValues parse_key_values(std::istream &in, const std::string &origin);
KeyValues read_key_values(const std::string &path);

/// Every key a run config accepts.
const std::vector<std::string> &config_keys();
bool is_config_key(const std::string &key);

/// Builds and validates a SimConfig. Unknown keys, missing required keys and
/// bad values raise ConfigError naming the key.
engine::SimConfig build_config(const KeyValues &kv);

/// Canonical key = value dump of every field, enough to rebuild the config.
void write_config(std::ostream &os, const engine::SimConfig &config);

} // namespace infocast::cli
