#include "infocast/cli/config_file.hpp"

#include "infocast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace infocast::cli {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::vector<std::string> required_keys{
    "sim_time",    "road_length",     "arrival_rate", "speed_min", "speed_max",      "comm_range",
    "num_rsus",    "message_packets", "buffer_size",  "scheme",    "domain_segments"};

double to_double(const std::string &key, const std::string &v) {
  double out = 0.0;
  const auto *end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError(key, "key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

std::int64_t to_int(const std::string &key, const std::string &v) {
  std::int64_t out = 0;
  const auto *end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end)
    throw ConfigError(key, "key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

std::size_t to_count(const std::string &key, const std::string &v) {
  const auto n = to_int(key, v);
  if (n < 0)
    throw ConfigError(key, "key '" + key + "': must be >= 0");
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  throw ConfigError(key, "key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string &key, const std::string &v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, trim(item)));
  return out;
}

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fmt_list(const std::vector<double> &xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

} // namespace

KeyValues parse_key_values(std::istream &in, const std::string &origin) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("", origin + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError(key, origin + ":" + std::to_string(lineno) + ": key '" + key + "' repeated");
  }
  return kv;
}

KeyValues read_key_values(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("", "cannot read '" + path + "'");
  return parse_key_values(in, path);
}

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys{
      "sim_time",     "road_length",   "arrival_rate",   "speed_min",          "speed_max",
      "velocity",     "spacing_rate",  "comm_range",     "num_rsus",           "rsu_placement",
      "rsu_positions", "segment_length", "message_packets", "payload_len",     "degree_c",
      "degree_delta", "buffer_size",   "scheme",         "drop_fraction",      "window",
      "domain_segments", "warmup_time", "prepopulate",   "seed",               "eta_multiples",
      "occupancy_interval", "slot_duration", "tx_prob",  "rsu_rate"};
  return keys;
}

bool is_config_key(const std::string &key) {
  const auto &k = config_keys();
  return std::find(k.begin(), k.end(), key) != k.end();
}

engine::SimConfig build_config(const KeyValues &kv) {
  for (const auto &[key, value] : kv)
    if (!is_config_key(key))
      throw ConfigError(key, "unknown key '" + key + "'");
  for (const auto &key : required_keys) {
    if (kv.contains(key))
      continue;
    // A pinned velocity stands in for both speed bounds.
    if ((key == "speed_min" || key == "speed_max") && kv.contains("velocity"))
      continue;
    throw ConfigError(key, "missing required key '" + key + "'");
  }
  if (kv.contains("velocity") && (kv.contains("speed_min") || kv.contains("speed_max")))
    throw ConfigError("velocity", "key 'velocity' conflicts with speed_min/speed_max");

  engine::SimConfig c;
  auto get = [&](const std::string &k) -> const std::string & { return kv.at(k); };
  c.sim_time = to_double("sim_time", get("sim_time"));
  c.mobility.road_length = to_double("road_length", get("road_length"));
  c.mobility.arrival_rate = to_double("arrival_rate", get("arrival_rate"));
  if (kv.contains("velocity")) {
    c.mobility.speed_min = c.mobility.speed_max = to_double("velocity", get("velocity"));
  } else {
    c.mobility.speed_min = to_double("speed_min", get("speed_min"));
    c.mobility.speed_max = to_double("speed_max", get("speed_max"));
  }
  if (kv.contains("spacing_rate"))
    c.mobility.spacing_rate_override = to_double("spacing_rate", get("spacing_rate"));
  c.mobility.comm_range = c.channel.comm_range = to_double("comm_range", get("comm_range"));
  c.num_rsus = static_cast<int>(to_int("num_rsus", get("num_rsus")));

  if (kv.contains("rsu_placement")) {
    const auto &p = get("rsu_placement");
    if (p == "uniform")
      c.placement = engine::RsuPlacement::uniform;
    else if (p == "random")
      c.placement = engine::RsuPlacement::random;
    else if (p == "explicit")
      c.placement = engine::RsuPlacement::explicit_positions;
    else
      throw ConfigError("rsu_placement", "key 'rsu_placement': expected uniform, random or explicit");
  }
  if (kv.contains("rsu_positions")) {
    if (c.placement != engine::RsuPlacement::explicit_positions)
      throw ConfigError("rsu_positions", "key 'rsu_positions' needs rsu_placement = explicit");
    c.rsu_positions = to_list("rsu_positions", get("rsu_positions"));
  }
  if (kv.contains("segment_length"))
    c.segment_length_override = to_double("segment_length", get("segment_length"));

  c.message_packets = to_count("message_packets", get("message_packets"));
  if (kv.contains("payload_len"))
    c.payload_len = to_count("payload_len", get("payload_len"));
  if (kv.contains("degree_c"))
    c.degree_c = to_double("degree_c", get("degree_c"));
  if (kv.contains("degree_delta"))
    c.degree_delta = to_double("degree_delta", get("degree_delta"));
  c.buffer_size = to_count("buffer_size", get("buffer_size"));

  const auto &scheme = get("scheme");
  if (scheme == "A") {
    if (!kv.contains("drop_fraction"))
      throw ConfigError("drop_fraction", "missing required key 'drop_fraction' for scheme A");
    if (kv.contains("window"))
      throw ConfigError("window", "key 'window' only applies to scheme B");
    c.scheme = protocol::SchemeA{to_double("drop_fraction", get("drop_fraction"))};
  } else if (scheme == "B") {
    if (!kv.contains("window"))
      throw ConfigError("window", "missing required key 'window' for scheme B");
    if (kv.contains("drop_fraction"))
      throw ConfigError("drop_fraction", "key 'drop_fraction' only applies to scheme A");
    c.scheme = protocol::SchemeB{static_cast<int>(to_int("window", get("window")))};
  } else {
    throw ConfigError("scheme", "key 'scheme': expected A or B, got '" + scheme + "'");
  }
  c.domain_segments = static_cast<int>(to_int("domain_segments", get("domain_segments")));

  if (kv.contains("warmup_time"))
    c.warmup_time = to_double("warmup_time", get("warmup_time"));
  if (kv.contains("prepopulate"))
    c.prepopulate = to_bool("prepopulate", get("prepopulate"));
  if (kv.contains("seed")) {
    const auto &v = get("seed");
    const auto *end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, c.rng_seed);
    if (ec != std::errc{} || p != end)
      throw ConfigError("seed", "key 'seed': expected an unsigned integer, got '" + v + "'");
  }
  if (kv.contains("eta_multiples"))
    c.eta_multiples = to_list("eta_multiples", get("eta_multiples"));
  if (kv.contains("occupancy_interval"))
    c.occupancy_interval = to_double("occupancy_interval", get("occupancy_interval"));
  if (kv.contains("slot_duration"))
    c.channel.slot_duration = to_double("slot_duration", get("slot_duration"));
  if (kv.contains("tx_prob"))
    c.channel.tx_prob = to_double("tx_prob", get("tx_prob"));
  if (kv.contains("rsu_rate"))
    c.channel.rsu_rate = to_double("rsu_rate", get("rsu_rate"));

  try {
    c.validate();
  } catch (const InvalidParameter &e) {
    // Validation messages lead with the field name.
    const std::string what = e.what();
    throw ConfigError(what.substr(0, what.find(' ')), "invalid config: " + what);
  }
  return c;
}

void write_config(std::ostream &os, const engine::SimConfig &c) {
  os << "sim_time = " << fmt(c.sim_time) << '\n';
  os << "road_length = " << fmt(c.mobility.road_length) << '\n';
  os << "arrival_rate = " << fmt(c.mobility.arrival_rate) << '\n';
  os << "speed_min = " << fmt(c.mobility.speed_min) << '\n';
  os << "speed_max = " << fmt(c.mobility.speed_max) << '\n';
  if (c.mobility.spacing_rate_override)
    os << "spacing_rate = " << fmt(*c.mobility.spacing_rate_override) << '\n';
  os << "comm_range = " << fmt(c.mobility.comm_range) << '\n';
  os << "num_rsus = " << c.num_rsus << '\n';
  switch (c.placement) {
  case engine::RsuPlacement::uniform:
    os << "rsu_placement = uniform\n";
    break;
  case engine::RsuPlacement::random:
    os << "rsu_placement = random\n";
    break;
  case engine::RsuPlacement::explicit_positions:
    os << "rsu_placement = explicit\n";
    os << "rsu_positions = " << fmt_list(c.rsu_positions) << '\n';
    break;
  }
  if (c.segment_length_override)
    os << "segment_length = " << fmt(*c.segment_length_override) << '\n';
  os << "message_packets = " << c.message_packets << '\n';
  os << "payload_len = " << c.payload_len << '\n';
  os << "degree_c = " << fmt(c.degree_c) << '\n';
  os << "degree_delta = " << fmt(c.degree_delta) << '\n';
  os << "buffer_size = " << c.buffer_size << '\n';
  if (const auto *a = std::get_if<protocol::SchemeA>(&c.scheme))
    os << "scheme = A\ndrop_fraction = " << fmt(a->drop_fraction) << '\n';
  else
    os << "scheme = B\nwindow = " << std::get<protocol::SchemeB>(c.scheme).window << '\n';
  os << "domain_segments = " << c.domain_segments << '\n';
  if (c.warmup_time)
    os << "warmup_time = " << fmt(*c.warmup_time) << '\n';
  os << "prepopulate = " << (c.prepopulate ? "true" : "false") << '\n';
  os << "seed = " << c.rng_seed << '\n';
  os << "eta_multiples = " << fmt_list(c.eta_multiples) << '\n';
  os << "occupancy_interval = " << fmt(c.occupancy_interval) << '\n';
  os << "slot_duration = " << fmt(c.channel.slot_duration) << '\n';
  os << "tx_prob = " << fmt(c.channel.tx_prob) << '\n';
  os << "rsu_rate = " << fmt(c.channel.rsu_rate) << '\n';
}

} // namespace infocast::cli
