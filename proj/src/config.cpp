#include "rectiscope/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <type_traits>
#include <numeric>
#include <sstream>

#include "rectiscope/error.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

using nlohmann::json;

namespace {

// Field table shared by the writer and the strict reader.
template <typename Visitor>
void visit_fields(RunConfig& c, Visitor&& v) {
  v("command", c.command);
  v("input", c.input);
  v("output", c.output);
  v("summary", c.summary);
  v("n", c.n);
  v("p", c.p);
  v("alpha", c.alpha);
  v("r", c.r);
  v("r0", c.r0);
  v("ratio", c.ratio);
  v("scales", c.scales);
  v("centered", c.centered);
  v("centers", c.centers);
  v("seed", c.seed);
  v("method", c.method);
  v("strategy", c.strategy);
  v("samples", c.samples);
  v("budget", c.budget);
  v("lambda", c.secant.lambda);
  v("c0", c.secant.c0);
  v("k_exponent", c.secant.k_exponent);
  v("mode", c.mode);
  v("dini_gamma", c.dini_gamma);
  v("x_index", c.x_index);
  v("frame_samples", c.frame_samples);
  v("k", c.k);
  v("chop_levels", c.chop_levels);
  v("kind", c.kind);
  v("m", c.m);
  v("count", c.count);
  v("level", c.level);
  v("noise", c.noise);
  v("weights", c.weights);
  v("suite", c.suite);
  v("holder_p", c.holder_p);
  v("holder_alpha", c.holder_alpha);
  v("volume_trials", c.volume_trials);
  v("volume_max_dim", c.volume_max_dim);
  v("volume_m", c.volume_m);
  v("jones_scales", c.jones_scales);
  v("timing", c.timing);
}

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  throw InputError("config field '" + key + "': " + what);
}

template <typename T>
void read_field(const json& j, const std::string& key, T& out) {
  const json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) field_error(key, "expected true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) field_error(key, "expected a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) field_error(key, "expected a number");
    out = v.get<T>();
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) field_error(key, "expected a nonnegative integer");
    out = v.get<T>();
  } else {
    if (!v.is_number_integer()) field_error(key, "expected an integer");
    const auto wide = v.get<std::int64_t>();
    if (wide < std::numeric_limits<T>::min() || wide > std::numeric_limits<T>::max()) {
      field_error(key, "integer out of range");
    }
    out = static_cast<T>(wide);
  }
}

}  // namespace

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  RunConfig copy = cfg;
  visit_fields(copy, [&](const char* key, auto& field) { j[key] = field; });
  return j;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config: top level must be a JSON object");
  RunConfig cfg;
  std::vector<std::string> known;
  visit_fields(cfg, [&](const char* key, auto& field) {
    known.emplace_back(key);
    if (j.contains(key)) read_field(j, key, field);
  });
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) field_error(item.key(), "unknown field");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config file " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

namespace {

Index parse_index(const std::string& text, Index size, const std::string& context) {
  Index value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw InputError(context + ": '" + text + "' is not an index");
  if (value < 0 || value >= size) {
    throw InputError(context + ": index " + text + " outside [0, " + std::to_string(size) + ")");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Index> select_centers(const std::string& selector, Index size, std::uint64_t seed) {
  std::vector<Index> out;
  if (selector == "all") {
    out.resize(static_cast<std::size_t>(size));
    std::iota(out.begin(), out.end(), Index{0});
    return out;
  }
  const auto colon = selector.find(':');
  if (colon == std::string::npos) throw InputError("centers: expected all, sample:K, index:LIST or file:PATH");
  const std::string kind = selector.substr(0, colon);
  const std::string arg = selector.substr(colon + 1);
  if (kind == "sample") {
    const Index k = parse_index(arg, std::numeric_limits<Index>::max(), "centers sample");
    std::vector<Index> all(static_cast<std::size_t>(size));
    std::iota(all.begin(), all.end(), Index{0});
    if (k >= size) return all;
    RngStream rng(seed, 0, 3);
    for (Index i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::size_t>(size - i));
      std::swap(all[static_cast<std::size_t>(i)], all[j]);
    }
    out.assign(all.begin(), all.begin() + k);
  } else if (kind == "index") {
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_index(trim(item), size, "centers index"));
  } else if (kind == "file") {
    std::ifstream in(arg);
    if (!in) throw InputError("centers: cannot open " + arg);
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (!line.empty()) out.push_back(parse_index(line, size, "centers file " + arg));
    }
  } else {
    throw InputError("centers: unknown selector '" + kind + "'");
  }
  if (out.empty()) throw InputError("centers: selection is empty");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace rectiscope
