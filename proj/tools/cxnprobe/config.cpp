#include "cxnprobe/config.hpp"

#include <set>

#include "cxnprobe/io.hpp"

namespace cxnprobe::cli {

namespace {

using json = nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + "." + key + "' has the wrong type");
  }
}

void one_of(const std::string& value, const std::set<std::string>& options, const std::string& key) {
  if (!options.count(value)) throw ConfigError("config key '" + key + "' has invalid value '" + value + "'");
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig c) {
  check_keys(j, {"schema", "experiment", "seed", "jobs", "output_dir", "stimuli", "containers",
                 "standardize", "stats", "clustering", "jabberwocky", "report"},
             "$");
  if (j.value("schema", "") != kConfigSchema) {
    throw ConfigError(std::string("config schema must be '") + kConfigSchema + "'");
  }
  read(j, "experiment", c.experiment, "$");
  if (!c.experiment.empty()) one_of(c.experiment, {"sorting", "jabberwocky"}, "experiment");
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ConfigError("config key 'seed' must be an integer");
    c.seed = it->get<std::uint64_t>();
  }
  read(j, "jobs", c.jobs, "$");
  read(j, "output_dir", c.output_dir, "$");

  if (auto it = j.find("stimuli"); it != j.end()) {
    check_keys(*it, {"source", "lexicon", "n_sets", "per_construction", "language", "path"}, "stimuli");
    read(*it, "source", c.stimulus_source, "stimuli");
    read(*it, "lexicon", c.lexicon, "stimuli");
    read(*it, "n_sets", c.n_sets, "stimuli");
    read(*it, "per_construction", c.per_construction, "stimuli");
    read(*it, "language", c.language, "stimuli");
    read(*it, "path", c.stimuli_path, "stimuli");
  }
  if (auto it = j.find("containers"); it != j.end()) {
    check_keys(*it, {"sentences", "jabberwocky", "corpus"}, "containers");
    read(*it, "sentences", c.sentences_container, "containers");
    read(*it, "jabberwocky", c.jabberwocky_container, "containers");
    read(*it, "corpus", c.corpus_container, "containers");
  }
  if (auto it = j.find("standardize"); it != j.end()) {
    check_keys(*it, {"enabled", "stats"}, "standardize");
    read(*it, "enabled", c.standardize, "standardize");
    read(*it, "stats", c.stats_path, "standardize");
  }
  if (auto it = j.find("stats"); it != j.end()) {
    check_keys(*it, {"container", "source_id"}, "stats");
    read(*it, "container", c.stats_container, "stats");
    read(*it, "source_id", c.stats_source_id, "stats");
  }
  if (auto it = j.find("clustering"); it != j.end()) {
    check_keys(*it, {"linkage"}, "clustering");
    read(*it, "linkage", c.linkage, "clustering");
  }
  if (auto it = j.find("jabberwocky"); it != j.end()) {
    check_keys(*it, {"tier", "incongruent"}, "jabberwocky");
    read(*it, "tier", c.tier, "jabberwocky");
    read(*it, "incongruent", c.incongruent, "jabberwocky");
  }
  if (auto it = j.find("report"); it != j.end()) {
    check_keys(*it, {"summaries", "baselines"}, "report");
    read(*it, "summaries", c.summaries, "report");
    read(*it, "baselines", c.baselines, "report");
  }
  one_of(c.stimulus_source, {"generate", "builtin", "file"}, "stimuli.source");
  one_of(c.linkage, {"ward", "complete", "average"}, "clustering.linkage");
  one_of(c.tier, {"high", "low", "both"}, "jabberwocky.tier");
  one_of(c.incongruent, {"mean", "min"}, "jabberwocky.incongruent");
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(j, std::move(base));
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["schema"] = kConfigSchema;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  j["jobs"] = c.jobs;
  j["output_dir"] = c.output_dir;
  j["stimuli"] = {{"source", c.stimulus_source}, {"lexicon", c.lexicon},
                  {"n_sets", c.n_sets},          {"per_construction", c.per_construction},
                  {"language", c.language},      {"path", c.stimuli_path}};
  j["containers"] = {{"sentences", c.sentences_container},
                     {"jabberwocky", c.jabberwocky_container},
                     {"corpus", c.corpus_container}};
  j["standardize"] = {{"enabled", c.standardize}, {"stats", c.stats_path}};
  j["stats"] = {{"container", c.stats_container}, {"source_id", c.stats_source_id}};
  j["clustering"] = {{"linkage", c.linkage}};
  j["jabberwocky"] = {{"tier", c.tier}, {"incongruent", c.incongruent}};
  j["report"] = {{"summaries", c.summaries}, {"baselines", c.baselines}};
  return j;
}

// jobs and output_dir do not affect results and are left out of the hash.
std::string config_hash(const RunConfig& c) {
  auto j = config_to_json(c);
  j.erase("jobs");
  j.erase("output_dir");
  return io::sha256_hex(j.dump());
}

}  // namespace cxnprobe::cli
