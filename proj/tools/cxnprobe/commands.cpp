#include "cxnprobe/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cxnprobe.hpp"
#include "cxnprobe/config.hpp"
#include "cxnprobe/synthetic.hpp"

#ifndef CXNPROBE_DATA_DIR
#define CXNPROBE_DATA_DIR "data"
#endif

namespace cxnprobe::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Missing or unusable input data (exit code 2).
class DataError : public std::runtime_error {
 public:
  DataError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Command-line values; unset fields fall back to the config file.
struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  bool standardize = false;
  std::optional<std::string> stats;
  std::optional<std::string> source;
  std::optional<std::string> lexicon;
  std::optional<std::size_t> n_sets;
  std::optional<std::size_t> per_construction;
  std::optional<std::string> language;
  std::optional<std::string> stimuli;
  std::optional<std::string> container;
  std::optional<std::string> corpus;
  std::optional<std::string> source_id;
  std::optional<std::string> linkage;
  std::optional<std::string> tier;
  std::optional<std::string> incongruent;
  std::vector<std::string> summaries;
  std::optional<std::string> baselines;
};

struct SynthFlags {
  std::string stimuli;
  std::string kind = "sentence";
  std::string key = "construction";
  std::string out_stem;
  std::size_t dim = 32;
  double sigma = 1.0;
  double separation = 20.0;
  std::size_t per_lemma = 50;
  std::uint64_t seed = 0;
  std::string model_id = "synthetic";
};

std::string default_data(const char* file) { return (fs::path(CXNPROBE_DATA_DIR) / file).string(); }

RunConfig resolve(const std::string& command, const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) c = load_config(f.config_path, c);
  if (f.seed) c.seed = f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.out) c.output_dir = *f.out;
  if (f.standardize) c.standardize = true;
  if (f.stats) c.stats_path = *f.stats;
  if (f.source) c.stimulus_source = *f.source;
  if (f.lexicon) c.lexicon = *f.lexicon;
  if (f.n_sets) c.n_sets = *f.n_sets;
  if (f.per_construction) c.per_construction = *f.per_construction;
  if (f.language) c.language = *f.language;
  if (f.stimuli) c.stimuli_path = *f.stimuli;
  if (f.linkage) c.linkage = *f.linkage;
  if (f.tier) c.tier = *f.tier;
  if (f.incongruent) c.incongruent = *f.incongruent;
  if (f.baselines) c.baselines = *f.baselines;
  if (!f.summaries.empty()) c.summaries = f.summaries;
  if (f.container) {
    if (command == "stats") c.stats_container = *f.container;
    else if (command == "jabber-eval") c.jabberwocky_container = *f.container;
    else c.sentences_container = *f.container;
  }
  if (f.corpus) c.corpus_container = *f.corpus;
  if (f.source_id) c.stats_source_id = *f.source_id;

  if (c.experiment.empty()) {
    if (command == "gen-jabberwocky" || command == "jabber-eval") c.experiment = "jabberwocky";
    if (command == "gen-stimuli" || command == "sort-eval") c.experiment = "sorting";
  }
  if (c.output_dir.empty()) {
    const char* env = std::getenv("CXNPROBE_OUT");
    c.output_dir = env && *env ? env : "cxnprobe-out";
  }
  if (c.lexicon.empty()) c.lexicon = default_data("lexicon.json");
  if (c.baselines.empty()) c.baselines = default_data("human_baselines.json");
  if (c.jobs == 0) throw ConfigError("jobs must be at least 1");
  if (c.standardize && c.stats_path.empty()) {
    throw ConfigError("--standardize requires a stats file (--stats)");
  }
  // Re-run value checks on the merged result.
  return config_from_json(config_to_json(c), RunConfig{});
}

void require_path(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " is required");
  if (!fs::exists(path)) throw DataError("missing_input", std::string(what) + " '" + path + "' not found");
}

void require_container(const std::string& stem, const char* what) {
  if (stem.empty()) throw ConfigError(std::string(what) + " is required");
  const auto p = container_paths(stem);
  if (!fs::exists(p.manifest) || !fs::exists(p.binary)) {
    throw DataError("missing_container", std::string(what) + " '" + stem + "' not found");
  }
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw ConfigError("a seed is required for stimulus generation (--seed)");
  return *c.seed;
}

// Input path -> sha256, in insertion order.
using Inputs = std::vector<std::pair<std::string, std::string>>;

void add_file(Inputs& inputs, const std::string& path) {
  inputs.emplace_back(path, io::sha256_file(path));
}

void add_container(Inputs& inputs, const std::string& stem) {
  const auto p = container_paths(stem);
  add_file(inputs, p.manifest.string());
  add_file(inputs, p.binary.string());
}

ojson provenance(const RunConfig& c, const Inputs& inputs, const std::string& command) {
  ojson j;
  j["command"] = command;
  j["config_hash"] = config_hash(c);
  j["seed"] = c.seed ? ojson(*c.seed) : ojson(nullptr);
  ojson in = ojson::object();
  for (const auto& [path, sha] : inputs) in[path] = sha;
  j["inputs"] = std::move(in);
  ojson cfg = config_to_json(c);
  cfg.erase("jobs");
  cfg.erase("output_dir");
  j["config"] = std::move(cfg);
  return j;
}

std::string csv_banner(const RunConfig& c, const std::string& model_id, int layer_index) {
  std::string seed = c.seed ? std::to_string(*c.seed) : "null";
  return "# config_hash=" + config_hash(c) + " seed=" + seed + " model_id=" + model_id +
         " layer_index=" + std::to_string(layer_index) + "\n";
}

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson interval_json(const Interval& i) { return ojson::array({number(i.lower), number(i.upper)}); }

ojson paired_json(const PairedComparison& p) {
  ojson j;
  j["method"] = p.method;
  j["statistic"] = number(p.statistic);
  j["p_value"] = number(p.p_value);
  j["df"] = p.df;
  j["mean_difference"] = number(p.mean_difference);
  j["degenerate"] = p.degenerate;
  j["sign_test"] = {{"positive", p.sign_test.positive},
                    {"negative", p.sign_test.negative},
                    {"p_value", number(p.sign_test.p_value)}};
  return j;
}

void write_json(const fs::path& path, const ojson& j, std::ostream& out) {
  io::atomic_write(path, j.dump(1) + "\n");
  out << path.string() << "\n";
}

void write_text(const fs::path& path, const std::string& text, std::ostream& out) {
  io::atomic_write(path, text);
  out << path.string() << "\n";
}

EmbeddingMatrix maybe_standardize(const EmbeddingMatrix& m, const RunConfig& c,
                                  const std::optional<StandardizationStats>& stats) {
  if (!c.standardize) return m;
  return apply_standardization(m, *stats);
}

std::optional<StandardizationStats> load_stats(const RunConfig& c, Inputs& inputs) {
  if (!c.standardize) return std::nullopt;
  if (c.stats_path.empty()) throw ConfigError("--standardize requires a stats file (--stats)");
  require_path(c.stats_path, "stats file");
  add_file(inputs, c.stats_path);
  try {
    return stats_from_json(nlohmann::json::parse(io::read_file(c.stats_path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::validation, "stats file '" + c.stats_path + "': " + e.what());
  }
}

ojson standardization_json(const RunConfig& c, const std::optional<StandardizationStats>& stats) {
  ojson j;
  j["enabled"] = c.standardize;
  j["source_id"] = stats ? ojson(stats->source_id) : ojson(nullptr);
  return j;
}

// ---------------------------------------------------------------- commands

int cmd_gen(const RunConfig& c, std::ostream& out) {
  Inputs inputs;
  std::vector<StimulusSet> sets;
  if (c.stimulus_source == "generate") {
    const auto seed = require_seed(c);
    require_path(c.lexicon, "lexicon");
    add_file(inputs, c.lexicon);
    sets = generate_sorting_sets(load_lexicon(c.lexicon), c.n_sets, seed);
  } else if (c.stimulus_source == "builtin") {
    if (c.language.empty()) throw ConfigError("builtin stimuli need a language (--language)");
    sets.push_back(load_builtin_stimuli(c.language));
  } else {
    require_path(c.stimuli_path, "stimulus directory");
    const fs::path dir = c.stimuli_path;
    add_file(inputs, (dir / "stimuli.jsonl").string());
    add_file(inputs, (dir / "stimulus_sets.json").string());
    sets = sets_from_index(nlohmann::json::parse(io::read_file(dir / "stimulus_sets.json")),
                           read_jsonl(io::read_file(dir / "stimuli.jsonl")));
  }

  std::vector<Stimulus> flat;
  ojson violations = ojson::array();
  for (const auto& set : sets) {
    for (const auto& v : validate_set(set)) {
      ojson jv;
      jv["set_id"] = set.set_id;
      jv["invariant"] = v.invariant;
      ojson cells = ojson::array();
      for (const auto& [r, col] : v.cells) cells.push_back({r, col});
      jv["cells"] = std::move(cells);
      jv["offending"] = v.offending;
      jv["message"] = v.message;
      violations.push_back(std::move(jv));
    }
    flat.insert(flat.end(), set.grid.begin(), set.grid.end());
  }

  const fs::path dir = c.output_dir;
  write_text(dir / "stimuli.jsonl", write_jsonl(flat), out);
  write_json(dir / "stimulus_sets.json", sets_index_to_json(sets), out);
  ojson report = provenance(c, inputs, "gen-stimuli");
  report["schema"] = "genreport/1";
  report["n_sets"] = sets.size();
  report["n_stimuli"] = flat.size();
  report["violations"] = violations;
  write_json(dir / "gen_report.json", report, out);
  if (!violations.empty() && c.stimulus_source == "generate") {
    throw Error(Errc::internal, "generator produced " + std::to_string(violations.size()) +
                                    " constraint violations");
  }
  return violations.empty() ? kExitOk : kExitData;
}

int cmd_gen_jabberwocky(const RunConfig& c, std::ostream& out) {
  const auto seed = require_seed(c);
  require_path(c.lexicon, "lexicon");
  Inputs inputs;
  add_file(inputs, c.lexicon);
  const auto lexicon = load_lexicon(c.lexicon);
  const auto stimuli = generate_jabberwocky(lexicon, c.per_construction, seed);

  std::map<std::string, std::size_t> fill_counts;
  for (const auto& s : stimuli) {
    fill_counts["subject=" + s.slot_fills.at("subject")]++;
    if (auto it = s.slot_fills.find("object"); it != s.slot_fills.end()) fill_counts["object=" + it->second]++;
  }
  const fs::path dir = c.output_dir;
  write_text(dir / "jabberwocky.jsonl", write_jsonl(stimuli), out);
  ojson report = provenance(c, inputs, "gen-jabberwocky");
  report["schema"] = "jabbergenreport/1";
  report["pool_source_id"] = lexicon.jabberwocky_pools.source_id;
  report["pool_sizes"] = {{"singular_nouns", lexicon.jabberwocky_pools.singular_nouns.size()},
                          {"past_tense_verbs", lexicon.jabberwocky_pools.past_tense_verbs.size()},
                          {"adjectives", lexicon.jabberwocky_pools.adjectives.size()},
                          {"dropped_below_floor", lexicon.jabberwocky_pools.dropped_below_floor}};
  report["per_construction"] = c.per_construction;
  report["n_stimuli"] = stimuli.size();
  ojson counts = ojson::object();
  for (const auto& [k, n] : fill_counts) counts[k] = n;
  report["pronoun_counts"] = std::move(counts);
  write_json(dir / "jabberwocky_report.json", report, out);
  return kExitOk;
}

int cmd_stats(const RunConfig& c, std::ostream& out) {
  require_container(c.stats_container, "stats container");
  Inputs inputs;
  add_container(inputs, c.stats_container);
  const auto matrix = read_container(c.stats_container);
  const auto stats = compute_standardization_stats(matrix, c.stats_source_id);
  ojson j = stats_to_json(stats);
  j["model_id"] = matrix.manifest.model_id;
  j["layer_index"] = matrix.manifest.layer_index;
  j["provenance"] = provenance(c, inputs, "stats");
  write_json(fs::path(c.output_dir) / "standardization_stats.json", j, out);
  return kExitOk;
}

std::vector<StimulusSet> load_sorting_sets(const RunConfig& c, Inputs& inputs) {
  if (!c.stimuli_path.empty()) {
    require_path(c.stimuli_path, "stimulus directory");
    const fs::path dir = c.stimuli_path;
    require_path((dir / "stimuli.jsonl").string(), "stimuli file");
    require_path((dir / "stimulus_sets.json").string(), "set index");
    add_file(inputs, (dir / "stimuli.jsonl").string());
    add_file(inputs, (dir / "stimulus_sets.json").string());
    return sets_from_index(nlohmann::json::parse(io::read_file(dir / "stimulus_sets.json")),
                           read_jsonl(io::read_file(dir / "stimuli.jsonl")));
  }
  if (c.stimulus_source == "builtin") {
    if (c.language.empty()) throw ConfigError("builtin stimuli need a language (--language)");
    return {load_builtin_stimuli(c.language)};
  }
  if (c.stimulus_source == "generate") {
    const auto seed = require_seed(c);
    require_path(c.lexicon, "lexicon");
    add_file(inputs, c.lexicon);
    return generate_sorting_sets(load_lexicon(c.lexicon), c.n_sets, seed);
  }
  throw ConfigError("sort-eval needs stimuli (--stimuli DIR, or --source builtin/generate)");
}

int cmd_sort(const RunConfig& c, std::ostream& out) {
  Inputs inputs;
  require_container(c.sentences_container, "sentence container");
  const auto sets = load_sorting_sets(c, inputs);
  add_container(inputs, c.sentences_container);
  auto stats = load_stats(c, inputs);

  auto matrix = read_container(c.sentences_container);
  if (matrix.manifest.granularity == Granularity::token) matrix = pool_container(matrix);
  matrix = maybe_standardize(matrix, c, stats);

  SortOptions options;
  options.linkage = parse_linkage(c.linkage);
  options.jobs = c.jobs;
  const auto result = run_sorting_experiment(sets, matrix, options);

  const auto& m = matrix.manifest;
  const fs::path dir = c.output_dir;
  std::string outcomes = csv_banner(c, m.model_id, m.layer_index) +
                         "set_id,cdev,vdev,degenerate,assignments\n";
  std::size_t degenerate = 0;
  for (const auto& o : result.outcomes) {
    std::string assign;
    for (int a : o.assignments) assign += (assign.empty() ? "" : " ") + std::to_string(a);
    outcomes += io::csv_field(o.set_id) + "," + std::to_string(o.construction_deviation) + "," +
                std::to_string(o.verb_deviation) + "," + (o.degenerate ? "1" : "0") + "," + assign + "\n";
    degenerate += o.degenerate;
  }

  const auto index = matrix.item_index();
  std::vector<SetProjection> projections(sets.size());
  parallel_for(sets.size(), c.jobs, [&](std::size_t i) { projections[i] = project_set(sets[i], matrix, index); });
  std::string pca = csv_banner(c, m.model_id, m.layer_index) +
                    "set_id,item_id,construction,verb,pc1,pc2,evr1,evr2\n";
  std::size_t pca_warnings = 0;
  for (const auto& proj : projections) {
    pca_warnings += proj.zero_variance_warning;
    for (const auto& p : proj.points) {
      pca += io::csv_field(p.set_id) + "," + io::csv_field(p.item_id) + "," +
             std::string(to_string(p.construction)) + "," + io::csv_field(p.verb) + "," +
             io::format_double(p.pc1) + "," + io::format_double(p.pc2) + "," +
             io::format_double(proj.explained_variance_ratio[0]) + "," +
             io::format_double(proj.explained_variance_ratio[1]) + "\n";
    }
  }

  const auto& s = result.summary;
  ojson report = provenance(c, inputs, "sort-eval");
  report["schema"] = "sortreport/1";
  report["model_id"] = m.model_id;
  report["layer_index"] = m.layer_index;
  report["model_layers"] = m.model_layers;
  report["linkage"] = c.linkage;
  report["standardization"] = standardization_json(c, stats);
  ojson summary;
  summary["n_sets"] = s.n_sets;
  summary["mean_cdev"] = s.mean_cdev;
  summary["mean_vdev"] = s.mean_vdev;
  summary["ci95_cdev"] = interval_json(s.ci95_cdev);
  summary["ci95_vdev"] = interval_json(s.ci95_vdev);
  summary["paired_test"] = s.paired_test ? paired_json(*s.paired_test) : ojson(nullptr);
  summary["degenerate_sets"] = degenerate;
  summary["pca_zero_variance_warnings"] = pca_warnings;
  report["summary"] = std::move(summary);

  write_json(dir / "sort_summary.json", report, out);
  write_text(dir / "sort_outcomes.csv", outcomes, out);
  write_text(dir / "sort_pca.csv", pca, out);
  return kExitOk;
}

std::vector<Stimulus> load_jabberwocky_stimuli(const RunConfig& c, Inputs& inputs) {
  if (!c.stimuli_path.empty()) {
    fs::path path = c.stimuli_path;
    if (fs::is_directory(path)) path /= "jabberwocky.jsonl";
    require_path(path.string(), "Jabberwocky stimuli");
    add_file(inputs, path.string());
    return read_jsonl(io::read_file(path));
  }
  const auto seed = require_seed(c);
  require_path(c.lexicon, "lexicon");
  add_file(inputs, c.lexicon);
  return generate_jabberwocky(load_lexicon(c.lexicon), c.per_construction, seed);
}

int cmd_jabber(const RunConfig& c, std::ostream& out) {
  Inputs inputs;
  require_container(c.jabberwocky_container, "Jabberwocky container");
  require_container(c.corpus_container, "corpus container");
  const auto stimuli = load_jabberwocky_stimuli(c, inputs);
  add_container(inputs, c.jabberwocky_container);
  add_container(inputs, c.corpus_container);
  auto stats = load_stats(c, inputs);

  const auto jabber = maybe_standardize(read_container(c.jabberwocky_container), c, stats);
  const auto corpus = maybe_standardize(read_container(c.corpus_container), c, stats);
  if (jabber.manifest.dim != corpus.manifest.dim) {
    throw Error(Errc::validation, "Jabberwocky and corpus containers differ in dim");
  }
  const auto score = parse_incongruent_score(c.incongruent);

  std::vector<FrequencyTier> tiers;
  if (c.tier != "low") tiers.push_back(FrequencyTier::high);
  if (c.tier != "high") tiers.push_back(FrequencyTier::low);

  const auto& m = jabber.manifest;
  const fs::path dir = c.output_dir;
  for (auto tier : tiers) {
    const auto prototypes = build_prototypes(corpus, tier);
    const auto grid = verb_distances(jabber, stimuli, prototypes, c.jobs);
    const auto cong = congruency_analysis(grid, score);
    const std::string name = tier == FrequencyTier::high ? "high" : "low";

    ojson report = provenance(c, inputs, "jabber-eval");
    report["schema"] = "jabberreport/1";
    report["model_id"] = m.model_id;
    report["layer_index"] = m.layer_index;
    report["model_layers"] = m.model_layers;
    report["corpus_model_id"] = corpus.manifest.model_id;
    report["standardization"] = standardization_json(c, stats);
    report["tier"] = std::string(to_string(tier));
    ojson protos = ojson::array();
    for (const auto& p : prototypes) {
      protos.push_back({{"lemma", p.lemma},
                        {"construction", std::string(to_string(p.construction))},
                        {"occurrence_count", p.occurrence_count}});
    }
    report["prototypes"] = std::move(protos);
    ojson rows = ojson::array();
    for (auto r : grid.rows) rows.push_back(std::string(to_string(r)));
    report["rows"] = std::move(rows);
    ojson cols = ojson::array();
    for (const auto& col : grid.columns) cols.push_back(col.lemma);
    report["columns"] = std::move(cols);
    ojson cells = ojson::array();
    for (const auto& row : grid.cells) {
      ojson jr = ojson::array();
      for (const auto& cell : row) {
        jr.push_back({{"mean_distance", number(cell.mean_distance)},
                      {"ci95", interval_json(cell.ci95)},
                      {"n", cell.n}});
      }
      cells.push_back(std::move(jr));
    }
    report["cells"] = std::move(cells);
    ojson cj;
    cj["mean_congruent"] = number(cong.mean_congruent);
    cj["mean_incongruent"] = number(cong.mean_incongruent);
    cj["incongruent_score"] = std::string(to_string(cong.incongruent_score));
    cj["paired_test"] = paired_json(cong.paired_test);
    cj["per_construction_ranks"] = cong.per_construction_ranks;
    report["congruency"] = std::move(cj);
    write_json(dir / ("jabber_" + name + ".json"), report, out);

    std::string csv = csv_banner(c, m.model_id, m.layer_index) + "item_id,construction,prototype,distance\n";
    for (const auto& s : grid.sentences) {
      for (std::size_t j = 0; j < grid.columns.size(); ++j) {
        csv += io::csv_field(s.item_id) + "," + std::string(to_string(s.construction)) + "," +
               grid.columns[j].lemma + "," + io::format_double(s.distances[j]) + "\n";
      }
    }
    write_text(dir / ("jabber_" + name + "_distances.csv"), csv, out);
  }
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  if (c.summaries.empty() && c.baselines.empty()) throw ConfigError("report needs --summary files");
  Inputs inputs;
  ojson rows = ojson::array();
  for (const auto& path : c.summaries) {
    require_path(path, "summary");
    add_file(inputs, path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::validation, "summary '" + path + "': " + e.what());
    }
    if (j.value("schema", "") != "sortreport/1") {
      throw Error(Errc::validation, "summary '" + path + "' is not a sort-eval report");
    }
    const auto& s = j.at("summary");
    ojson row;
    row["kind"] = "computed";
    row["label"] = j.value("model_id", "");
    row["language"] = nullptr;
    row["n"] = s.at("n_sets");
    row["mean_cdev"] = s.at("mean_cdev");
    row["mean_vdev"] = s.at("mean_vdev");
    row["ci95_cdev"] = s.at("ci95_cdev");
    row["ci95_vdev"] = s.at("ci95_vdev");
    row["p_value"] = s.at("paired_test").is_null() ? ojson(nullptr) : ojson(s["paired_test"].at("p_value"));
    row["standardized"] = j.at("standardization").at("enabled");
    row["source"] = path;
    rows.push_back(std::move(row));
  }
  if (!c.baselines.empty()) {
    require_path(c.baselines, "baselines file");
    add_file(inputs, c.baselines);
    auto j = nlohmann::json::parse(io::read_file(c.baselines));
    if (j.value("schema", "") != "baselines/1") {
      throw Error(Errc::validation, "baselines file must use schema 'baselines/1'");
    }
    for (const auto& e : j.at("entries")) {
      ojson row;
      row["kind"] = "literature";
      row["label"] = e.at("group");
      row["language"] = e.value("language", "");
      row["n"] = e.value("participants", 0);
      row["mean_cdev"] = e.at("mean_cdev");
      row["mean_vdev"] = e.at("mean_vdev");
      row["ci95_cdev"] = nullptr;
      row["ci95_vdev"] = nullptr;
      row["p_value"] = nullptr;
      row["standardized"] = false;
      row["source"] = e.value("citation_key", "");
      rows.push_back(std::move(row));
    }
  }

  auto cell = [](const ojson& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_string()) return io::csv_field(v.get<std::string>());
    if (v.is_number_float()) return io::format_double(v.get<double>());
    return v.dump();
  };
  std::string csv = "# config_hash=" + config_hash(c) + "\n" +
                    "kind,label,language,n,mean_cdev,mean_vdev,cdev_lo,cdev_hi,vdev_lo,vdev_hi,p_value,standardized,source\n";
  for (const auto& r : rows) {
    auto lo_hi = [&](const char* key, int i) { return r[key].is_null() ? std::string() : cell(r[key][i]); };
    csv += cell(r["kind"]) + "," + cell(r["label"]) + "," + cell(r["language"]) + "," + cell(r["n"]) + "," +
           cell(r["mean_cdev"]) + "," + cell(r["mean_vdev"]) + "," + lo_hi("ci95_cdev", 0) + "," +
           lo_hi("ci95_cdev", 1) + "," + lo_hi("ci95_vdev", 0) + "," + lo_hi("ci95_vdev", 1) + "," +
           cell(r["p_value"]) + "," + cell(r["standardized"]) + "," + cell(r["source"]) + "\n";
  }
  ojson report = provenance(c, inputs, "report");
  report["schema"] = "comparison/1";
  report["rows"] = std::move(rows);
  const fs::path dir = c.output_dir;
  write_json(dir / "comparison.json", report, out);
  write_text(dir / "comparison.csv", csv, out);
  return kExitOk;
}

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  synthetic::ClusterSpec spec;
  spec.dim = f.dim;
  spec.sigma = f.sigma;
  spec.separation = f.separation;
  spec.seed = f.seed;
  spec.model_id = f.model_id;
  if (f.out_stem.empty()) throw ConfigError("synth-embed needs --out-stem");
  EmbeddingMatrix m;
  if (f.kind == "corpus") {
    m = synthetic::prototype_corpus(f.per_lemma, spec);
  } else {
    require_path(f.stimuli, "stimuli");
    fs::path path = f.stimuli;
    if (fs::is_directory(path)) {
      path /= f.kind == "jabberwocky" ? "jabberwocky.jsonl" : "stimuli.jsonl";
      require_path(path.string(), "stimuli");
    }
    const auto stimuli = read_jsonl(io::read_file(path));
    if (f.kind == "sentence") {
      m = synthetic::sentence_container(
          stimuli, f.key == "verb" ? synthetic::Key::verb : synthetic::Key::construction, spec);
    } else if (f.kind == "jabberwocky") {
      m = synthetic::jabberwocky_container(stimuli, spec);
    } else {
      throw ConfigError("--kind must be sentence, jabberwocky or corpus");
    }
  }
  write_container(m, f.out_stem);
  const auto p = container_paths(f.out_stem);
  out << p.manifest.string() << "\n" << p.binary.string() << "\n";
  return kExitOk;
}

void report_error(std::ostream& err, const char* kind, const std::string& code, int exit_code,
                  const std::string& message) {
  ojson j;
  j["error"] = {{"kind", kind}, {"code", code}, {"exit_code", exit_code}, {"message", message}};
  err << j.dump() << "\n";
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::argument: return kExitConfig;
    case Errc::internal: return kExitInternal;
    default: return kExitData;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construction-vs-verb probing toolkit for contextual embeddings"};
  app.require_subcommand(1);
  Flags f;
  SynthFlags sf;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config_path, "Run configuration (runconfig/1 JSON)");
    sub->add_option("--out", f.out, "Output directory (default: $CXNPROBE_OUT or ./cxnprobe-out)");
    sub->add_option("--seed", f.seed, "Random seed");
    sub->add_option("--jobs", f.jobs, "Worker threads");
  };
  auto add_standardize = [&](CLI::App* sub) {
    sub->add_flag("--standardize", f.standardize, "Standardize embeddings before analysis");
    sub->add_option("--stats", f.stats, "Standardization stats file (from `stats`)");
  };

  auto* gen = app.add_subcommand("gen-stimuli", "Generate or export sentence-sorting stimuli");
  add_common(gen);
  gen->add_option("--source", f.source, "generate | builtin | file");
  gen->add_option("--lexicon", f.lexicon, "Lexicon file (lexicon/1)");
  gen->add_option("--n-sets", f.n_sets, "Number of 4x4 sets to generate");
  gen->add_option("--language", f.language, "Builtin stimuli: en-bencini | de | it | es");
  gen->add_option("--stimuli", f.stimuli, "Directory with stimuli.jsonl + stimulus_sets.json (source=file)");

  auto* genj = app.add_subcommand("gen-jabberwocky", "Generate Jabberwocky sentences");
  add_common(genj);
  genj->add_option("--lexicon", f.lexicon, "Lexicon file (lexicon/1)");
  genj->add_option("--per-construction", f.per_construction, "Sentences per construction");

  auto* st = app.add_subcommand("stats", "Compute standardization statistics from a container");
  add_common(st);
  st->add_option("--container", f.container, "Container stem");
  st->add_option("--source-id", f.source_id, "Identifier recorded with the statistics");

  auto* sort = app.add_subcommand("sort-eval", "Run the sentence-sorting evaluation");
  add_common(sort);
  add_standardize(sort);
  sort->add_option("--container", f.container, "Sentence (or token) container stem");
  sort->add_option("--stimuli", f.stimuli, "Directory with stimuli.jsonl + stimulus_sets.json");
  sort->add_option("--source", f.source, "generate | builtin | file");
  sort->add_option("--language", f.language, "Builtin stimuli language");
  sort->add_option("--lexicon", f.lexicon, "Lexicon file when regenerating stimuli");
  sort->add_option("--n-sets", f.n_sets, "Number of sets when regenerating stimuli");
  sort->add_option("--linkage", f.linkage, "ward | complete | average");

  auto* jab = app.add_subcommand("jabber-eval", "Run the Jabberwocky prototype-distance evaluation");
  add_common(jab);
  add_standardize(jab);
  jab->add_option("--container", f.container, "Token container of the Jabberwocky sentences");
  jab->add_option("--corpus", f.corpus, "Token container of prototype verb occurrences");
  jab->add_option("--stimuli", f.stimuli, "jabberwocky.jsonl (or its directory)");
  jab->add_option("--lexicon", f.lexicon, "Lexicon file when regenerating stimuli");
  jab->add_option("--per-construction", f.per_construction, "Sentences per construction when regenerating");
  jab->add_option("--tier", f.tier, "high | low | both");
  jab->add_option("--incongruent", f.incongruent, "Per-sentence incongruent score: mean | min");

  auto* rep = app.add_subcommand("report", "Merge sorting summaries with literature baselines");
  add_common(rep);
  rep->add_option("--summary", f.summaries, "sort_summary.json files (repeatable)");
  rep->add_option("--baselines", f.baselines, "Literature baselines (baselines/1)");

  auto* syn = app.add_subcommand("synth-embed", "Write a synthetic embedding container fixture");
  syn->add_option("--stimuli", sf.stimuli, "Stimulus JSONL (or its directory)");
  syn->add_option("--kind", sf.kind, "sentence | jabberwocky | corpus");
  syn->add_option("--key", sf.key, "Cluster key for sentence fixtures: construction | verb");
  syn->add_option("--out-stem", sf.out_stem, "Container stem to write");
  syn->add_option("--dim", sf.dim, "Embedding dimension");
  syn->add_option("--sigma", sf.sigma, "Within-cluster standard deviation");
  syn->add_option("--separation", sf.separation, "Center offset along each axis");
  syn->add_option("--per-lemma", sf.per_lemma, "Occurrences per prototype lemma (corpus)");
  syn->add_option("--seed", sf.seed, "Random seed");
  syn->add_option("--model-id", sf.model_id, "model_id recorded in the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "config", "usage", kExitConfig, e.what());
    return kExitConfig;
  }

  try {
    if (syn->parsed()) return cmd_synth(sf, out);
    for (auto* sub : app.get_subcommands()) {
      const std::string name = sub->get_name();
      const RunConfig c = resolve(name, f);
      if (name == "gen-stimuli") return cmd_gen(c, out);
      if (name == "gen-jabberwocky") return cmd_gen_jabberwocky(c, out);
      if (name == "stats") return cmd_stats(c, out);
      if (name == "sort-eval") return cmd_sort(c, out);
      if (name == "jabber-eval") return cmd_jabber(c, out);
      if (name == "report") return cmd_report(c, out);
    }
  } catch (const ConfigError& e) {
    report_error(err, "config", "config", kExitConfig, e.what());
    return kExitConfig;
  } catch (const DataError& e) {
    report_error(err, "data", e.code(), kExitData, e.what());
    return kExitData;
  } catch (const Error& e) {
    const int code = exit_for(e.code());
    report_error(err, code == kExitConfig ? "config" : code == kExitData ? "data" : "internal",
                 errc_name(e.code()), code, e.what());
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "data", "malformed_json", kExitData, e.what());
    return kExitData;
  } catch (const std::exception& e) {
    report_error(err, "internal", "internal", kExitInternal, e.what());
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cxnprobe::cli
