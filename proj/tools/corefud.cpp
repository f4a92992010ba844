// corefud: score, validate, transform and describe CorefUD CoNLL-U files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corefud/corefud.hpp"

namespace {

namespace fs = std::filesystem;
using namespace corefud;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPairing = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

std::shared_ptr<const Treebank> load(const std::string& path, Diagnostics* warnings) {
  return std::make_shared<const Treebank>(parse_conllu(read_file(path), path, warnings));
}

// Prints each distinct warning once, in order.
void print_warnings(const Diagnostics& warnings) {
  std::set<std::string> seen;
  for (const auto& w : warnings) {
    std::string line = w.str();
    if (seen.insert(line).second) std::cerr << line << "\n";
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : detail::split(s, ',')) {
    auto t = detail::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

struct ScoreArgs {
  std::vector<std::string> paths;
  std::string match = "partial";
  bool keep_singletons = false;
  std::string metrics;
  std::string upos_filter;
  std::string format = "text";
  std::string output;
  std::string system_name = "system";
  bool per_doc = false;
  bool no_header = false;
  unsigned jobs = 0;
};

int run_score(const ScoreArgs& a) {
  if (a.paths.empty() || a.paths.size() % 2 != 0) {
    std::cerr << "score: expects KEY... RESPONSE... with as many responses as keys\n";
    return kExitUsage;
  }
  EvaluateOptions opts;
  if (a.match == "partial") {
    opts.policy = MatchPolicy::Partial;
  } else if (a.match == "exact") {
    opts.policy = MatchPolicy::Exact;
  } else if (a.match == "head") {
    opts.policy = MatchPolicy::Head;
  } else {
    std::cerr << "score: unknown --match '" << a.match << "'\n";
    return kExitUsage;
  }
  opts.keep_singletons = a.keep_singletons;
  if (!a.metrics.empty()) {
    opts.metrics.clear();
    for (const auto& name : split_list(a.metrics)) {
      auto m = parse_metric(name);
      if (!m) {
        std::cerr << "score: unknown metric '" << name << "'\n";
        return kExitUsage;
      }
      opts.metrics.push_back(*m);
    }
  }
  if (!a.upos_filter.empty()) opts.upos_filter = a.upos_filter;
  opts.jobs = a.jobs;
  opts.per_document = a.per_doc;

  Diagnostics warnings;
  std::vector<DatasetInput> datasets;
  const std::size_t n = a.paths.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    DatasetInput ds;
    ds.name = fs::path(a.paths[i]).stem().string();
    ds.key = load(a.paths[i], &warnings);
    ds.response = load(a.paths[n + i], &warnings);
    datasets.push_back(std::move(ds));
  }
  ScoreReport report = evaluate(datasets, opts);
  print_warnings(warnings);
  print_warnings(report.warnings);

  std::string rendered;
  if (a.format == "json") {
    rendered = render_json(report).dump(2) + "\n";
  } else if (a.format == "tsv") {
    rendered = render_tsv(report, a.system_name, !a.no_header);
  } else {
    rendered = render_text(report);
  }
  std::cout << rendered;
  if (!a.output.empty()) write_file(a.output, rendered);
  return kExitOk;
}

int run_validate(const std::vector<std::string>& paths, bool strict_sentences) {
  int failures = 0;
  for (const auto& path : paths) {
    Diagnostics warnings;
    try {
      auto tb = load(path, &warnings);
      validate(*tb, !strict_sentences, &warnings);
      build_coref_layers(tb, &warnings);
      print_warnings(warnings);
      std::cout << path << ": OK (" << tb->documents.size() << " documents)\n";
    } catch (const ParseError& e) {
      print_warnings(warnings);
      std::cerr << e.what() << "\n";
      ++failures;
    }
  }
  return failures ? kExitInput : kExitOk;
}

struct StatsArgs {
  std::vector<std::string> paths;
  std::string table = "all";
  bool singletons = false;
  std::string format = "text";
};

int run_stats(const StatsArgs& a) {
  const bool tsv = a.format == "tsv";
  std::vector<std::pair<std::string, EntityStats>> entities;
  std::vector<std::pair<std::string, MentionStats>> mentions;
  std::vector<std::pair<std::string, MentionDetailStats>> details;
  Diagnostics warnings;
  for (const auto& path : a.paths) {
    auto docs = build_coref_layers(load(path, &warnings), &warnings);
    const std::string name = fs::path(path).stem().string();
    entities.emplace_back(name, entity_stats(docs));
    mentions.emplace_back(name, mention_stats(docs, a.singletons));
    details.emplace_back(name, mention_detail_stats(docs));
  }
  print_warnings(warnings);
  const bool all = a.table == "all";
  if (all || a.table == "entities") std::cout << render_entity_stats(entities, tsv);
  if (all) std::cout << "\n";
  if (all || a.table == "mentions") std::cout << render_mention_stats(mentions, tsv);
  if (all) std::cout << "\n";
  if (all || a.table == "details") std::cout << render_mention_detail_stats(details, tsv);
  return kExitOk;
}

std::string output_path(const std::string& input, const std::string& output,
                        const std::string& output_dir) {
  if (!output.empty()) return output;
  if (!output_dir.empty()) return (fs::path(output_dir) / fs::path(input).filename()).string();
  return {};
}

// Rewrites each input file through `fn` and writes it to -o, --output-dir or stdout.
template <class Fn>
int rewrite_files(const std::vector<std::string>& paths, const std::string& output,
                  const std::string& output_dir, Fn&& fn) {
  if (!output.empty() && paths.size() != 1) {
    std::cerr << "-o takes a single input; use --output-dir for several\n";
    return kExitUsage;
  }
  if (!output_dir.empty()) fs::create_directories(output_dir);
  Diagnostics warnings;
  for (const auto& path : paths) {
    auto tb = load(path, &warnings);
    auto docs = build_coref_layers(tb, &warnings);
    for (auto& d : docs) d = fn(path, d);
    const std::string text = write_conllu(to_treebank(docs, tb.get()));
    const std::string dest = output_path(path, output, output_dir);
    if (dest.empty()) {
      std::cout << text;
    } else {
      write_file(dest, text);
    }
  }
  print_warnings(warnings);
  return kExitOk;
}

int run_transform(const std::vector<std::string>& paths, const std::string& ops,
                  const std::string& output, const std::string& output_dir) {
  std::vector<TransformKind> kinds;
  for (const auto& name : split_list(ops)) {
    auto k = parse_transform(name);
    if (!k) {
      std::cerr << "transform: unknown operation '" << name << "'\n";
      return kExitUsage;
    }
    kinds.push_back(*k);
  }
  return rewrite_files(paths, output, output_dir, [&](const std::string&, const CorefDocument& d) {
    CorefDocument out = d;
    for (auto k : kinds) out = apply_transform(out, k);
    return out;
  });
}

struct BaselineArgs {
  std::vector<std::string> paths;
  std::string rules = "propn-lemma";
  std::string propn_datasets;
  bool strip = false;
  std::string output;
  std::string output_dir;
};

int run_baseline(const BaselineArgs& a) {
  BaselineOptions base;
  base.propn_lemma = false;
  for (const auto& r : split_list(a.rules)) {
    if (r == "propn-lemma") {
      base.propn_lemma = true;
    } else if (r == "pronoun-gender") {
      base.pronoun_gender = true;
    } else {
      std::cerr << "baseline: unknown rule '" << r << "'\n";
      return kExitUsage;
    }
  }
  const auto prefixes = split_list(a.propn_datasets);
  return rewrite_files(a.paths, a.output, a.output_dir, [&](const std::string& path, const CorefDocument& d) {
    BaselineOptions opts = base;
    if (opts.propn_lemma && !prefixes.empty()) {
      const std::string file = fs::path(path).filename().string();
      opts.propn_lemma = std::any_of(prefixes.begin(), prefixes.end(),
                                     [&](const std::string& p) { return file.starts_with(p); });
    }
    CorefDocument in = d;
    if (a.strip && !in.layer.mentions.empty()) {
      in.layer = CorefLayer{};
      in.modified = true;
    }
    return run_baseline(in, opts);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CorefUD coreference toolkit: scoring, validation, transforms, baselines, statistics"};
  app.require_subcommand(1);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score response files against key files");
  score_cmd->add_option("paths", score.paths, "KEY... RESPONSE... (dataset i pairs key i with response i)")
      ->required();
  score_cmd->add_option("--match", score.match, "Mention matching: partial, exact or head")
      ->check(CLI::IsMember({"partial", "exact", "head"}));
  score_cmd->add_flag("--keep-singletons", score.keep_singletons, "Score singleton entities too");
  score_cmd->add_option("--metrics", score.metrics,
                        "Comma-separated subset of muc,bcub,ceafe,conll,blanc,lea,mor,zero");
  score_cmd->add_option("--upos-filter", score.upos_filter,
                        "Keep only entities with a mention of this head UPOS");
  score_cmd->add_option("--format", score.format, "text, json or tsv")
      ->check(CLI::IsMember({"text", "json", "tsv"}));
  score_cmd->add_option("--output", score.output, "Also write the report to this file");
  score_cmd->add_option("--system-name", score.system_name, "Row label for TSV output");
  score_cmd->add_flag("--no-header", score.no_header, "Omit the TSV header row");
  score_cmd->add_flag("--per-doc", score.per_doc, "Report every document as well");
  score_cmd->add_option("--jobs,-j", score.jobs, "Worker threads (default: all cores)");

  std::vector<std::string> validate_paths;
  bool strict_sentences = false;
  auto* validate_cmd = app.add_subcommand("validate", "Check files for format and bracket errors");
  validate_cmd->add_option("paths", validate_paths, "CoNLL-U files")->required();
  validate_cmd->add_flag("--strict-sentences", strict_sentences,
                         "Reject mentions spanning several sentences");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Entity and mention statistics");
  stats_cmd->add_option("paths", stats.paths, "CoNLL-U files (one row each)")->required();
  stats_cmd->add_option("--table", stats.table, "entities, mentions, details or all")
      ->check(CLI::IsMember({"entities", "mentions", "details", "all"}));
  stats_cmd->add_flag("--singletons", stats.singletons, "Count singleton mentions in the mention table");
  stats_cmd->add_option("--format", stats.format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));

  std::vector<std::string> transform_paths;
  std::string transform_ops, transform_out, transform_dir;
  auto* transform_cmd = app.add_subcommand("transform", "Rewrite the coreference layer");
  transform_cmd->add_option("paths", transform_paths, "CoNLL-U files")->required();
  transform_cmd
      ->add_option("--ops", transform_ops,
                   "Comma-separated, applied in order: reduce-to-head, merge-same-span, "
                   "conservative-head-reduce, remove-singletons")
      ->required();
  transform_cmd->add_option("-o,--output", transform_out, "Output file (single input)");
  transform_cmd->add_option("--output-dir", transform_dir, "Output directory");

  BaselineArgs baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Rule-based coreference predictions");
  baseline_cmd->add_option("paths", baseline.paths, "CoNLL-U files")->required();
  baseline_cmd->add_option("--rules", baseline.rules,
                           "Comma-separated rules: propn-lemma, pronoun-gender");
  baseline_cmd->add_option("--propn-datasets", baseline.propn_datasets,
                           "Apply propn-lemma only to files whose name starts with one of these");
  baseline_cmd->add_flag("--strip", baseline.strip, "Drop existing coreference before the rules");
  baseline_cmd->add_option("-o,--output", baseline.output, "Output file (single input)");
  baseline_cmd->add_option("--output-dir", baseline.output_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score_cmd) return run_score(score);
    if (*validate_cmd) return run_validate(validate_paths, strict_sentences);
    if (*stats_cmd) return run_stats(stats);
    if (*transform_cmd) return run_transform(transform_paths, transform_ops, transform_out, transform_dir);
    if (*baseline_cmd) return run_baseline(baseline);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const SerializationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PairingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPairing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
