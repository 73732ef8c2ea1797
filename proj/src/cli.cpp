#include "homcount/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "homcount/data.hpp"
#include "homcount/embedding.hpp"
#include "homcount/embedding_io.hpp"
#include "homcount/errors.hpp"
#include "homcount/evaluation.hpp"
#include "homcount/oracle.hpp"
#include "homcount/patterns.hpp"

namespace homcount::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// `[tensor:]kind:max_order` or `[tensor:]custom:FILE`.
struct FamilySpec {
  std::string text;
  bool tensor = false;
  FamilyKind kind = FamilyKind::cycles;
  std::size_t max_order = 0;
  fs::path custom_file;
};

FamilySpec parse_family_spec(const std::string& text) {
  FamilySpec spec;
  spec.text = text;
  std::string_view rest = text;
  if (rest.starts_with("tensor:")) {
    spec.tensor = true;
    rest.remove_prefix(7);
  }
  const auto colon = rest.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("family '" + text + "' should look like kind:max_order");
  spec.kind = parse_family_kind(rest.substr(0, colon));
  const std::string arg(rest.substr(colon + 1));
  if (spec.kind == FamilyKind::custom) {
    spec.custom_file = arg;
    return spec;
  }
  if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("family '" + text + "' has a non-numeric max order");
  spec.max_order = std::stoul(arg);
  return spec;
}

PatternFamily load_family(const FamilySpec& spec) {
  if (spec.kind == FamilyKind::custom) return parse_custom_family(spec.custom_file);
  return enumerate_family(spec.kind, spec.max_order);
}

std::size_t default_threads() {
  if (const char* env = std::getenv("HOMCOUNT_THREADS")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("HOMCOUNT_THREADS must be a non-negative integer");
    }
  }
  return 0;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const std::size_t n = std::stoul(text);
      return {n, n};
    }
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("node range '" + text + "' should look like LO:HI");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

struct Logger {
  std::ostream& err;
  void operator()(const std::string& event, const std::string& fields) const {
    err << "[homcount] " << event << ' ' << fields << '\n';
  }
};

// ---------------------------------------------------------------- embedding

struct EmbedSettings {
  std::vector<std::string> families;
  bool tensor = false;
  bool log = false;
  bool density = false;
  bool append_features = false;
  double epsilon = 0.01;
  double timeout = 0.0;
  bool force_oracle = false;
  std::size_t threads = 0;

  void add_options(CLI::App& app) {
    app.add_option("--family", families, "Pattern family: [tensor:]kind:max_order or [tensor:]custom:FILE")
        ->required();
    app.add_flag("--tensor", tensor, "Tensor embedding for every family (one block per feature channel)");
    app.add_flag("--log", log, "Signed log1p scaling of counts");
    app.add_flag("--density", density, "Homomorphism densities instead of counts");
    app.add_flag("--append-features", append_features, "Append the raw node features");
    app.add_option("--epsilon", epsilon, "Replacement for zero feature values")->capture_default_str();
    app.add_option("--timeout", timeout, "Seconds per family before remaining columns are skipped (0 = none)");
    app.add_flag("--force-oracle", force_oracle, "Allow brute-force counting of large non-tree patterns");
    app.add_option("--threads", threads, "Worker threads (default: HOMCOUNT_THREADS or all cores)");
  }

  void validate() const {
    if (density && log) throw std::invalid_argument("--density and --log cannot be combined in one pass");
    if (!(epsilon > 0.0)) throw std::invalid_argument("--epsilon must be positive");
    if (timeout < 0.0) throw std::invalid_argument("--timeout must be non-negative");
  }

  json to_json() const {
    return {{"families", families}, {"tensor", tensor},  {"log", log},
            {"density", density},   {"append_features", append_features},
            {"epsilon", epsilon},   {"timeout", timeout}, {"force_oracle", force_oracle}};
  }
};

struct EmbedOutcome {
  EmbeddingMatrix embedding;
  json families = json::array();
};

EmbedOutcome build_embedding(std::span<const FeaturedGraph> raw_graphs, const EmbedSettings& s,
                             std::size_t threads, const Logger& log) {
  s.validate();
  std::vector<FeaturedGraph> graphs;
  for (const auto& g : raw_graphs) graphs.push_back(preprocess_zero_features(g, s.epsilon));
  std::vector<FeaturedGraph> plain_graphs;
  for (const auto& g : graphs) plain_graphs.push_back(g.plain());

  EmbedOutcome outcome;
  std::vector<EmbeddingMatrix> parts;
  for (const auto& text : s.families) {
    const FamilySpec spec = parse_family_spec(text);
    const PatternFamily family = load_family(spec);
    const bool tensor = s.tensor || spec.tensor;
    EmbedOptions options;
    options.threads = threads;
    options.count.force_oracle = s.force_oracle;
    const auto start = Clock::now();
    if (s.timeout > 0.0)
      options.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s.timeout));
    // Non-tensor embeddings count pure structure.
    const auto& source = tensor ? graphs : plain_graphs;
    EmbeddingMatrix e = embed_graphs(source, family, tensor, options);
    if (s.density) e = density(e, source, family);
    if (s.log) e = log_scale(e);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    log("embed", "family=" + text + " patterns=" + std::to_string(family.size()) +
                     " columns=" + std::to_string(e.cols()) + " partial=" + (e.partial ? "true" : "false") +
                     " seconds=" + std::to_string(seconds));
    outcome.families.push_back(
        {{"family", text}, {"patterns", family.size()}, {"columns", e.cols()}, {"partial", e.partial}});
    parts.push_back(std::move(e));
  }
  outcome.embedding = concat_ensemble(parts);
  if (s.append_features) outcome.embedding = append_raw_features(outcome.embedding, graphs);
  return outcome;
}

// ---------------------------------------------------------------- evaluation

struct EvalSettings {
  std::size_t folds = 10;
  std::size_t reps = 10;
  std::size_t trees = 100;
  std::size_t max_depth = 0;
  std::uint64_t seed = 0;

  void add_options(CLI::App& app) {
    app.add_option("--folds", folds, "Stratified cross-validation folds")->capture_default_str();
    app.add_option("--reps", reps, "Repetitions with different seeds")->capture_default_str();
    app.add_option("--trees", trees, "Trees per forest")->capture_default_str();
    app.add_option("--max-depth", max_depth, "Maximum tree depth (0 = unlimited)")->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
  }

  ForestConfig forest(std::size_t threads) const {
    ForestConfig c;
    c.num_trees = trees;
    c.max_depth = max_depth;
    c.seed = seed;
    c.threads = threads;
    return c;
  }

  json to_json() const {
    return {{"folds", folds}, {"reps", reps}, {"trees", trees}, {"max_depth", max_depth}, {"seed", seed}};
  }
};

// ---------------------------------------------------------------- SBM

struct SbmSettings {
  std::string kind;
  std::optional<std::size_t> graphs;
  std::optional<std::string> nodes;
  std::optional<std::size_t> communities;
  std::optional<double> p, q, pattern_p, pattern_q;
  std::optional<std::uint64_t> seed;

  void add_options(CLI::App& app, bool required_kind) {
    auto* k = app.add_option("--kind", kind, "cluster or pattern")->check(CLI::IsMember({"cluster", "pattern"}));
    if (required_kind) k->required();
    app.add_option("--graphs", graphs, "Number of graphs");
    app.add_option("--nodes", nodes, "Node-count range LO:HI");
    app.add_option("--communities", communities, "Number of (background) communities");
    app.add_option("--p", p, "Intra-community edge probability");
    app.add_option("--q", q, "Inter-community edge probability");
    app.add_option("--pattern-p", pattern_p, "Edge probability inside the pattern block");
    app.add_option("--pattern-q", pattern_q, "Edge probability between pattern and background");
    app.add_option("--seed", seed, "Random seed");
  }

  SbmSpec resolve() const {
    SbmSpec s = kind == "pattern" ? default_pattern_spec() : default_cluster_spec();
    if (graphs) s.num_graphs = *graphs;
    if (nodes) std::tie(s.min_nodes, s.max_nodes) = parse_range(*nodes);
    if (communities) s.num_communities = *communities;
    if (p) s.p_intra = *p;
    if (q) s.q_inter = *q;
    if ((pattern_p || pattern_q) && kind != "pattern")
      throw std::invalid_argument("--pattern-p/--pattern-q only apply to --kind pattern");
    if (s.pattern_block) {
      if (pattern_p) s.pattern_block->p_intra = *pattern_p;
      if (pattern_q) s.pattern_block->q_inter = *pattern_q;
    }
    if (seed) s.seed = *seed;
    s.validate();
    return s;
  }

  LabeledDataset generate() const {
    const SbmSpec s = resolve();
    return kind == "pattern" ? gen_pattern_like(s) : gen_cluster_like(s);
  }
};

// ---------------------------------------------------------------- commands

void print_family(const PatternFamily& family, std::ostream& out) {
  out << "# family=" << to_string(family.kind) << " max_order=" << family.max_order
      << " patterns=" << family.size() << '\n';
  for (const auto& p : family.patterns) {
    out << p.name << " root=" << p.root << " order=" << p.order() << " edges=";
    bool first = true;
    for (const Edge& e : p.structure.edges()) {
      out << (first ? "" : ",") << e.u << '-' << e.v;
      first = false;
    }
    out << '\n';
  }
}

RootedPattern resolve_oracle_pattern(const std::optional<std::string>& name,
                                     const std::optional<std::string>& custom) {
  if (!name) throw std::invalid_argument("--pattern is required");
  if (custom) {
    const PatternFamily family = parse_custom_family(fs::path(*custom));
    if (const RootedPattern* p = family.find(*name)) return *p;
    throw std::invalid_argument("pattern '" + *name + "' not found in " + *custom);
  }
  return pattern_from_name(*name);
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact weighted rooted homomorphism counts as node embeddings"};
  app.name(args.empty() ? "homcount" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  Logger log{err};

  // patterns
  auto* patterns = app.add_subcommand("patterns", "List a pattern family");
  std::string pattern_kind;
  std::size_t max_order = 0;
  std::optional<std::string> pattern_custom;
  patterns->add_option("--kind", pattern_kind, "trees, binary-trees, cycles or paths");
  patterns->add_option("--max-order", max_order, "Largest pattern order");
  patterns->add_option("--custom", pattern_custom, "Custom family file");

  // embed
  auto* embed = app.add_subcommand("embed", "Compute node embeddings");
  EmbedSettings embed_settings;
  embed_settings.add_options(*embed);
  std::optional<std::string> graph_file, features_file, dataset_dir, embed_out;
  std::optional<std::size_t> node_count;
  bool node_id = false;
  embed->add_option("--graph", graph_file, "Edge-list file");
  embed->add_option("--features", features_file, "Feature CSV for --graph");
  embed->add_option("--nodes", node_count, "Node count for --graph without features");
  embed->add_option("--dataset", dataset_dir, "Dataset directory (rows of all graphs stacked)");
  embed->add_option("--out", embed_out, "Output file (.csv or .bin); CSV to stdout if omitted");
  embed->add_flag("--node-id", node_id, "Lead CSV rows with a node_id column");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force ground-truth counts");
  std::optional<std::string> oracle_graph, oracle_features, oracle_pattern, oracle_custom;
  std::optional<std::size_t> oracle_node, oracle_nodes;
  std::size_t oracle_channel = 0;
  bool oracle_force = false;
  oracle->add_option("--graph", oracle_graph, "Edge-list file")->required();
  oracle->add_option("--features", oracle_features, "Feature CSV");
  oracle->add_option("--nodes", oracle_nodes, "Node count without features");
  oracle->add_option("--pattern", oracle_pattern, "Pattern name (C5, P3, tree4:0111, ... or a custom name)")
      ->required();
  oracle->add_option("--custom", oracle_custom, "Custom family file holding --pattern");
  oracle->add_option("--node", oracle_node, "Target node (default: all nodes)");
  oracle->add_option("--channel", oracle_channel, "Feature channel")->capture_default_str();
  oracle->add_flag("--force", oracle_force, "Ignore the enumeration size guard");

  // gen-sbm
  auto* gen = app.add_subcommand("gen-sbm", "Generate a synthetic SBM dataset");
  SbmSettings gen_settings;
  gen_settings.add_options(*gen, true);
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output directory")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Random-forest cross-validation of embeddings");
  EvalSettings eval_settings;
  eval_settings.add_options(*evaluate);
  std::vector<std::string> embedding_files;
  std::string labels_file;
  std::optional<std::string> report_file;
  std::size_t eval_threads = 0;
  evaluate->add_option("--embeddings", embedding_files, "Embedding files (columns concatenated)")->required();
  evaluate->add_option("--labels", labels_file, "Label file, one class per line")->required();
  evaluate->add_option("--report", report_file, "Report JSON path");
  evaluate->add_option("--threads", eval_threads, "Worker threads");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Generate or load data, embed, evaluate");
  EmbedSettings pipe_embed;
  pipe_embed.add_options(*pipeline);
  SbmSettings pipe_sbm;
  pipe_sbm.kind = "";
  pipeline->add_option("--kind", pipe_sbm.kind, "Generate a cluster or pattern dataset")
      ->check(CLI::IsMember({"cluster", "pattern"}));
  pipeline->add_option("--graphs", pipe_sbm.graphs, "Number of graphs");
  pipeline->add_option("--nodes", pipe_sbm.nodes, "Node-count range LO:HI");
  pipeline->add_option("--communities", pipe_sbm.communities, "Number of (background) communities");
  pipeline->add_option("--p", pipe_sbm.p, "Intra-community edge probability");
  pipeline->add_option("--q", pipe_sbm.q, "Inter-community edge probability");
  pipeline->add_option("--pattern-p", pipe_sbm.pattern_p, "Edge probability inside the pattern block");
  pipeline->add_option("--pattern-q", pipe_sbm.pattern_q, "Edge probability between pattern and background");
  pipeline->add_option("--data-seed", pipe_sbm.seed, "Seed of the generated dataset");
  std::optional<std::string> pipe_dataset;
  std::string pipe_out;
  pipeline->add_option("--dataset", pipe_dataset, "Existing dataset directory");
  pipeline->add_option("--out", pipe_out, "Output directory")->required();
  EvalSettings pipe_eval;
  pipe_eval.add_options(*pipeline);

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return usage_error;
  }

  if (patterns->parsed()) {
    PatternFamily family;
    if (pattern_custom) {
      family = parse_custom_family(fs::path(*pattern_custom));
    } else {
      if (pattern_kind.empty()) throw std::invalid_argument("patterns needs --kind or --custom");
      family = enumerate_family(parse_family_kind(pattern_kind), max_order);
    }
    print_family(family, out);
    return ok;
  }

  if (embed->parsed()) {
    if (graph_file.has_value() == dataset_dir.has_value())
      throw std::invalid_argument("embed needs exactly one of --graph or --dataset");
    std::vector<FeaturedGraph> graphs;
    if (graph_file) {
      std::optional<fs::path> features;
      if (features_file) features = *features_file;
      graphs.push_back(load_graph(*graph_file, features, node_count));
    } else {
      graphs = load_dataset(*dataset_dir).graphs;
    }
    const std::size_t threads = embed_settings.threads ? embed_settings.threads : default_threads();
    const auto result = build_embedding(graphs, embed_settings, threads, log);
    if (embed_out) {
      if (fs::path(*embed_out).has_parent_path()) fs::create_directories(fs::path(*embed_out).parent_path());
      save_embedding(result.embedding, *embed_out, node_id);
      json resolved{{"subcommand", "embed"},
                    {"graph", graph_file ? json(*graph_file) : json(nullptr)},
                    {"features", features_file ? json(*features_file) : json(nullptr)},
                    {"dataset", dataset_dir ? json(*dataset_dir) : json(nullptr)},
                    {"output", *embed_out},
                    {"embedding", embed_settings.to_json()},
                    {"family_results", result.families}};
      write_text(fs::path(*embed_out).parent_path() / "run.resolved.json", resolved.dump(2) + "\n");
    } else {
      write_embedding_csv(result.embedding, out, node_id);
    }
    return ok;
  }

  if (oracle->parsed()) {
    std::optional<fs::path> features;
    if (oracle_features) features = *oracle_features;
    const FeaturedGraph g = load_graph(*oracle_graph, features, oracle_nodes);
    const RootedPattern pattern = resolve_oracle_pattern(oracle_pattern, oracle_custom);
    const OracleLimits limits{.force = oracle_force};
    std::vector<NodeId> nodes;
    if (oracle_node) {
      if (*oracle_node >= g.num_nodes()) throw std::invalid_argument("--node outside the graph");
      nodes.push_back(*oracle_node);
    } else {
      for (NodeId v = 0; v < g.num_nodes(); ++v) nodes.push_back(v);
    }
    for (NodeId v : nodes) {
      if (g.is_plain())
        out << v << ' ' << brute_force_rooted_exact(g, pattern, v, limits) << '\n';
      else
        out << v << ' ' << format_double(brute_force_rooted(g, oracle_channel, pattern, v, limits)) << '\n';
    }
    return ok;
  }

  if (gen->parsed()) {
    const LabeledDataset ds = gen_settings.generate();
    save_dataset(ds, gen_out);
    log("gen-sbm", "kind=" + gen_settings.kind + " graphs=" + std::to_string(ds.graphs.size()) +
                       " nodes=" + std::to_string(ds.total_nodes()) + " out=" + gen_out);
    return ok;
  }

  if (evaluate->parsed()) {
    std::vector<EmbeddingMatrix> parts;
    for (const auto& f : embedding_files) parts.push_back(load_embedding(f));
    const EmbeddingMatrix x = concat_ensemble(parts);
    const auto labels = load_labels(labels_file);
    if (labels.size() != x.rows())
      throw DataError("embedding has " + std::to_string(x.rows()) + " rows but " + std::to_string(labels.size()) +
                      " labels were given");
    const std::size_t threads = eval_threads ? eval_threads : default_threads();
    const auto start = Clock::now();
    const EvalReport report = stratified_cv(x, labels, eval_settings.folds, eval_settings.forest(threads),
                                            eval_settings.reps);
    log("evaluate", "columns=" + std::to_string(x.cols()) + " rows=" + std::to_string(x.rows()) +
                        " seconds=" + std::to_string(std::chrono::duration<double>(Clock::now() - start).count()));
    out << "accuracy " << report.accuracy_mean << " +- " << report.accuracy_std << '\n'
        << "weighted_accuracy " << report.weighted_accuracy_mean << " +- " << report.weighted_accuracy_std << '\n';
    if (report_file) {
      write_text(*report_file, report.to_json());
      json resolved{{"subcommand", "evaluate"},
                    {"embeddings", embedding_files},
                    {"labels", labels_file},
                    {"report", *report_file},
                    {"evaluation", eval_settings.to_json()}};
      write_text(fs::path(*report_file).parent_path() / "run.resolved.json", resolved.dump(2) + "\n");
    }
    return ok;
  }

  if (pipeline->parsed()) {
    if (pipe_dataset.has_value() == !pipe_sbm.kind.empty())
      throw std::invalid_argument("pipeline needs exactly one of --dataset or --kind");
    const fs::path out_dir = pipe_out;
    fs::create_directories(out_dir);
    LabeledDataset ds;
    json data_json;
    if (pipe_dataset) {
      ds = load_dataset(*pipe_dataset);
      data_json = {{"dataset", *pipe_dataset}};
    } else {
      ds = pipe_sbm.generate();
      save_dataset(ds, out_dir / "dataset");
      const SbmSpec s = pipe_sbm.resolve();
      data_json = {{"kind", pipe_sbm.kind},       {"graphs", s.num_graphs},     {"min_nodes", s.min_nodes},
                   {"max_nodes", s.max_nodes},    {"communities", s.num_communities},
                   {"p", s.p_intra},              {"q", s.q_inter},             {"seed", s.seed}};
      if (s.pattern_block) {
        data_json["pattern_p"] = s.pattern_block->p_intra;
        data_json["pattern_q"] = s.pattern_block->q_inter;
      }
    }
    const std::size_t threads = pipe_embed.threads ? pipe_embed.threads : default_threads();
    const auto result = build_embedding(ds.graphs, pipe_embed, threads, log);
    save_embedding(result.embedding, out_dir / "embeddings.csv");
    const auto labels = ds.flat_labels();
    {
      std::ofstream lf(out_dir / "labels.txt");
      write_labels(labels, lf);
    }
    const auto start = Clock::now();
    const EvalReport report =
        stratified_cv(result.embedding, labels, pipe_eval.folds, pipe_eval.forest(threads), pipe_eval.reps);
    log("evaluate", "columns=" + std::to_string(result.embedding.cols()) +
                        " rows=" + std::to_string(result.embedding.rows()) +
                        " seconds=" + std::to_string(std::chrono::duration<double>(Clock::now() - start).count()));
    write_text(out_dir / "report.json", report.to_json());
    json resolved{{"subcommand", "pipeline"},
                  {"data", data_json},
                  {"embedding", pipe_embed.to_json()},
                  {"family_results", result.families},
                  {"evaluation", pipe_eval.to_json()},
                  {"outputs", {"embeddings.csv", "labels.txt", "report.json"}}};
    write_text(out_dir / "run.resolved.json", resolved.dump(2) + "\n");
    out << "accuracy " << report.accuracy_mean << " +- " << report.accuracy_std << '\n'
        << "weighted_accuracy " << report.weighted_accuracy_mean << " +- " << report.weighted_accuracy_std << '\n';
    return ok;
  }
  return usage_error;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << '\n';
    return size_guard;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const nlohmann::json::exception& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return data_error;
  }
}

}  // namespace homcount::cli
