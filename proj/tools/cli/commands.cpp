#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "intentmine/dbscan.hpp"
#include "intentmine/error.hpp"
#include "intentmine/io.hpp"
#include "intentmine/iter_dbscan.hpp"
#include "intentmine/metrics.hpp"
#include "intentmine/partition.hpp"
#include "intentmine/propagate.hpp"
#include "intentmine/session.hpp"
#include "intentmine/synthetic.hpp"
#include "service/http_server.hpp"

namespace intentmine::cli {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return out;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto body = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ClusterFlags {
  IterDbscanParams params;
  std::string algorithm = "iter";
  std::size_t partition_threshold = kPartitionCellSize;
  std::size_t parallelism = 1;
  std::uint64_t seed = 0;
};

void add_cluster_flags(CLI::App* cmd, ClusterFlags& f) {
  cmd->add_option("--initial-distance", f.params.initial_min_distance, "Initial max cosine distance (eps)")
      ->capture_default_str();
  cmd->add_option("--initial-min-points", f.params.initial_number_of_points, "Initial min points (K)")
      ->capture_default_str();
  cmd->add_option("--delta-distance", f.params.delta_min_distance, "Eps increment per iteration")
      ->capture_default_str();
  cmd->add_option("--delta-points", f.params.delta_number_of_points, "Min-points decrement per iteration")
      ->capture_default_str();
  cmd->add_option("--min-points", f.params.min_points, "Min-points floor; reaching it stops the loop")
      ->capture_default_str();
  cmd->add_option("--max-iteration", f.params.max_iteration, "Maximum number of rounds")->capture_default_str();
  cmd->add_option("--min-cluster-size", f.params.min_cluster_size, "Smaller clusters become noise")
      ->capture_default_str();
  cmd->add_option("--partition-threshold", f.partition_threshold, "Partition with k-means above this size")
      ->capture_default_str();
  cmd->add_option("--parallelism", f.parallelism, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for every random choice")->capture_default_str();
}

io::RunManifest start_manifest(const std::string& command, const std::string& input, const json& parameters,
                               std::uint64_t seed) {
  io::RunManifest m;
  m.command = command;
  m.dataset_path = input;
  m.dataset_sha256 = io::sha256_file(input);
  m.parameters = parameters;
  m.seed = seed;
  m.started_at = io::utc_timestamp();
  return m;
}

void finish_manifest(io::RunManifest& m, const std::string& path) {
  m.finished_at = io::utc_timestamp();
  io::write_manifest(path, m);
}

// ---------------------------------------------------------------- cluster

int cmd_cluster(const std::string& input, const std::string& output, const ClusterFlags& f, std::ostream& out) {
  f.params.validate();
  if (f.algorithm != "iter" && f.algorithm != "dbscan") {
    throw Error(ErrorCode::InvalidParams, "--algorithm must be iter or dbscan");
  }
  json parameters = io::to_json(f.params);
  parameters["algorithm"] = f.algorithm;
  parameters["partition_threshold"] = f.partition_threshold;
  auto manifest = start_manifest("cluster", input, parameters, f.seed);

  const Dataset dataset = io::read_jsonl(input);
  PartitionedResult result;
  if (f.algorithm == "dbscan") {
    const DbscanParams single{f.params.initial_min_distance, f.params.initial_number_of_points,
                              f.params.min_cluster_size};
    result.assignment = run_dbscan(dataset, single);
    result.traces.push_back({IterationRound{1, single.eps, single.min_pts, result.assignment.num_clusters,
                                            result.assignment.noise_count()}});
  } else {
    result = cluster_partitioned(dataset, f.params, {f.partition_threshold, f.parallelism, f.seed});
  }

  io::write_assignment(output, dataset, result.assignment, result.traces);
  manifest.outputs = {output, io::trace_path(output).string()};
  finish_manifest(manifest, output + ".manifest.json");

  out << "records: " << dataset.size() << '\n'
      << "partitions: " << result.traces.size() << '\n'
      << "clusters: " << result.assignment.num_clusters << '\n'
      << "noise_fraction: " << fmt_double(result.assignment.noise_fraction()) << '\n'
      << "assignment: " << output << '\n';
  return kOk;
}

// ---------------------------------------------------------------- evaluate

void print_report(std::ostream& out, const EvalReport& r) {
  const auto names = eval_report_columns();
  const auto values = eval_report_values(r);
  for (std::size_t k = 0; k < names.size(); ++k) out << names[k] << ": " << values[k] << '\n';
}

int cmd_evaluate(const std::string& input, const std::string& assignment_path, bool exclude_noise,
                 const std::string& json_out, const std::string& csv_out, std::ostream& out) {
  const Dataset dataset = io::read_jsonl(input);
  if (!dataset.has_gold_labels()) throw Error(ErrorCode::LabelsMissing, input + " has records without a label");
  const ClusterAssignment assignment = io::read_assignment(assignment_path, dataset);
  const auto gold = dataset.gold_ids();
  const EvalReport report =
      evaluate(gold, assignment.labels, exclude_noise ? NoiseMode::Exclude : NoiseMode::Singleton);

  print_report(out, report);
  if (!json_out.empty()) io::write_file_atomic(json_out, to_json(report).dump(2) + "\n");
  if (!csv_out.empty()) {
    auto csv = open_out(csv_out);
    std::vector<std::string> header{"dataset"}, row{input};
    for (auto& c : eval_report_columns()) header.push_back(c);
    for (auto& v : eval_report_values(report)) row.push_back(v);
    io::write_csv_row(csv, header);
    io::write_csv_row(csv, row);
  }
  return kOk;
}

// ---------------------------------------------------------------- grid

std::vector<std::string> grid_columns() {
  std::vector<std::string> cols{"row",
                                "dataset",
                                "initial_min_distance",
                                "initial_number_of_points",
                                "delta_min_distance",
                                "delta_number_of_points",
                                "min_points",
                                "max_iteration",
                                "min_cluster_size",
                                "iterations_run"};
  for (auto& c : eval_report_columns()) cols.push_back(c);
  return cols;
}

int cmd_grid(const std::string& input, const std::string& grid_file, const std::string& output,
             std::size_t parallelism, bool exclude_noise, const std::string& sort_by, std::uint64_t seed,
             std::ostream& out) {
  std::vector<IterDbscanParams> grid;
  if (grid_file.empty()) {
    grid = default_grid();
  } else {
    const json doc = json::parse(io::read_file(grid_file), nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) throw Error(ErrorCode::ParseError, grid_file + ": expected a JSON array");
    for (const auto& p : doc) grid.push_back(io::params_from_json(p));
  }
  for (const auto& p : grid) p.validate();
  if (sort_by != "none" && sort_by != "nmi") throw Error(ErrorCode::InvalidParams, "--sort-by must be none or nmi");

  json parameters = {{"grid", grid_file.empty() ? "default" : grid_file},
                     {"exclude_noise", exclude_noise},
                     {"sort_by", sort_by}};
  auto manifest = start_manifest("grid", input, parameters, seed);

  const Dataset dataset = io::read_jsonl(input);
  if (!dataset.has_gold_labels()) throw Error(ErrorCode::LabelsMissing, input + " has records without a label");
  const auto gold = dataset.gold_ids();
  const NoiseMode mode = exclude_noise ? NoiseMode::Exclude : NoiseMode::Singleton;

  struct Row {
    std::size_t index = 0;
    std::size_t iterations = 0;
    EvalReport report;
  };
  std::vector<Row> rows(grid.size());
  // Configurations run concurrently; each row lands in its own slot, so the
  // output order is the grid order regardless of scheduling.
  parallel_for(grid.size(), parallelism, [&](std::size_t i) {
    const auto result = cluster_partitioned(dataset, grid[i], {kPartitionCellSize, 1, seed});
    std::size_t iterations = 0;
    for (const auto& t : result.traces) iterations = std::max(iterations, t.size());
    rows[i] = Row{i, iterations, evaluate(gold, result.assignment.labels, mode)};
  });
  if (sort_by == "nmi") {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.report.nmi > b.report.nmi; });
  }

  std::ostringstream csv;
  io::write_csv_row(csv, grid_columns());
  for (const auto& r : rows) {
    const auto& p = grid[r.index];
    std::vector<std::string> fields{std::to_string(r.index),
                                    input,
                                    fmt_double(p.initial_min_distance),
                                    std::to_string(p.initial_number_of_points),
                                    fmt_double(p.delta_min_distance),
                                    std::to_string(p.delta_number_of_points),
                                    std::to_string(p.min_points),
                                    std::to_string(p.max_iteration),
                                    std::to_string(p.min_cluster_size),
                                    std::to_string(r.iterations)};
    for (auto& v : eval_report_values(r.report)) fields.push_back(v);
    io::write_csv_row(csv, fields);
  }

  if (output.empty() || output == "-") {
    out << csv.str();
  } else {
    io::write_file_atomic(output, csv.str());
    manifest.outputs = {output};
    finish_manifest(manifest, output + ".manifest.json");
    const auto best = std::max_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return a.report.nmi < b.report.nmi;
    });
    out << "rows: " << rows.size() << '\n';
    if (best != rows.end()) {
      out << "best_row: " << best->index << " nmi: " << fmt_double(best->report.nmi)
          << " ari: " << fmt_double(best->report.ari) << " intents_found: " << best->report.intents_found << "/"
          << best->report.intents_total << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- propagate / export

LabelState state_from_cluster_labels(const std::string& labels_path, const ClusterAssignment& assignment) {
  const json doc = json::parse(io::read_file(labels_path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::ParseError, labels_path + ": expected {\"<cluster id>\": \"<intent>\", ...}");
  }
  LabelState state = LabelState::unlabeled(assignment.labels.size());
  for (const auto& [key, intent] : doc.items()) {
    int cluster = -1;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), cluster);
    if (ec != std::errc() || ptr != key.data() + key.size() || !intent.is_string()) {
      throw Error(ErrorCode::ParseError, labels_path + ": bad entry '" + key + "'");
    }
    state.label_cluster(cluster, intent.get<std::string>(), assignment);
  }
  return state;
}

void write_corpus_outputs(const LabeledCorpus& corpus, const Dataset& dataset, const std::string& output,
                          const std::string& csv_path, const std::string& unlabeled_path, std::ostream& out) {
  if (output.empty() || output == "-") {
    io::write_corpus_jsonl(out, corpus);
  } else {
    std::ostringstream body;
    io::write_corpus_jsonl(body, corpus);
    io::write_file_atomic(output, body.str());
  }
  if (!csv_path.empty()) {
    std::ostringstream body;
    io::write_corpus_csv(body, corpus);
    io::write_file_atomic(csv_path, body.str());
  }
  if (!unlabeled_path.empty()) {
    std::ostringstream body;
    for (std::size_t i : corpus.unlabeled) body << json{{"id", dataset[i].id}, {"text", dataset[i].text}}.dump() << '\n';
    io::write_file_atomic(unlabeled_path, body.str());
  }
}

struct PropagateFlags {
  std::string input, assignment, labels, state_out, output, csv, unlabeled;
  double threshold = 0.7;
  TrainConfig training;
};

int cmd_propagate(const PropagateFlags& f, std::ostream& out, std::ostream& err) {
  if (!(f.threshold >= 0.0 && f.threshold <= 1.0)) throw Error(ErrorCode::InvalidParams, "--threshold must be in [0, 1]");
  json parameters = {{"threshold", f.threshold},
                     {"learning_rate", f.training.learning_rate},
                     {"epochs", f.training.epochs},
                     {"l2", f.training.l2},
                     {"assignment", f.assignment},
                     {"labels", f.labels}};
  auto manifest = start_manifest("propagate", f.input, parameters, f.training.seed);

  const Dataset dataset = io::read_jsonl(f.input);
  const ClusterAssignment assignment = io::read_assignment(f.assignment, dataset);
  const LabelState seeded = state_from_cluster_labels(f.labels, assignment);

  std::vector<std::optional<std::string>> targets(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (seeded.utterance_labels[i]) targets[i] = seeded.utterance_labels[i]->intent;
  }
  const TrainResult trained = train_classifier(dataset, targets, f.training);
  if (!trained.converged) err << "warning: " << trained.warning << '\n';
  const LabelState state = propagate_labels(trained.model, dataset, seeded, f.threshold);

  if (!f.state_out.empty()) io::write_label_state(f.state_out, state);
  const LabeledCorpus corpus = export_training_data(dataset, state);
  std::ostringstream summary;
  summary << "cluster_labeled: " << state.count(LabelSource::Cluster) << '\n'
          << "propagated: " << state.count(LabelSource::Propagated) << '\n'
          << "remaining_unlabeled: " << state.unlabeled_count() << '\n'
          << "training_accuracy: " << fmt_double(trained.training_accuracy) << '\n';

  if (f.output.empty() || f.output == "-") {
    write_corpus_outputs(corpus, dataset, f.output, f.csv, f.unlabeled, out);
    err << summary.str();
  } else {
    write_corpus_outputs(corpus, dataset, f.output, f.csv, f.unlabeled, out);
    manifest.outputs = {f.output};
    if (!f.state_out.empty()) manifest.outputs.push_back(f.state_out);
    finish_manifest(manifest, f.output + ".manifest.json");
    out << summary.str();
  }
  return kOk;
}

int cmd_export(const std::string& input, const std::string& state_path, const std::string& output,
               const std::string& csv, const std::string& unlabeled, std::ostream& out) {
  const Dataset dataset = io::read_jsonl(input);
  const LabelState state = io::read_label_state(state_path);
  const LabeledCorpus corpus = export_training_data(dataset, state);
  write_corpus_outputs(corpus, dataset, output, csv, unlabeled, out);
  if (!output.empty() && output != "-") {
    out << "labeled: " << corpus.labeled.size() << '\n' << "unlabeled: " << corpus.unlabeled.size() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(const std::vector<std::size_t>& sizes, const ClusterFlags& f, std::size_t dimension, int repeat,
              const std::string& output, std::ostream& out) {
  f.params.validate();
  if (repeat < 1) throw Error(ErrorCode::InvalidParams, "--repeat must be >= 1");
  std::ostringstream csv;
  const std::vector<std::string> header{"size", "wall_seconds", "partitions", "clusters", "noise_fraction"};
  io::write_csv_row(csv, header);
  for (std::size_t n : sizes) {
    const Dataset dataset = synthetic::make_benchmark_dataset(n, f.seed, dimension);
    // Best of `repeat` timings; the clustering itself is identical every time.
    PartitionedResult result;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < repeat; ++r) {
      const auto start = std::chrono::steady_clock::now();
      result = cluster_partitioned(dataset, f.params, {f.partition_threshold, f.parallelism, f.seed});
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      best = std::min(best, elapsed.count());
    }
    const std::vector<std::string> row{std::to_string(n), fmt_double(best),
                                       std::to_string(result.traces.size()),
                                       std::to_string(result.assignment.num_clusters),
                                       fmt_double(result.assignment.noise_fraction())};
    io::write_csv_row(csv, row);
  }
  if (output.empty() || output == "-") {
    out << csv.str();
  } else {
    io::write_file_atomic(output, csv.str());
    out << "rows: " << sizes.size() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- serve / synth

int cmd_serve(const std::string& input, const std::string& assignment, const std::string& state, const std::string& host,
              int port, double threshold, std::uint64_t seed, std::ostream& out) {
  api::SessionOptions options;
  if (!state.empty()) options.state_path = state;
  options.default_threshold = threshold;
  options.training.seed = seed;
  api::Session session(options);
  if (!input.empty()) {
    Dataset dataset = io::read_jsonl(input);
    ClusterAssignment a = io::read_assignment(assignment, dataset);
    session.load(std::move(dataset), std::move(a));
  }
  out << "listening on http://" << host << ":" << port << std::endl;
  if (!service::serve(session, host, port)) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return kOk;
}

int cmd_synth(const std::string& output, const std::vector<std::size_t>& blob_sizes, double spread,
              std::size_t dimension, std::uint64_t seed, std::ostream& out) {
  std::vector<synthetic::Blob> blobs;
  for (std::size_t s : blob_sizes) blobs.push_back({s, spread});
  const Dataset dataset = synthetic::make_blob_dataset(dimension, blobs, seed);
  io::write_jsonl(output, dataset);
  out << "records: " << dataset.size() << '\n' << "output: " << output << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density-based intent discovery: cluster, evaluate, label and propagate.", "intentmine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(INTENTMINE_VERSION));

  std::string input, output, assignment, grid_file, state, csv, unlabeled, host = "127.0.0.1", sort_by = "none";
  std::string json_out;
  bool exclude_noise = false;
  ClusterFlags cluster_flags;
  std::size_t dimension = 32;
  std::vector<std::size_t> sizes;

  auto* cluster = app.add_subcommand("cluster", "Cluster a dataset with iterative DBSCAN");
  cluster->add_option("--input", input, "Dataset JSONL")->required();
  std::string cluster_output = "clusters.jsonl";
  cluster->add_option("--output", cluster_output, "Assignment JSONL (trace and manifest are written next to it)")
      ->capture_default_str();
  cluster->add_option("--algorithm", cluster_flags.algorithm, "iter, or dbscan for a single plain DBSCAN pass")
      ->capture_default_str();
  add_cluster_flags(cluster, cluster_flags);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score an assignment against gold labels");
  evaluate_cmd->add_option("--input", input, "Dataset JSONL with labels")->required();
  evaluate_cmd->add_option("--assignment", assignment, "Assignment JSONL")->required();
  evaluate_cmd->add_flag("--exclude-noise", exclude_noise, "Drop noise points instead of scoring them as singletons");
  evaluate_cmd->add_option("--json", json_out, "Write the report as JSON");
  evaluate_cmd->add_option("--csv", csv, "Write the report as a one-row CSV");

  auto* grid = app.add_subcommand("grid", "Run a parameter grid and report one CSV row per configuration");
  grid->add_option("--input", input, "Dataset JSONL with labels")->required();
  grid->add_option("--grid", grid_file, "JSON array of parameter objects (default: built-in 480-point grid)");
  grid->add_option("--output", output, "CSV path, '-' for stdout");
  grid->add_option("--parallelism", cluster_flags.parallelism, "Configurations evaluated concurrently")
      ->check(CLI::PositiveNumber);
  grid->add_flag("--exclude-noise", exclude_noise, "Drop noise points when scoring");
  grid->add_option("--sort-by", sort_by, "none or nmi (descending, stable)")->capture_default_str();
  grid->add_option("--seed", cluster_flags.seed, "Seed for partitioning")->capture_default_str();

  PropagateFlags prop;
  auto* propagate_cmd = app.add_subcommand("propagate", "Train on labeled clusters and label the rest");
  propagate_cmd->add_option("--input", prop.input, "Dataset JSONL")->required();
  propagate_cmd->add_option("--assignment", prop.assignment, "Assignment JSONL")->required();
  propagate_cmd->add_option("--labels", prop.labels, "JSON object mapping cluster id to intent")->required();
  propagate_cmd->add_option("--threshold", prop.threshold, "Minimum confidence to accept a label")->capture_default_str();
  propagate_cmd->add_option("--seed", prop.training.seed, "Classifier initialization seed")->capture_default_str();
  propagate_cmd->add_option("--epochs", prop.training.epochs)->capture_default_str();
  propagate_cmd->add_option("--learning-rate", prop.training.learning_rate)->capture_default_str();
  propagate_cmd->add_option("--l2", prop.training.l2)->capture_default_str();
  propagate_cmd->add_option("--state-out", prop.state_out, "Write the resulting label state JSON");
  propagate_cmd->add_option("--output", prop.output, "Labeled corpus JSONL, '-' for stdout");
  propagate_cmd->add_option("--csv", prop.csv, "Also write a text,intent CSV");
  propagate_cmd->add_option("--unlabeled", prop.unlabeled, "Write the still-unlabeled records as JSONL");

  auto* export_cmd = app.add_subcommand("export", "Export a label state as training data");
  export_cmd->add_option("--input", input, "Dataset JSONL")->required();
  export_cmd->add_option("--state", state, "Label state JSON")->required();
  export_cmd->add_option("--output", output, "Corpus JSONL, '-' for stdout");
  export_cmd->add_option("--csv", csv, "Also write a text,intent CSV");
  export_cmd->add_option("--unlabeled", unlabeled, "Write the unlabeled records as JSONL");

  auto* bench = app.add_subcommand("bench", "Time partitioned clustering on synthetic data");
  bench->add_option("--sizes", sizes, "Dataset sizes")->delimiter(',')->required();
  bench->add_option("--dimension", dimension, "Embedding dimension")->capture_default_str();
  bench->add_option("--output", output, "CSV path, '-' for stdout");
  int repeat = 1;
  bench->add_option("--repeat", repeat, "Timed runs per size; the fastest is reported")->capture_default_str();
  add_cluster_flags(bench, cluster_flags);

  int port = 8080;
  double threshold = 0.7;
  auto* serve = app.add_subcommand("serve", "Serve the labeling API");
  serve->add_option("--input", input, "Dataset JSONL (optional, can be loaded via POST /session)");
  serve->add_option("--assignment", assignment, "Assignment JSONL");
  serve->add_option("--state", state, "Label state file, persisted after every change");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--threshold", threshold, "Default propagation threshold")->capture_default_str();
  serve->add_option("--seed", cluster_flags.seed, "Classifier seed")->capture_default_str();

  std::vector<std::size_t> blob_sizes;
  double spread = 0.05;
  auto* synth = app.add_subcommand("synth", "Write a synthetic labeled dataset of gaussian blobs");
  synth->add_option("--output", output, "Dataset JSONL")->required();
  synth->add_option("--blobs", blob_sizes, "Blob sizes")->delimiter(',')->required();
  synth->add_option("--spread", spread)->capture_default_str();
  synth->add_option("--dimension", dimension)->capture_default_str();
  synth->add_option("--seed", cluster_flags.seed)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*cluster) return cmd_cluster(input, cluster_output, cluster_flags, out);
    if (*evaluate_cmd) return cmd_evaluate(input, assignment, exclude_noise, json_out, csv, out);
    if (*grid) {
      return cmd_grid(input, grid_file, output, cluster_flags.parallelism, exclude_noise, sort_by, cluster_flags.seed, out);
    }
    if (*propagate_cmd) return cmd_propagate(prop, out, err);
    if (*export_cmd) return cmd_export(input, state, output, csv, unlabeled, out);
    if (*bench) return cmd_bench(sizes, cluster_flags, dimension, repeat, output, out);
    if (*serve) {
      if (!input.empty() && assignment.empty()) throw Error(ErrorCode::InvalidParams, "--input needs --assignment");
      return cmd_serve(input, assignment, state, host, port, threshold, cluster_flags.seed, out);
    }
    if (*synth) return cmd_synth(output, blob_sizes, spread, dimension, cluster_flags.seed, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidParams ? kUsage : kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace intentmine::cli
