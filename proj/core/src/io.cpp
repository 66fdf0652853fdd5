#include "intentmine/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "intentmine/error.hpp"

namespace intentmine::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + why);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Dataset parse_jsonl(std::istream& in) {
  std::vector<UtteranceRecord> records;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(lineno, e.what());
    }
    if (!obj.is_object()) parse_error(lineno, "expected a JSON object");

    UtteranceRecord r;
    const auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) parse_error(lineno, "missing string \"id\"");
    r.id = id->get<std::string>();
    const auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) parse_error(lineno, "missing string \"text\"");
    r.text = text->get<std::string>();
    const auto emb = obj.find("embedding");
    if (emb == obj.end() || !emb->is_array()) parse_error(lineno, "missing array \"embedding\"");
    r.embedding.reserve(emb->size());
    for (const auto& v : *emb) {
      if (!v.is_number()) parse_error(lineno, "non-numeric embedding component");
      r.embedding.push_back(v.get<double>());
    }
    if (const auto label = obj.find("label"); label != obj.end() && !label->is_null()) {
      if (!label->is_string()) parse_error(lineno, "\"label\" must be a string");
      r.gold_label = label->get<std::string>();
    }
    records.push_back(std::move(r));
    line_of.push_back(lineno);
  }

  try {
    return validate_dataset(std::move(records));
  } catch (const Error& e) {
    if (!e.record() || *e.record() >= line_of.size()) throw;
    const std::string detail = std::string(e.what()).substr(to_string(e.code()).size() + 2);
    throw Error(e.code(), detail + " (line " + std::to_string(line_of[*e.record()]) + ")", *e.record());
  }
}

Dataset read_jsonl(const fs::path& path) {
  auto in = open_in(path);
  return parse_jsonl(in);
}

void write_jsonl(const fs::path& path, const Dataset& dataset) {
  std::ostringstream out;
  for (const auto& r : dataset.records()) {
    json obj = {{"id", r.id}, {"text", r.text}, {"embedding", r.embedding}};
    if (r.gold_label) obj["label"] = *r.gold_label;
    out << obj.dump() << '\n';
  }
  write_file_atomic(path, out.str());
}

fs::path trace_path(const fs::path& assignment_path) {
  return fs::path(assignment_path.string() + ".trace.json");
}

json to_json(const IterDbscanParams& p) {
  return {{"initial_min_distance", p.initial_min_distance},
          {"initial_number_of_points", p.initial_number_of_points},
          {"delta_min_distance", p.delta_min_distance},
          {"delta_number_of_points", p.delta_number_of_points},
          {"min_points", p.min_points},
          {"max_iteration", p.max_iteration},
          {"min_cluster_size", p.min_cluster_size}};
}

IterDbscanParams params_from_json(const json& j) {
  IterDbscanParams p;
  try {
    p.initial_min_distance = j.value("initial_min_distance", p.initial_min_distance);
    p.initial_number_of_points = j.value("initial_number_of_points", p.initial_number_of_points);
    p.delta_min_distance = j.value("delta_min_distance", p.delta_min_distance);
    p.delta_number_of_points = j.value("delta_number_of_points", p.delta_number_of_points);
    p.min_points = j.value("min_points", p.min_points);
    p.max_iteration = j.value("max_iteration", p.max_iteration);
    p.min_cluster_size = j.value("min_cluster_size", p.min_cluster_size);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("parameters: ") + e.what());
  }
  return p;
}

json to_json(const IterationTrace& trace) {
  json rounds = json::array();
  for (const auto& r : trace) {
    rounds.push_back({{"iteration", r.iteration},
                      {"eps", r.eps},
                      {"min_pts", r.min_pts},
                      {"clusters_found", r.clusters_found},
                      {"noise_remaining", r.noise_remaining}});
  }
  return rounds;
}

IterationTrace trace_from_json(const json& j) {
  IterationTrace trace;
  for (const auto& r : j) {
    trace.push_back(IterationRound{r.at("iteration").get<int>(), r.at("eps").get<double>(),
                                   r.at("min_pts").get<int>(), r.at("clusters_found").get<int>(),
                                   r.at("noise_remaining").get<std::size_t>()});
  }
  return trace;
}

void write_assignment(const fs::path& path, const Dataset& dataset, const ClusterAssignment& assignment,
                      std::span<const IterationTrace> traces) {
  if (assignment.labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "assignment does not match dataset");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << json{{"id", dataset[i].id}, {"cluster", assignment.labels[i]}}.dump() << '\n';
  }
  write_file_atomic(path, out.str());

  json partitions = json::array();
  for (const auto& t : traces) partitions.push_back(to_json(t));
  const json sidecar = {{"num_clusters", assignment.num_clusters},
                        {"noise", assignment.noise_count()},
                        {"partitions", partitions}};
  write_file_atomic(trace_path(path), sidecar.dump(2) + "\n");
}

void write_assignment(const fs::path& path, const Dataset& dataset, const ClusterAssignment& assignment,
                      const IterationTrace& trace) {
  write_assignment(path, dataset, assignment, std::span<const IterationTrace>(&trace, 1));
}

ClusterAssignment read_assignment(const fs::path& path, const Dataset& dataset) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(lineno, e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("cluster") || !obj["id"].is_string() ||
        !obj["cluster"].is_number_integer()) {
      parse_error(lineno, "expected {\"id\": string, \"cluster\": integer}");
    }
    const std::size_t i = labels.size();
    if (i >= dataset.size()) parse_error(lineno, "more rows than dataset records");
    if (obj["id"].get<std::string>() != dataset[i].id) {
      parse_error(lineno, "id '" + obj["id"].get<std::string>() + "' does not match record '" + dataset[i].id + "'");
    }
    labels.push_back(obj["cluster"].get<int>());
  }
  if (labels.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(labels.size()) + " assignments for " + std::to_string(dataset.size()) + " records");
  }
  return normalize_assignment(labels);
}

std::vector<IterationTrace> read_traces(const fs::path& assignment_path) {
  const json sidecar = json::parse(read_file(trace_path(assignment_path)), nullptr, false);
  if (sidecar.is_discarded() || !sidecar.contains("partitions")) {
    throw Error(ErrorCode::ParseError, trace_path(assignment_path).string());
  }
  std::vector<IterationTrace> out;
  for (const auto& t : sidecar["partitions"]) out.push_back(trace_from_json(t));
  return out;
}

json to_json(const LabelState& state) {
  json clusters = json::object();
  for (const auto& [id, intent] : state.cluster_labels) clusters[std::to_string(id)] = intent;
  json rows = json::array();
  for (const auto& l : state.utterance_labels) {
    if (!l) {
      rows.push_back(nullptr);
    } else {
      rows.push_back({{"intent", l->intent}, {"confidence", l->confidence}, {"source", to_string(l->source)}});
    }
  }
  return {{"cluster_labels", clusters}, {"utterance_labels", rows}};
}

LabelState label_state_from_json(const json& j) {
  LabelState s;
  try {
    for (const auto& [key, intent] : j.at("cluster_labels").items()) {
      s.cluster_labels[std::stoi(key)] = intent.get<std::string>();
    }
    for (const auto& row : j.at("utterance_labels")) {
      if (row.is_null()) {
        s.utterance_labels.emplace_back();
      } else {
        s.utterance_labels.emplace_back(UtteranceLabel{row.at("intent").get<std::string>(),
                                                       row.at("confidence").get<double>(),
                                                       label_source_from_string(row.at("source").get<std::string>())});
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("label state: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ParseError, std::string("label state: ") + e.what());
  }
  return s;
}

void write_label_state(const fs::path& path, const LabelState& state) {
  write_file_atomic(path, to_json(state).dump() + "\n");
}

LabelState read_label_state(const fs::path& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, path.string());
  return label_state_from_json(j);
}

void write_corpus_jsonl(std::ostream& out, const LabeledCorpus& corpus) {
  for (const auto& row : corpus.labeled) {
    out << json{{"id", row.id},
                {"text", row.text},
                {"intent", row.intent},
                {"confidence", row.confidence},
                {"source", to_string(row.source)}}
               .dump()
        << '\n';
  }
}

void write_corpus_csv(std::ostream& out, const LabeledCorpus& corpus) {
  const std::vector<std::string> header{"text", "intent"};
  write_csv_row(out, header);
  for (const auto& row : corpus.labeled) {
    const std::vector<std::string> fields{row.text, row.intent};
    write_csv_row(out, fields);
  }
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out << ',';
    out << csv_escape(fields[k]);
  }
  out << '\n';
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int k = 0; k < len; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0xf];
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"dataset_path", m.dataset_path},
          {"dataset_sha256", m.dataset_sha256},
          {"parameters", m.parameters},
          {"seed", m.seed},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at},
          {"outputs", m.outputs},
          {"tool_version", m.tool_version}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.dataset_path = j.at("dataset_path").get<std::string>();
    m.dataset_sha256 = j.at("dataset_sha256").get<std::string>();
    m.parameters = j.at("parameters");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.tool_version = j.at("tool_version").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
  write_file_atomic(path, to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, path.string());
  return manifest_from_json(j);
}

bool verify_manifest(const RunManifest& manifest) {
  try {
    return sha256_file(manifest.dataset_path) == manifest.dataset_sha256;
  } catch (const Error&) {
    return false;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace intentmine::io
