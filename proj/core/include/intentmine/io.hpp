#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "intentmine/dataset.hpp"
#include "intentmine/iter_dbscan.hpp"
#include "intentmine/propagate.hpp"

namespace intentmine::io {

/// One object per line: {"id", "text", "embedding", "label"?}. Blank lines
/// are skipped. Schema problems throw ParseError naming the 1-based line;
/// validation errors keep their code and gain the line in the message.
Dataset read_jsonl(const std::filesystem::path& path);
Dataset parse_jsonl(std::istream& in);

void write_jsonl(const std::filesystem::path& path, const Dataset& dataset);

/// Sidecar trace file written next to an assignment file.
std::filesystem::path trace_path(const std::filesystem::path& assignment_path);

/// JSONL of {"id", "cluster"} plus the sidecar trace (one trace per partition).
void write_assignment(const std::filesystem::path& path, const Dataset& dataset,
                      const ClusterAssignment& assignment,
                      std::span<const IterationTrace> traces);
void write_assignment(const std::filesystem::path& path, const Dataset& dataset,
                      const ClusterAssignment& assignment, const IterationTrace& trace);

/// Reads an assignment back; ids must match the dataset record for record.
ClusterAssignment read_assignment(const std::filesystem::path& path, const Dataset& dataset);
std::vector<IterationTrace> read_traces(const std::filesystem::path& assignment_path);

nlohmann::json to_json(const IterDbscanParams& params);
IterDbscanParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const IterationTrace& trace);
IterationTrace trace_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LabelState& state);
LabelState label_state_from_json(const nlohmann::json& j);
void write_label_state(const std::filesystem::path& path, const LabelState& state);
LabelState read_label_state(const std::filesystem::path& path);

/// {"id","text","intent","confidence","source"} per labeled row.
void write_corpus_jsonl(std::ostream& out, const LabeledCorpus& corpus);
/// Two columns: text,intent (with header).
void write_corpus_csv(std::ostream& out, const LabeledCorpus& corpus);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string dataset_path;
  std::string dataset_sha256;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
  std::string tool_version = INTENTMINE_VERSION;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);
/// True when the dataset file still hashes to the recorded digest.
bool verify_manifest(const RunManifest& manifest);

/// UTC, ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace intentmine::io
