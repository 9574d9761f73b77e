#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabformula/corpus.hpp"
#include "tabformula/samples.hpp"
#include "tabformula/table.hpp"
#include "tabformula/vocab.hpp"

namespace tabformula {

/// Bit set of objectives emitted by the sample pipeline.
enum Objective : unsigned {
  kObjectiveNrp = 1u << 0,
  kObjectiveNrpPrompt = 1u << 1,
  kObjectiveNcp = 1u << 2,
  kObjectiveFmlm = 1u << 3,
  kObjectiveAll = kObjectiveNrp | kObjectiveNrpPrompt | kObjectiveNcp | kObjectiveFmlm,
};

/// "nrp", "nrp-prompt", "ncp", "fmlm" or "all". Throws std::invalid_argument.
unsigned parse_objectives(std::string_view name);

struct PipelineConfig {
  std::uint64_t seed = 0;
  unsigned objectives = kObjectiveAll;
  int max_len = 512;
  bool emit_samples = true;
  bool apply_size_filter = true;
  SizeLimits size_limits;
  std::size_t max_copies = kMaxDraggedCopies;
  PromptOptions prompt;
};

struct PipelineCounters {
  std::size_t tables_filtered = 0;
  std::size_t formulas_seen = 0;
  std::size_t formulas_rejected = 0;
  std::size_t formulas_deduped = 0;
  std::size_t units = 0;
  std::size_t dangling_references = 0;
  std::size_t non_data_cells = 0;
  std::size_t missing_headers = 0;
  std::size_t fmlm_cell_fallbacks = 0;
  std::size_t lines = 0;

  void merge(const PipelineCounters& o);
  bool operator==(const PipelineCounters&) const = default;
};

struct TableResult {
  std::string jsonl;  // sample lines, '\n'-terminated
  CorpusStats stats;
  PipelineCounters counters;

  bool operator==(const TableResult&) const = default;
};

/// Filter, parse, dedup, then generate and pack samples for one table.
TableResult process_table(const Table& table, const Vocab& vocab, const PipelineConfig& config);

/// Reference implementation: tables one after another.
std::vector<TableResult> process_tables_serial(std::span<const Table> tables, const Vocab& vocab,
                                               const PipelineConfig& config);

/// OpenMP over tables; results are identical to the serial path. `threads` <= 0
/// keeps the OpenMP default.
std::vector<TableResult> process_tables_parallel(std::span<const Table> tables, const Vocab& vocab,
                                                 const PipelineConfig& config, int threads = 0);

/// Contiguous block [begin, end) of `count` items assigned to shard `index` of
/// `shards`; concatenating the shards in order reproduces the full range.
std::pair<std::size_t, std::size_t> shard_range(std::size_t count, std::size_t index, std::size_t shards);

/// One record per formula cell in reading order: raw formula, verdict and, when
/// accepted, prefix, sketch and referenced cells.
std::string parse_records(const Table& table);

}  // namespace tabformula
