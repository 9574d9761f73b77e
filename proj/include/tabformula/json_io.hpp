#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "tabformula/corpus.hpp"
#include "tabformula/formula.hpp"
#include "tabformula/metrics.hpp"
#include "tabformula/samples.hpp"
#include "tabformula/sequence.hpp"
#include "tabformula/table.hpp"

namespace tabformula {

using nlohmann::json;

/// Builds a Table from one table document. `source` names the document in
/// errors. Throws SchemaError carrying a JSON pointer to the offending value.
Table table_from_json(const json& doc, const std::string& source, const std::string& pointer_prefix = "");

json table_to_json(const Table& table);

/// A file holds one table object, an array of tables, or one table per line
/// (".jsonl"). Throws SchemaError (malformed JSON included).
std::vector<Table> read_tables(const std::filesystem::path& path);

json header_to_json(const HeaderRef& h);
json sequence_to_json(const PackedSequence& seq);
json prefix_to_json(const PrefixSequence& seq);
json nrp_pairs_to_json(const std::vector<NrpPairSample>& pairs);
json nrp_prompt_to_json(const NrpPromptSample& s);
json ncp_to_json(const NcpSample& s);
json fmlm_to_json(const FmlmSample& s);
json stats_to_json(const CorpusStats& stats, RangeCounting counting);
json summary_to_json(const EvalSummary& summary);

}  // namespace tabformula
