#pragma once

// JSON documents for models, interaction records and highlight sets.
// Finite numbers are JSON numbers, +infinity is the string "inf", undefined
// is null. Durations are integer milliseconds.

#include <filesystem>
#include <utility>
#include <vector>

#include "json.hpp"

#include "csm/explorer.hpp"
#include "csm/measures.hpp"
#include "csm/model.hpp"
#include "csm/stats.hpp"

namespace csm {

using Json = nlohmann::json;

Json measure_to_json(const MeasureValue& v);
/// Throws ModelError on anything but a number, "inf" or null.
MeasureValue measure_from_json(const Json& j);

/// States get integer ids: 0 for the initial state, 1..n for the regular
/// states in model order, n+1 for the final state.
Json export_model(const CsmModel& model, const Annotation& annotation);
std::pair<CsmModel, Annotation> import_model(const Json& doc);

Json record_to_json(const InteractionRecord& rec, const std::vector<ArtifactDecl>& artifacts);
InteractionRecord record_from_json(const Json& j, const std::vector<ArtifactDecl>& artifacts);
/// {"records": [...]}
Json export_interactions(const std::vector<InteractionRecord>& records, const std::vector<ArtifactDecl>& artifacts);
std::vector<InteractionRecord> import_interactions(const Json& doc, const std::vector<ArtifactDecl>& artifacts);

Json highlight_to_json(const HighlightSet& set, const std::vector<ArtifactDecl>& artifacts);

/// Pretty-printed with a trailing newline. Throws IoError.
void write_json(const Json& doc, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

}  // namespace csm
