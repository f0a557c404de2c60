#pragma once

// CSV ingestion and the JSON fit document.

#include "msir/dimension.hpp"
#include "msir/msir.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace msir {

/// Reads a headered CSV. `response` is a column name or a 1-based column
/// index; every other column must be numeric. A response with non-numeric
/// cells becomes categorical (levels sorted, y = level index).
Dataset parse_csv(const std::string& path, const std::string& response, bool require_n_gt_p = true);

/// Reads the named numeric columns (in the given order) from a headered CSV.
Matrix read_columns(const std::string& path, const std::vector<std::string>& names);

inline constexpr int kFitSchemaVersion = 1;

struct FitDocument {
    int schema_version = kFitSchemaVersion;
    std::vector<std::string> columns;
    std::string response = "y";
    std::vector<std::string> levels;
    MsirOptions options;
    MsirFit fit;
    std::optional<DimensionReport> dimension;
};

nlohmann::json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MsirFit& fit);
MsirFit fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DimensionReport& report);
DimensionReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitDocument& doc);
FitDocument document_from_json(const nlohmann::json& j);

void save_fit_document(const std::string& path, const FitDocument& doc);
FitDocument load_fit_document(const std::string& path);

/// Writes `M` with a header row; doubles use round-trip precision.
void write_matrix_csv(std::ostream& os, const std::vector<std::string>& header, const Matrix& M);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace msir
