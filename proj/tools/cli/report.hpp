#pragma once

#include "commands.hpp"

#include <hsnet/verify.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hsnet::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const KernelMetrics& m);
Json to_json(const BoundBreakdown& b);
Json to_json(const ParameterSelection& s);
Json to_json(const StepsReport& r);
Json to_json(const CoverageReport& r);

//! schema_version, command, resolved config text, kernel, metrics and the
//! realized parameters shared by every report.
Json report_header(const std::string& command, const Setup& setup);

//! Writes `j` followed by a newline; the same JSON gives the same bytes.
void write_json(const Json& j, const std::filesystem::path& path);

}  // namespace hsnet::cli
