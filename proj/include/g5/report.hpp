#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "g5/dynamics.hpp"
#include "g5/grid.hpp"

// Serialization: field/diagnostics CSVs with fixed 17-significant-digit
// formatting, JSON reports, the run manifest, and a structural validator for
// the checked-in JSON schemas.
namespace g5::report {

using json = nlohmann::ordered_json;

std::string format_g17(double v);

void write_field_csv(const std::string& path, const RealField& u);
RealField read_field_csv(const std::string& path, const GridPtr& grid);

void write_diagnostics_csv(const std::string& path,
                           const std::vector<dynamics::DiagnosticsRow>& rows);

void write_json(const std::string& path, const json& j);

struct Manifest {
    std::string command;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string artifact_version;
    std::vector<std::string> outputs;
    json config_echo;
};
void write_manifest(const std::string& path, const Manifest& m);

// Structural validation against the subset of JSON Schema used under
// schemas/: type, properties, required, items. Returns an empty string on
// success, else the first violation.
std::string validate_against_schema(const json& doc, const json& schema);

extern const char* kArtifactVersion;

}  // namespace g5::report
