#include "g5/report.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "g5/kernels.hpp"

namespace g5::report {

const char* kArtifactVersion = "1.0.0";

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_field_csv(const std::string& path, const RealField& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,value\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        out << format_g17(u.grid().node(i)) << ',' << format_g17(u[i]) << '\n';
}

RealField read_field_csv(const std::string& path, const GridPtr& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> values;
    values.reserve(grid->n());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad field CSV line: " + line);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (values.size() != grid->n())
        throw std::runtime_error("field CSV length does not match grid");
    return RealField(grid, std::move(values));
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<dynamics::DiagnosticsRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,mass,energy,energy5,hs_norm,l2_error,peak_x\n";
    for (const auto& r : rows) {
        out << format_g17(r.t) << ',' << format_g17(r.mass) << ',' << format_g17(r.energy) << ','
            << format_g17(r.energy5) << ',' << format_g17(r.hs_norm) << ',';
        if (r.l2_error) out << format_g17(*r.l2_error);
        out << ',';
        if (r.peak_x) out << format_g17(*r.peak_x);
        out << '\n';
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

void write_manifest(const std::string& path, const Manifest& m) {
    json j;
    j["command"] = m.command;
    j["config_path"] = m.config_path;
    j["seed"] = m.seed;
    j["artifact_version"] = m.artifact_version;
    j["kernels"] = kern::active_lane();
    j["outputs"] = m.outputs;
    j["config_echo"] = m.config_echo;
    write_json(path, j);
}

std::string validate_against_schema(const json& doc, const json& schema) {
    auto type_ok = [](const json& d, const std::string& t) {
        if (t == "object") return d.is_object();
        if (t == "array") return d.is_array();
        if (t == "string") return d.is_string();
        if (t == "number") return d.is_number();
        if (t == "integer") return d.is_number_integer() || d.is_number_unsigned();
        if (t == "boolean") return d.is_boolean();
        if (t == "null") return d.is_null();
        return false;
    };
    std::function<std::string(const json&, const json&, std::string)> walk =
        [&](const json& d, const json& s, std::string where) -> std::string {
        if (s.contains("type")) {
            const std::string t = s["type"].get<std::string>();
            if (!type_ok(d, t)) return where + ": expected " + t;
        }
        if (s.contains("required"))
            for (const auto& r : s["required"]) {
                const std::string key = r.get<std::string>();
                if (!d.contains(key)) return where + ": missing required key " + key;
            }
        if (s.contains("properties") && d.is_object())
            for (auto it = s["properties"].begin(); it != s["properties"].end(); ++it)
                if (d.contains(it.key())) {
                    auto err = walk(d[it.key()], it.value(), where + "." + it.key());
                    if (!err.empty()) return err;
                }
        if (s.contains("items") && d.is_array())
            for (std::size_t i = 0; i < d.size(); ++i) {
                auto err = walk(d[i], s["items"], where + "[" + std::to_string(i) + "]");
                if (!err.empty()) return err;
            }
        return "";
    };
    return walk(doc, schema, "$");
}

}  // namespace g5::report
