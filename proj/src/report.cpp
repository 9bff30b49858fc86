#include "logconc/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "logconc/errors.hpp"

namespace logconc {

std::size_t Report::total_failures() const {
    std::size_t n = 0;
    for (const SuiteTable& t : tables) n += t.failures;
    return n;
}

SuiteTable* Report::find(const std::string& name) {
    for (SuiteTable& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const SuiteTable& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("emit: cannot write " + path.string());
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(t.header[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
}

}  // namespace

void emit(const Report& report, const std::string& out_dir,
          const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IOError("emit: cannot create output directory " + out_dir);

    const bool want_csv =
        std::find(formats.begin(), formats.end(), "csv") != formats.end();
    const bool want_json =
        std::find(formats.begin(), formats.end(), "json") != formats.end();

    if (want_csv)
        for (const SuiteTable& t : report.tables)
            write_csv(t, fs::path(out_dir) / (t.name + ".csv"));

    if (want_json) {
        nlohmann::json j;
        for (const auto& [k, v] : report.metadata) j["metadata"][k] = v;
        for (const SuiteTable& t : report.tables) {
            nlohmann::json tj;
            tj["rows"] = t.rows.size();
            tj["failures"] = t.failures;
            j["suites"][t.name] = tj;
        }
        j["total_failures"] = report.total_failures();
        std::ofstream out(fs::path(out_dir) / "summary.json", std::ios::binary);
        if (!out) throw IOError("emit: cannot write summary.json");
        out << j.dump(2) << '\n';
    }
}

}  // namespace logconc
