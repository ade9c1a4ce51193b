#include "hspace/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hspace/errors.hpp"

namespace hspace {

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_string(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace {

void write_real(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void write_string(std::string& out, std::string_view s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void write_point(std::string& out, const std::vector<double>& p) {
    out += '[';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ',';
        write_real(out, p[i]);
    }
    out += ']';
}

}  // namespace

std::string to_canonical_json(const Report& report) {
    std::vector<const CheckResult*> ordered;
    ordered.reserve(report.checks.size());
    for (const auto& c : report.checks) ordered.push_back(&c);
    std::sort(ordered.begin(), ordered.end(),
              [](const CheckResult* a, const CheckResult* b) { return a->name < b->name; });

    std::string out;
    out += "{\"checks\":[";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const CheckResult& c = *ordered[i];
        if (i) out += ',';
        out += "{\"errors\":[";
        for (std::size_t e = 0; e < c.errors.size(); ++e) {
            if (e) out += ',';
            out += "{\"kind\":";
            write_string(out, c.errors[e].kind);
            out += ",\"point\":";
            write_point(out, c.errors[e].point);
            out += '}';
        }
        out += "],\"max_residual\":";
        write_real(out, c.max_residual);
        out += ",\"name\":";
        write_string(out, c.name);
        out += ",\"pass\":";
        out += c.pass ? "true" : "false";
        out += ",\"sample_count\":";
        out += std::to_string(c.sample_count);
        out += ",\"tolerance\":";
        write_real(out, c.tolerance);
        out += ",\"worst_point\":";
        write_point(out, c.worst_point);
        out += '}';
    }
    out += "],\"metadata\":{\"config_digest\":";
    write_string(out, report.config_digest);
    out += ",\"seed\":";
    out += std::to_string(report.seed);
    out += ",\"version\":";
    write_string(out, report.version);
    out += "}}\n";
    return out;
}

Report report_from_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    Report r;
    r.seed = j.at("metadata").at("seed").get<std::uint64_t>();
    r.config_digest = j.at("metadata").at("config_digest").get<std::string>();
    r.version = j.at("metadata").at("version").get<std::string>();
    for (const auto& jc : j.at("checks")) {
        CheckResult c;
        c.name = jc.at("name").get<std::string>();
        c.max_residual = jc.at("max_residual").get<double>();
        c.tolerance = jc.at("tolerance").get<double>();
        c.sample_count = jc.at("sample_count").get<int>();
        c.pass = jc.at("pass").get<bool>();
        c.worst_point = jc.at("worst_point").get<std::vector<double>>();
        for (const auto& je : jc.at("errors")) {
            CheckIssue issue;
            issue.kind = je.at("kind").get<std::string>();
            issue.point = je.at("point").get<std::vector<double>>();
            c.errors.push_back(std::move(issue));
        }
        r.checks.push_back(std::move(c));
    }
    return r;
}

void emit(const Report& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open report path for writing: " + path);
    const std::string text = to_canonical_json(report);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing report to: " + path);
}

}  // namespace hspace
