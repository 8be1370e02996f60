#include "llab/io.hpp"

#include "llab/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace llab::io {

using nlohmann::json;

ConceptClass class_from_json(const json& j) {
    if (!j.is_object()) throw MalformedInput("class file must be a JSON object");
    for (const char* key : {"points", "labels", "hypotheses"}) {
        if (!j.contains(key) || !j.at(key).is_array()) {
            throw MalformedInput(std::string("class file needs array field '") + key + "'");
        }
    }
    try {
        auto points = j.at("points").get<std::vector<std::string>>();
        auto labels = j.at("labels").get<std::vector<std::string>>();
        auto table = j.at("hypotheses").get<std::vector<std::vector<Label>>>();
        return ConceptClass(std::move(points), std::move(labels), std::move(table));
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("class file: ") + e.what());
    }
}

json class_to_json(const ConceptClass& c) {
    return json{{"points", c.point_names()}, {"labels", c.label_names()}, {"hypotheses", c.table()}};
}

LabeledSequence sequence_from_json(const json& j) {
    if (!j.is_array()) throw MalformedInput("sequence file must be a JSON array");
    LabeledSequence s;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() || !pair[1].is_number_unsigned()) {
            throw MalformedInput("sequence entries must be [point_index, label_index] pairs of non-negative integers");
        }
        s.push_back({pair[0].get<Point>(), pair[1].get<Label>()});
    }
    return s;
}

json sequence_to_json(const LabeledSequence& s) {
    json j = json::array();
    for (const auto& e : s.entries) j.push_back(json::array({e.point, e.label}));
    return j;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

ConceptClass read_class(const std::filesystem::path& path) {
    try {
        return class_from_json(read_json(path));
    } catch (const MalformedInput& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
}

LabeledSequence read_sequence(const std::filesystem::path& path) {
    try {
        return sequence_from_json(read_json(path));
    } catch (const MalformedInput& e) {
        throw MalformedInput(path.string() + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InternalError("double formatting failed");
    return std::string(buf, ptr);
}

}  // namespace llab::io
