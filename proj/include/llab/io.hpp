#pragma once

// JSON encodings of classes and sequences.
//
// Class file:    {"points": [str...], "labels": [str...], "hypotheses": [[int...]...]}
// Sequence file: [[point_index, label_index], ...]

#include "llab/concept.hpp"

#include <filesystem>
#include <string>

#include <json.hpp>

namespace llab::io {

ConceptClass class_from_json(const nlohmann::json& j);
nlohmann::json class_to_json(const ConceptClass& c);

LabeledSequence sequence_from_json(const nlohmann::json& j);
nlohmann::json sequence_to_json(const LabeledSequence& s);

// File helpers; errors carry the path.
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

ConceptClass read_class(const std::filesystem::path& path);
LabeledSequence read_sequence(const std::filesystem::path& path);

// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double v);

}  // namespace llab::io
