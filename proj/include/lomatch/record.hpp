#pragma once

#include "lomatch/types.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lomatch {

/// One learning-object metadata record as ingested from a repository.
/// Keywords are normalized (lowercase, whitespace/punctuation-free,
/// deduplicated); title and description stay verbatim.
struct LearningObjectRecord {
  std::string id;
  std::string title;
  std::string description;
  std::set<std::string> keywords;
  std::string resource_type;
  std::string repository;

  bool operator==(const LearningObjectRecord&) const = default;
};

enum class PairLabel { kMatch, kNonMatch };

std::string to_string(PairLabel label);
PairLabel parse_pair_label(std::string_view text);

/// A candidate (source, target) record pair, optionally labeled.
struct InstancePair {
  std::string source_id;
  std::string target_id;
  std::optional<PairLabel> label;

  bool operator==(const InstancePair&) const = default;
};

/// Formal ontology container: classes, properties, their hierarchies
/// (child -> parent), instances and opaque axioms. Only the class
/// hierarchy, keyed by resource-type identifiers, feeds the matching
/// features; the rest is carried for completeness.
struct Ontology {
  std::set<std::string> classes;
  std::set<std::string> properties;
  std::map<std::string, std::string> class_hierarchy;
  std::map<std::string, std::string> property_hierarchy;
  std::vector<LearningObjectRecord> instances;
  std::vector<std::string> axioms;

  /// Throws std::invalid_argument when a hierarchy has a cycle or refers
  /// to an identifier outside its set, or when instance ids collide.
  void validate() const;

  const LearningObjectRecord* find(const std::string& id) const;
};

/// Builds an ontology over the given instances. Classes are the distinct
/// resource types plus every identifier in the optional type hierarchy.
Ontology make_ontology(std::vector<LearningObjectRecord> records,
                       std::map<std::string, std::string> type_hierarchy = {});

enum class RecordFormat { kRecordsJsonl };

/// Reads one record per line (JSON object) and normalizes it. Blank lines
/// and lines starting with '#' are skipped. Unknown fields are reported
/// through `warnings` when provided. Throws ParseError on malformed lines
/// and duplicate ids.
std::vector<LearningObjectRecord> parse_repository(
    std::istream& in, RecordFormat format,
    std::vector<std::string>* warnings = nullptr);

/// Writes records in the same line-delimited format parse_repository
/// accepts, prefixed with a format-version header line.
void write_repository(std::ostream& out,
                      const std::vector<LearningObjectRecord>& records);

/// Lowercases, tokenizes and deduplicates keywords; other fields pass
/// through verbatim.
LearningObjectRecord normalize_record(const LearningObjectRecord& raw);

enum class PairStrategy { kFullCross };

/// FULL_CROSS: every (source, target) combination, source-major order.
/// Throws std::invalid_argument when either repository is empty.
std::vector<InstancePair> generate_candidate_pairs(const Ontology& source,
                                                   const Ontology& target,
                                                   PairStrategy strategy);

/// Pair file: `source_id,target_id[,label]` lines; a `source_id,...`
/// header is optional, '#' lines are skipped.
std::vector<InstancePair> read_pair_file(std::istream& in);
void write_pair_file(std::ostream& out, const std::vector<InstancePair>& pairs);

/// Type-hierarchy file: `child,parent` lines.
std::map<std::string, std::string> read_hierarchy_file(std::istream& in);

/// Throws when an id cannot appear as a CSV field (contains ',' or a
/// line break).
void require_csv_safe(const std::string& id);

}  // namespace lomatch
