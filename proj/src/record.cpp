#include "lomatch/record.hpp"

#include "lomatch/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace lomatch {

using nlohmann::json;

namespace {

constexpr const char* kRecordsHeader = "#format: lom.records.v1";
constexpr const char* kPairsHeader = "#format: lom.pairs.v1";

const std::unordered_set<std::string>& known_record_fields() {
  static const std::unordered_set<std::string> fields = {
      "id", "title", "description", "keywords", "resource_type", "repository"};
  return fields;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void require_csv_safe(const std::string& id) {
  if (id.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("id not representable in csv artifact: " + id);
  }
}

std::string to_string(PairLabel label) {
  return label == PairLabel::kMatch ? "MATCH" : "NON_MATCH";
}

PairLabel parse_pair_label(std::string_view text) {
  if (text == "MATCH") return PairLabel::kMatch;
  if (text == "NON_MATCH") return PairLabel::kNonMatch;
  throw std::invalid_argument("unknown pair label: " + std::string(text));
}

void Ontology::validate() const {
  auto check_hierarchy = [](const std::map<std::string, std::string>& h,
                            const std::set<std::string>& members,
                            const char* name) {
    for (const auto& [child, parent] : h) {
      if (!members.count(child) || !members.count(parent)) {
        throw std::invalid_argument(std::string(name) +
                                    " hierarchy references identifier outside "
                                    "its set: " +
                                    child + " -> " + parent);
      }
    }
    // Cycle check: walking child -> parent must terminate within |h| steps.
    for (const auto& [start, _] : h) {
      std::string cur = start;
      std::size_t steps = 0;
      while (true) {
        auto it = h.find(cur);
        if (it == h.end()) break;
        cur = it->second;
        if (cur == start || ++steps > h.size()) {
          throw std::invalid_argument(std::string(name) +
                                      " hierarchy has a cycle through: " +
                                      start);
        }
      }
    }
  };
  check_hierarchy(class_hierarchy, classes, "class");
  check_hierarchy(property_hierarchy, properties, "property");

  std::unordered_set<std::string> seen;
  for (const auto& rec : instances) {
    if (rec.id.empty()) {
      throw std::invalid_argument("instance with empty id");
    }
    if (!seen.insert(rec.id).second) {
      throw std::invalid_argument("duplicate instance id: " + rec.id);
    }
  }
}

const LearningObjectRecord* Ontology::find(const std::string& id) const {
  for (const auto& rec : instances) {
    if (rec.id == id) return &rec;
  }
  return nullptr;
}

Ontology make_ontology(std::vector<LearningObjectRecord> records,
                       std::map<std::string, std::string> type_hierarchy) {
  Ontology onto;
  for (const auto& rec : records) {
    if (!rec.resource_type.empty()) onto.classes.insert(rec.resource_type);
  }
  for (const auto& [child, parent] : type_hierarchy) {
    onto.classes.insert(child);
    onto.classes.insert(parent);
  }
  onto.class_hierarchy = std::move(type_hierarchy);
  onto.instances = std::move(records);
  onto.validate();
  return onto;
}

LearningObjectRecord normalize_record(const LearningObjectRecord& raw) {
  LearningObjectRecord rec = raw;
  std::set<std::string> keywords;
  for (const auto& kw : raw.keywords) {
    for (auto& tok : tokenize(kw)) keywords.insert(std::move(tok));
  }
  rec.keywords = std::move(keywords);
  return rec;
}

std::vector<LearningObjectRecord> parse_repository(
    std::istream& in, RecordFormat format, std::vector<std::string>* warnings) {
  if (format != RecordFormat::kRecordsJsonl) {
    throw std::invalid_argument("unsupported record format");
  }
  std::vector<LearningObjectRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    }
    if (!obj.is_object()) {
      throw ParseError("record line is not an object", line_no);
    }

    LearningObjectRecord raw;
    try {
      raw.id = obj.at("id").get<std::string>();
      raw.title = obj.value("title", std::string{});
      raw.description = obj.value("description", std::string{});
      raw.resource_type = obj.value("resource_type", std::string{});
      raw.repository = obj.value("repository", std::string{});
      if (obj.contains("keywords")) {
        for (const auto& kw : obj.at("keywords")) {
          raw.keywords.insert(kw.get<std::string>());
        }
      }
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad record field: ") + e.what(), line_no);
    }

    if (raw.id.empty()) {
      throw ParseError("record with empty id", line_no);
    }
    if (!seen.insert(raw.id).second) {
      throw ParseError("duplicate id \"" + raw.id + "\"", line_no);
    }
    if (warnings) {
      for (const auto& [key, _] : obj.items()) {
        if (!known_record_fields().count(key)) {
          warnings->push_back("line " + std::to_string(line_no) +
                              ": ignoring unknown field \"" + key + "\"");
        }
      }
    }
    records.push_back(normalize_record(raw));
  }
  return records;
}

void write_repository(std::ostream& out,
                      const std::vector<LearningObjectRecord>& records) {
  out << kRecordsHeader << "\n";
  for (const auto& rec : records) {
    json obj;
    obj["id"] = rec.id;
    obj["title"] = rec.title;
    obj["description"] = rec.description;
    obj["keywords"] = rec.keywords;
    obj["resource_type"] = rec.resource_type;
    obj["repository"] = rec.repository;
    out << obj.dump() << "\n";
  }
}

std::vector<InstancePair> generate_candidate_pairs(const Ontology& source,
                                                   const Ontology& target,
                                                   PairStrategy strategy) {
  if (strategy != PairStrategy::kFullCross) {
    throw std::invalid_argument("unsupported pair strategy");
  }
  if (source.instances.empty() || target.instances.empty()) {
    throw std::invalid_argument("empty repository: cannot generate pairs");
  }
  std::vector<InstancePair> pairs;
  pairs.reserve(source.instances.size() * target.instances.size());
  for (const auto& s : source.instances) {
    for (const auto& t : target.instances) {
      pairs.push_back({s.id, t.id, std::nullopt});
    }
  }
  return pairs;
}

std::vector<InstancePair> read_pair_file(std::istream& in) {
  std::vector<InstancePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto fields = split_csv_line(line);
    if (first_content) {
      first_content = false;
      if (fields[0] == "source_id") continue;  // optional header
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected source_id,target_id[,label]", line_no);
    }
    InstancePair p{fields[0], fields[1], std::nullopt};
    if (p.source_id.empty() || p.target_id.empty()) {
      throw ParseError("empty pair id", line_no);
    }
    if (fields.size() == 3 && !fields[2].empty()) {
      try {
        p.label = parse_pair_label(fields[2]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_pair_file(std::ostream& out, const std::vector<InstancePair>& pairs) {
  out << kPairsHeader << "\n";
  for (const auto& p : pairs) {
    require_csv_safe(p.source_id);
    require_csv_safe(p.target_id);
    out << p.source_id << ',' << p.target_id;
    if (p.label) out << ',' << to_string(*p.label);
    out << "\n";
  }
}

std::map<std::string, std::string> read_hierarchy_file(std::istream& in) {
  std::map<std::string, std::string> hierarchy;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("expected child,parent", line_no);
    }
    if (fields[0] == "child") continue;  // optional header
    hierarchy[fields[0]] = fields[1];
  }
  return hierarchy;
}

}  // namespace lomatch
