#include "lomatch/similarity.hpp"

#include "lomatch/text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lomatch {

namespace {

std::size_t edit_distance(const std::vector<std::uint32_t>& a,
                          const std::vector<std::uint32_t>& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::map<std::string, int> term_frequencies(std::string_view text) {
  std::map<std::string, int> tf;
  for (auto& tok : tokenize(text)) ++tf[tok];
  return tf;
}

bool is_ancestor(const std::string& node, const std::string& candidate,
                 const std::map<std::string, std::string>& hierarchy) {
  std::string cur = node;
  std::size_t steps = 0;
  while (steps++ <= hierarchy.size()) {
    auto it = hierarchy.find(cur);
    if (it == hierarchy.end()) return false;
    cur = it->second;
    if (cur == candidate) return true;
  }
  return false;
}

std::unordered_map<std::string, std::size_t> index_by_id(
    const std::vector<LearningObjectRecord>& records) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].id, i);
  return index;
}

FeatureVector features_for(const LearningObjectRecord& s,
                           const LearningObjectRecord& t,
                           const Ontology& source, const Ontology& target,
                           const FeatureConventions& conventions) {
  FeatureVector fv;
  fv.schema_id = kLom4Schema;
  fv.values.resize(kLom4Dim);
  fv.values[0] = s.title.empty() && t.title.empty()
                     ? conventions.both_empty_title
                     : edit_similarity(s.title, t.title);
  const bool no_description =
      tokenize(s.description).empty() || tokenize(t.description).empty();
  fv.values[1] = no_description
                     ? conventions.empty_description
                     : tf_cosine_similarity(s.description, t.description);
  fv.values[2] = s.keywords.empty() && t.keywords.empty()
                     ? conventions.both_empty_keywords
                     : token_set_similarity(s.keywords, t.keywords);
  fv.values[3] =
      types_related(s.resource_type, t.resource_type, source, target) ? 1.0
                                                                      : 0.0;
  return fv;
}

}  // namespace

double edit_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  const auto ca = decode_utf8(a);
  const auto cb = decode_utf8(b);
  const auto longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 1.0;
  const auto dist = edit_distance(ca, cb);
  return 1.0 - static_cast<double>(dist) / static_cast<double>(longest);
}

double token_set_similarity(const std::set<std::string>& a,
                            const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& tok : a) inter += b.count(tok);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double tf_cosine_similarity(std::string_view a, std::string_view b) {
  const auto ta = term_frequencies(a);
  const auto tb = term_frequencies(b);
  if (ta.empty() || tb.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [tok, f] : ta) {
    na += static_cast<double>(f) * f;
    auto it = tb.find(tok);
    if (it != tb.end()) dot += static_cast<double>(f) * it->second;
  }
  for (const auto& [tok, f] : tb) nb += static_cast<double>(f) * f;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool types_related(const std::string& a, const std::string& b,
                   const Ontology& source, const Ontology& target) {
  if (a.empty() || b.empty()) return a == b;
  if (a == b) return true;
  return is_ancestor(a, b, source.class_hierarchy) ||
         is_ancestor(b, a, source.class_hierarchy) ||
         is_ancestor(a, b, target.class_hierarchy) ||
         is_ancestor(b, a, target.class_hierarchy);
}

FeatureVector extract_features(const InstancePair& pair,
                               const Ontology& source, const Ontology& target,
                               const FeatureConventions& conventions) {
  const auto* s = source.find(pair.source_id);
  if (!s) {
    throw std::invalid_argument("unresolvable source id: " + pair.source_id);
  }
  const auto* t = target.find(pair.target_id);
  if (!t) {
    throw std::invalid_argument("unresolvable target id: " + pair.target_id);
  }
  return features_for(*s, *t, source, target, conventions);
}

FeatureDataset extract_feature_matrix(const std::vector<InstancePair>& pairs,
                                      const Ontology& source,
                                      const Ontology& target,
                                      const FeatureConventions& conventions) {
  const auto src_index = index_by_id(source.instances);
  const auto tgt_index = index_by_id(target.instances);
  FeatureDataset data;
  data.pairs = pairs;
  data.X.resize(static_cast<Index>(pairs.size()), kLom4Dim);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto si = src_index.find(pairs[i].source_id);
    if (si == src_index.end()) {
      throw std::invalid_argument("unresolvable source id: " +
                                  pairs[i].source_id);
    }
    auto ti = tgt_index.find(pairs[i].target_id);
    if (ti == tgt_index.end()) {
      throw std::invalid_argument("unresolvable target id: " +
                                  pairs[i].target_id);
    }
    data.X.row(static_cast<Index>(i)) =
        features_for(source.instances[si->second], target.instances[ti->second],
                     source, target, conventions)
            .values.transpose();
  }
  return data;
}

void write_feature_file(std::ostream& out, const FeatureDataset& data) {
  out << "#format: lom.features.v1 schema=" << data.schema_id << "\n";
  for (Index i = 0; i < data.size(); ++i) {
    const auto& p = data.pairs[static_cast<std::size_t>(i)];
    require_csv_safe(p.source_id);
    require_csv_safe(p.target_id);
    out << p.source_id << ',' << p.target_id;
    for (Index j = 0; j < data.X.cols(); ++j) {
      out << ',' << format_value(data.X(i, j));
    }
    if (p.label) out << ',' << to_string(*p.label);
    out << "\n";
  }
}

FeatureDataset read_feature_file(std::istream& in) {
  FeatureDataset data;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  Index dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#format:", 0) == 0) {
      auto pos = line.find("schema=");
      if (pos != std::string::npos) data.schema_id = line.substr(pos + 7);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("source_id,", 0) == 0) continue;  // optional header

    std::vector<std::string> fields;
    {
      std::stringstream ss(line);
      std::string f;
      while (std::getline(ss, f, ',')) fields.push_back(f);
      if (!line.empty() && line.back() == ',') fields.push_back("");
    }
    if (fields.size() < 3) {
      throw ParseError("expected source_id,target_id,f1,..[,label]", line_no);
    }
    InstancePair p{fields[0], fields[1], std::nullopt};
    std::size_t value_end = fields.size();
    // Trailing label column is optional per row.
    const std::string& last = fields.back();
    if (last == "MATCH" || last == "NON_MATCH") {
      p.label = parse_pair_label(last);
      --value_end;
    }
    std::vector<double> values;
    for (std::size_t k = 2; k < value_end; ++k) {
      try {
        values.push_back(std::stod(fields[k]));
      } catch (const std::exception&) {
        throw ParseError("bad feature value \"" + fields[k] + "\"", line_no);
      }
    }
    if (values.empty()) {
      throw ParseError("row has no feature values", line_no);
    }
    if (dim < 0) {
      dim = static_cast<Index>(values.size());
    } else if (dim != static_cast<Index>(values.size())) {
      throw ParseError("inconsistent feature dimension", line_no);
    }
    data.pairs.push_back(std::move(p));
    rows.push_back(std::move(values));
  }
  data.X.resize(static_cast<Index>(rows.size()), std::max<Index>(dim, 0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Index j = 0; j < data.X.cols(); ++j) {
      data.X(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
  }
  return data;
}

}  // namespace lomatch
