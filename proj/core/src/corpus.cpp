#include "fsim/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "fsim/tokenizer.hpp"

namespace fsim {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

// Iterates content lines: strips a trailing '\r', skips blank and '#' lines.
template <typename F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    f(std::string_view(line), number);
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits `key<TAB>rest` on the first tab.
bool split_first_tab(std::string_view line, std::string_view& key, std::string_view& rest) {
  const auto pos = line.find('\t');
  if (pos == std::string_view::npos) return false;
  key = line.substr(0, pos);
  rest = line.substr(pos + 1);
  return true;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, 0, "cannot open file");
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// WebGraph

WebGraph WebGraph::from_adjacency(std::vector<std::string> keys, const std::vector<std::vector<PageId>>& adjacency,
                                  std::vector<bool> dangling) {
  if (adjacency.size() != keys.size()) throw std::invalid_argument("adjacency size does not match key count");
  if (!dangling.empty() && dangling.size() != keys.size()) {
    throw std::invalid_argument("dangling flag count does not match key count");
  }
  WebGraph g;
  g.key_index_.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!g.key_index_.emplace(keys[i], page_at(i)).second) {
      throw std::invalid_argument("duplicate external key '" + keys[i] + "'");
    }
  }
  g.keys_ = std::move(keys);
  const std::size_t n = g.keys_.size();

  std::vector<std::uint32_t> last_seen(n, std::numeric_limits<std::uint32_t>::max());
  g.offsets_.assign(1, 0);
  g.offsets_.reserve(n + 1);
  for (std::size_t src = 0; src < n; ++src) {
    for (PageId dst : adjacency[src]) {
      const auto d = index_of(dst);
      if (d >= n) throw std::invalid_argument("out-link target outside graph");
      if (d == src || last_seen[d] == src) continue;
      last_seen[d] = static_cast<std::uint32_t>(src);
      g.targets_.push_back(dst);
    }
    g.offsets_.push_back(g.targets_.size());
  }

  g.dangling_ = std::move(dangling);
  g.dangling_count_ = static_cast<std::size_t>(std::count(g.dangling_.begin(), g.dangling_.end(), true));
  return g;
}

std::optional<PageId> WebGraph::find(std::string_view key) const {
  const auto it = key_index_.find(std::string(key));
  if (it == key_index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t WebGraph::digest() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(keys_.size()));
  for (const auto& k : keys_) {
    fnv_mix(h, k);
    fnv_mix(h, std::string_view("\n", 1));
  }
  for (std::size_t o : offsets_) fnv_mix(h, static_cast<std::uint64_t>(o));
  for (PageId t : targets_) fnv_mix(h, static_cast<std::uint64_t>(index_of(t)));
  return h;
}

// ---------------------------------------------------------------------------
// QuerySet / Qrels

const Query* QuerySet::find(std::string_view id) const {
  const auto it = std::find_if(queries.begin(), queries.end(), [&](const Query& q) { return q.id == id; });
  return it == queries.end() ? nullptr : &*it;
}

Qrels Qrels::from_judgments(std::vector<std::pair<std::string, std::vector<Judgment>>> per_query) {
  Qrels qrels;
  std::vector<PageId> all_relevant;
  for (auto& [id, judgments] : per_query) {
    // Stable sort keeps input order among duplicates; the last one wins.
    std::stable_sort(judgments.begin(), judgments.end(),
                     [](const Judgment& a, const Judgment& b) { return a.page < b.page; });
    std::vector<Judgment> unique;
    for (const auto& j : judgments) {
      if (j.grade < 0) throw std::invalid_argument("negative relevance grade for query '" + id + "'");
      if (!unique.empty() && unique.back().page == j.page) {
        unique.back() = j;
      } else {
        unique.push_back(j);
      }
    }
    const auto relevant =
        static_cast<std::size_t>(std::count_if(unique.begin(), unique.end(), [](const Judgment& j) { return j.grade > 0; }));
    if (relevant == 0) {
      ++qrels.dropped_queries_;
      continue;
    }
    if (qrels.index_.contains(id)) throw std::invalid_argument("duplicate query id '" + id + "' in qrels");
    for (const auto& j : unique) {
      if (j.grade > 0) all_relevant.push_back(j.page);
    }
    qrels.index_.emplace(id, qrels.ids_.size());
    qrels.ids_.push_back(std::move(id));
    qrels.judgments_.push_back(std::move(unique));
    qrels.relevant_counts_.push_back(relevant);
  }
  std::sort(all_relevant.begin(), all_relevant.end());
  all_relevant.erase(std::unique(all_relevant.begin(), all_relevant.end()), all_relevant.end());
  qrels.relevant_union_ = std::move(all_relevant);
  return qrels;
}

std::optional<std::size_t> Qrels::find(std::string_view query_id) const {
  const auto it = index_.find(std::string(query_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Qrels::grade(std::size_t q, PageId page) const {
  const auto& js = judgments_[q];
  const auto it = std::lower_bound(js.begin(), js.end(), page, [](const Judgment& j, PageId p) { return j.page < p; });
  return (it != js.end() && it->page == page) ? it->grade : 0;
}

// ---------------------------------------------------------------------------
// DocumentStore

void DocumentStore::set_text(PageId page, std::string_view text) {
  const auto i = index_of(page);
  if (i >= docs_.size()) throw std::out_of_range("document page outside store");
  std::vector<TermId> ids;
  for (auto& tok : tokenize(text)) ids.push_back(intern(std::move(tok)));
  docs_[i] = std::move(ids);
  if (!has_text_[i]) {
    has_text_[i] = true;
    ++num_with_text_;
  }
}

std::optional<TermId> DocumentStore::find_term(std::string_view term) const {
  const auto it = term_index_.find(std::string(term));
  if (it == term_index_.end()) return std::nullopt;
  return it->second;
}

TermId DocumentStore::intern(std::string term) {
  const auto next = static_cast<TermId>(terms_.size());
  const auto [it, inserted] = term_index_.emplace(term, next);
  if (inserted) terms_.push_back(std::move(term));
  return it->second;
}

// ---------------------------------------------------------------------------
// Loaders

WebGraph load_edge_list(std::istream& in, const std::string& source) {
  std::vector<std::string> keys;
  std::unordered_map<std::string, PageId> index;
  std::vector<std::vector<PageId>> adjacency;
  std::vector<bool> has_record;
  std::vector<bool> declared;
  bool any_declaration = false;

  auto id_of = [&](std::string_view key) {
    const auto [it, inserted] = index.emplace(std::string(key), page_at(keys.size()));
    if (inserted) {
      keys.emplace_back(key);
      adjacency.emplace_back();
      has_record.push_back(false);
      declared.push_back(false);
    }
    return it->second;
  };

  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto fields = split_tabs(line);
    if (fields.size() == 1) {
      if (fields[0].empty()) throw LoadError(source, number, "empty page key");
      const PageId p = id_of(fields[0]);
      if (declared[index_of(p)]) {
        throw LoadError(source, number, "duplicate page record '" + std::string(fields[0]) + "'");
      }
      declared[index_of(p)] = true;
      has_record[index_of(p)] = true;
      any_declaration = true;
    } else if (fields.size() == 2) {
      if (fields[0].empty() || fields[1].empty()) throw LoadError(source, number, "empty page key in edge");
      const PageId src = id_of(fields[0]);
      const PageId dst = id_of(fields[1]);
      has_record[index_of(src)] = true;
      adjacency[index_of(src)].push_back(dst);
    } else {
      throw LoadError(source, number, "expected 'src<TAB>dst' or a single page key");
    }
  });

  std::vector<bool> dangling;
  if (any_declaration) {
    dangling.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) dangling[i] = !has_record[i];
  }
  return WebGraph::from_adjacency(std::move(keys), adjacency, std::move(dangling));
}

WebGraph load_edge_list(const std::string& path) {
  auto in = open_input(path);
  return load_edge_list(in, path);
}

SeedSet load_seeds(std::istream& in, const WebGraph& graph, const std::string& source) {
  SeedSet seeds;
  std::unordered_set<std::uint32_t> seen;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto key = trim(line);
    if (key.empty()) return;
    const auto page = graph.find(key);
    if (!page) throw LoadError(source, number, "seed '" + std::string(key) + "' is not a page of the graph");
    if (!seen.insert(static_cast<std::uint32_t>(*page)).second) {
      throw LoadError(source, number, "duplicate seed '" + std::string(key) + "'");
    }
    seeds.seeds.push_back(*page);
  });
  if (seeds.seeds.empty()) throw LoadError(source, 0, "seed set is empty");
  return seeds;
}

SeedSet load_seeds(const std::string& path, const WebGraph& graph) {
  auto in = open_input(path);
  return load_seeds(in, graph, path);
}

QuerySet load_queries(std::istream& in, const std::string& source) {
  QuerySet set;
  std::unordered_set<std::string> seen;
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    std::string_view id, text;
    if (!split_first_tab(line, id, text)) throw LoadError(source, number, "expected 'qid<TAB>text'");
    id = trim(id);
    if (id.empty()) throw LoadError(source, number, "empty query id");
    if (trim(text).empty()) throw LoadError(source, number, "empty query text");
    if (!seen.emplace(id).second) throw LoadError(source, number, "duplicate query id '" + std::string(id) + "'");
    set.queries.push_back({std::string(id), std::string(text)});
  });
  return set;
}

QuerySet load_queries(const std::string& path) {
  auto in = open_input(path);
  return load_queries(in, path);
}

Qrels load_qrels(std::istream& in, const WebGraph& graph, Diagnostics* diag, const std::string& source) {
  std::vector<std::pair<std::string, std::vector<Judgment>>> per_query;
  std::unordered_map<std::string, std::size_t> query_slot;
  // (query slot, page) -> seen, for duplicate warnings.
  std::unordered_set<std::uint64_t> seen;
  std::size_t dropped = 0;

  for_each_line(in, [&](std::string_view line, std::size_t number) {
    const auto fields = split_whitespace(line);
    if (fields.empty()) return;
    if (fields.size() != 4) throw LoadError(source, number, "expected 'qid 0 docid grade'");
    int grade = 0;
    const auto g = fields[3];
    const auto [ptr, ec] = std::from_chars(g.data(), g.data() + g.size(), grade);
    if (ec != std::errc() || ptr != g.data() + g.size()) {
      throw LoadError(source, number, "grade '" + std::string(g) + "' is not an integer");
    }
    if (grade < 0) throw LoadError(source, number, "negative grade");

    const std::string qid(fields[0]);
    auto [slot_it, inserted] = query_slot.emplace(qid, per_query.size());
    if (inserted) per_query.emplace_back(qid, std::vector<Judgment>{});
    const std::size_t slot = slot_it->second;

    const auto page = graph.find(fields[2]);
    if (!page) {
      ++dropped;
      return;
    }
    const std::uint64_t pair_key = (static_cast<std::uint64_t>(slot) << 32) | index_of(*page);
    if (!seen.insert(pair_key).second && diag) {
      diag->warn(source + ":" + std::to_string(number) + ": duplicate judgment for (" + qid + ", " +
                 std::string(fields[2]) + "); last one wins");
    }
    per_query[slot].second.push_back({*page, grade});
  });

  auto qrels = Qrels::from_judgments(std::move(per_query));
  qrels.add_dropped_judgments(dropped);
  if (diag && dropped > 0) diag->warn(source + ": " + std::to_string(dropped) + " judgments on pages outside the graph dropped");
  if (diag && qrels.dropped_queries() > 0) {
    diag->warn(source + ": " + std::to_string(qrels.dropped_queries()) + " queries without relevant pages dropped");
  }
  return qrels;
}

Qrels load_qrels(const std::string& path, const WebGraph& graph, Diagnostics* diag) {
  auto in = open_input(path);
  return load_qrels(in, graph, diag, path);
}

QualityTable load_quality_table(std::istream& in, const WebGraph& graph, double default_score, Diagnostics* diag,
                                const std::string& source) {
  if (!std::isfinite(default_score)) throw LoadError(source, 0, "default quality score must be finite");
  std::vector<double> scores(graph.num_pages(), default_score);
  std::vector<bool> assigned(graph.num_pages(), false);
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    std::string_view key, value;
    if (!split_first_tab(line, key, value)) throw LoadError(source, number, "expected 'docid<TAB>score'");
    value = trim(value);
    double score = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw LoadError(source, number, "score '" + std::string(value) + "' is not a number");
    }
    if (!std::isfinite(score)) throw LoadError(source, number, "non-finite score");
    const auto page = graph.find(key);
    if (!page) {
      if (diag) diag->warn(source + ":" + std::to_string(number) + ": unknown page '" + std::string(key) + "' skipped");
      return;
    }
    const auto i = index_of(*page);
    if (assigned[i] && diag) {
      diag->warn(source + ":" + std::to_string(number) + ": duplicate score for '" + std::string(key) +
                 "'; last one wins");
    }
    assigned[i] = true;
    scores[i] = score;
  });
  return QualityTable(std::move(scores), default_score);
}

QualityTable load_quality_table(const std::string& path, const WebGraph& graph, double default_score,
                                Diagnostics* diag) {
  auto in = open_input(path);
  return load_quality_table(in, graph, default_score, diag, path);
}

DocumentStore load_documents(std::istream& in, const WebGraph& graph, Diagnostics* diag, const std::string& source) {
  DocumentStore store(graph.num_pages());
  for_each_line(in, [&](std::string_view line, std::size_t number) {
    std::string_view key, text;
    if (!split_first_tab(line, key, text)) throw LoadError(source, number, "expected 'docid<TAB>text'");
    const auto page = graph.find(key);
    if (!page) {
      if (diag) diag->warn(source + ":" + std::to_string(number) + ": unknown page '" + std::string(key) + "' skipped");
      return;
    }
    if (store.has_text(*page) && diag) {
      diag->warn(source + ":" + std::to_string(number) + ": duplicate document '" + std::string(key) +
                 "'; last one wins");
    }
    store.set_text(*page, text);
  });
  return store;
}

DocumentStore load_documents(const std::string& path, const WebGraph& graph, Diagnostics* diag) {
  auto in = open_input(path);
  return load_documents(in, graph, diag, path);
}

// ---------------------------------------------------------------------------
// Writers

void write_edge_list(const WebGraph& graph, std::ostream& out) {
  out << "# pages\n";
  for (const auto& k : graph.keys()) out << k << '\n';
  out << "# edges\n";
  for (std::size_t i = 0; i < graph.num_pages(); ++i) {
    const PageId p = page_at(i);
    for (PageId t : graph.outlinks(p)) out << graph.key(p) << '\t' << graph.key(t) << '\n';
  }
}

void write_seeds(const SeedSet& seeds, const WebGraph& graph, std::ostream& out) {
  for (PageId s : seeds.seeds) out << graph.key(s) << '\n';
}

void write_queries(const QuerySet& queries, std::ostream& out) {
  for (const auto& q : queries.queries) out << q.id << '\t' << q.text << '\n';
}

void write_qrels(const Qrels& qrels, const WebGraph& graph, std::ostream& out) {
  for (std::size_t q = 0; q < qrels.num_queries(); ++q) {
    for (const auto& j : qrels.judgments(q)) {
      out << qrels.query_id(q) << " 0 " << graph.key(j.page) << ' ' << j.grade << '\n';
    }
  }
}

void write_quality_table(const QualityTable& table, const WebGraph& graph, std::ostream& out) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << graph.key(page_at(i)) << '\t' << format_double(table.scores()[i]) << '\n';
  }
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

}  // namespace fsim
