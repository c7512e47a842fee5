#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "fsim/simulator.hpp"

namespace fsim {

namespace {

constexpr std::string_view kMagic = "#fsim-trace v1";

// `name=value` tokens after a line tag.
std::map<std::string, std::string, std::less<>> parse_fields(std::string_view rest) {
  std::map<std::string, std::string, std::less<>> out;
  std::istringstream in{std::string(rest)};
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    out.emplace(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value, int base = 10) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, base);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void write_trace(const CrawlTrace& trace, const WebGraph& graph, std::ostream& out) {
  out << kMagic << " digest=" << to_hex(trace.config_digest()) << " corpus=" << to_hex(trace.corpus_digest)
      << " seeds=" << to_hex(trace.seeds_digest) << " policy=" << to_string(trace.config.policy)
      << " T=" << trace.config.checkpoint_interval << " budget=" << trace.config.budget
      << " rng_seed=" << trace.config.rng_seed << '\n';
  for (PageId p : trace.order) out << graph.key(p) << '\n';
  out << "#checkpoints";
  for (CrawlTime c : trace.checkpoints) out << ' ' << c;
  out << '\n';
  const auto& s = trace.stats;
  out << "#stats frontier_peak=" << s.frontier_peak << " rediscoveries=" << s.rediscoveries
      << " priority_updates=" << s.priority_updates << " links_to_crawled=" << s.links_to_crawled
      << " dangling_pages_crawled=" << s.dangling_pages_crawled << '\n';
  out << "#end pages=" << trace.order.size() << '\n';
}

void write_trace(const CrawlTrace& trace, const WebGraph& graph, const std::string& path) {
  std::ostringstream buf;
  write_trace(trace, graph, buf);
  write_text_file(path, buf.str());
}

CrawlTrace read_trace(std::istream& in, const WebGraph& graph, const std::string& source) {
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CrawlTrace trace;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_checkpoints = false;
  bool have_stats = false;
  std::uint64_t header_digest = 0;

  auto fail = [&](std::size_t at, const std::string& what) -> LoadError {
    return LoadError(source, line_no, what + " (byte offset " + std::to_string(at) + ")");
  };

  while (offset < data.size()) {
    const std::size_t line_start = offset;
    const auto nl = data.find('\n', offset);
    if (nl == std::string::npos) throw fail(line_start, "truncated trace: missing final newline");
    std::string_view line(data.data() + offset, nl - offset);
    offset = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!have_header) {
      if (!line.starts_with(kMagic)) throw fail(line_start, "not a trace file (missing '#fsim-trace v1' header)");
      const auto fields = parse_fields(line.substr(kMagic.size()));
      auto get = [&](std::string_view name) -> const std::string& {
        const auto it = fields.find(name);
        if (it == fields.end()) throw fail(line_start, "header lacks '" + std::string(name) + "'");
        return it->second;
      };
      if (!parse_number(get("digest"), header_digest, 16) || !parse_number(get("corpus"), trace.corpus_digest, 16) ||
          !parse_number(get("seeds"), trace.seeds_digest, 16) ||
          !parse_number(get("T"), trace.config.checkpoint_interval) ||
          !parse_number(get("budget"), trace.config.budget) || !parse_number(get("rng_seed"), trace.config.rng_seed)) {
        throw fail(line_start, "malformed header field");
      }
      try {
        trace.config.policy = parse_policy(get("policy"));
      } catch (const ValidationError& e) {
        throw fail(line_start, e.what());
      }
      if (trace.corpus_digest != graph.digest()) {
        throw fail(line_start, "trace was recorded on a different graph (corpus digest mismatch)");
      }
      have_header = true;
      continue;
    }

    if (line.starts_with("#checkpoints")) {
      std::istringstream cs{std::string(line.substr(12))};
      std::string tok;
      while (cs >> tok) {
        CrawlTime c = 0;
        if (!parse_number(tok, c)) throw fail(line_start, "malformed checkpoint '" + tok + "'");
        trace.checkpoints.push_back(c);
      }
      have_checkpoints = true;
    } else if (line.starts_with("#stats")) {
      const auto f = parse_fields(line.substr(6));
      auto read = [&](std::string_view name, std::size_t& dst) {
        const auto it = f.find(name);
        if (it == f.end() || !parse_number(it->second, dst)) throw fail(line_start, "malformed stats line");
      };
      read("frontier_peak", trace.stats.frontier_peak);
      read("rediscoveries", trace.stats.rediscoveries);
      read("priority_updates", trace.stats.priority_updates);
      read("links_to_crawled", trace.stats.links_to_crawled);
      read("dangling_pages_crawled", trace.stats.dangling_pages_crawled);
      have_stats = true;
    } else if (line.starts_with("#end")) {
      const auto f = parse_fields(line.substr(4));
      std::size_t pages = 0;
      const auto it = f.find("pages");
      if (it == f.end() || !parse_number(it->second, pages)) throw fail(line_start, "malformed end marker");
      if (pages != trace.order.size()) {
        throw fail(line_start, "end marker says " + std::to_string(pages) + " pages, found " +
                                   std::to_string(trace.order.size()));
      }
      if (!have_checkpoints || !have_stats) throw fail(line_start, "metadata block incomplete");
      if (offset != data.size()) throw fail(offset, "unexpected data after end marker");
      if (trace.config_digest() != header_digest) throw fail(0, "config digest does not match header fields");
      for (std::size_t i = 0; i < trace.checkpoints.size(); ++i) {
        if (trace.checkpoints[i] > trace.order.size() || (i > 0 && trace.checkpoints[i] <= trace.checkpoints[i - 1])) {
          throw fail(0, "checkpoints must increase and not exceed the crawl length");
        }
      }
      return trace;
    } else if (line.starts_with("#")) {
      throw fail(line_start, "unknown metadata line");
    } else {
      if (have_checkpoints) throw fail(line_start, "page key after metadata block");
      const auto page = graph.find(line);
      if (!page) throw fail(line_start, "unknown page '" + std::string(line) + "'");
      trace.order.push_back(*page);
    }
  }
  throw fail(data.size(), have_header ? "truncated trace: missing end marker" : "empty trace file");
}

CrawlTrace read_trace(const std::string& path, const WebGraph& graph) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");
  return read_trace(in, graph, path);
}

}  // namespace fsim
