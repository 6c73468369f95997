#include "triscore/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "triscore/errors.hpp"

namespace triscore {

namespace {

// One decimal octet, 0..255, no leading zeros.
std::optional<uint32_t> parse_octet(const std::string& s) {
  if (s.empty() || s.size() > 3) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  uint32_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<uint32_t>(c - '0');
  }
  if (v > 255) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<int64_t> parse_i64(const std::string& s) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// (min, p, max) key that identifies a triplet regardless of orientation.
Triplet canonical(const Triplet& t) {
  if (t.client_ip < t.server_ip) return {t.client_ip, t.relation, t.server_ip};
  return t;
}

}  // namespace

// ---- IPv4 helpers ----------------------------------------------------------

std::optional<uint32_t> parse_ipv4(const std::string& text) {
  auto parts = split(text, '.');
  if (parts.size() != 4) return std::nullopt;
  uint32_t ip = 0;
  for (const auto& p : parts) {
    auto o = parse_octet(p);
    if (!o) return std::nullopt;
    ip = (ip << 8) | *o;
  }
  return ip;
}

std::string format_ipv4(uint32_t ip) {
  std::ostringstream os;
  os << ((ip >> 24) & 0xff) << '.' << ((ip >> 16) & 0xff) << '.' << ((ip >> 8) & 0xff) << '.'
     << (ip & 0xff);
  return os.str();
}

bool is_multicast(uint32_t ip) { return (ip >> 28) == 0xe; }
bool is_loopback(uint32_t ip) { return (ip >> 24) == 127; }
bool is_global_broadcast(uint32_t ip) { return ip == 0xffffffffu; }

Cidr Cidr::parse(const std::string& text) {
  auto pos = text.find('/');
  if (pos == std::string::npos) throw FormatError("cidr '" + text + "': missing prefix length");
  auto ip = parse_ipv4(text.substr(0, pos));
  if (!ip) throw FormatError("cidr '" + text + "': bad address");
  auto len = parse_i64(text.substr(pos + 1));
  if (!len || *len < 0 || *len > 32) throw FormatError("cidr '" + text + "': bad prefix length");
  Cidr c;
  c.prefix_len = static_cast<int>(*len);
  const uint32_t mask = c.prefix_len == 0 ? 0 : ~uint32_t{0} << (32 - c.prefix_len);
  c.network = *ip & mask;
  return c;
}

bool Cidr::contains(uint32_t ip) const {
  const uint32_t mask = prefix_len == 0 ? 0 : ~uint32_t{0} << (32 - prefix_len);
  return (ip & mask) == network;
}

std::optional<uint32_t> Cidr::broadcast_address() const {
  if (prefix_len > 30) return std::nullopt;  // /31 and /32 have no broadcast
  const uint32_t mask = prefix_len == 0 ? 0 : ~uint32_t{0} << (32 - prefix_len);
  return network | ~mask;
}

std::string Cidr::to_string() const {
  return format_ipv4(network) + "/" + std::to_string(prefix_len);
}

// ---- Configuration ----------------------------------------------------------

void IngestConfig::validate() const {
  if (internal_cidrs.empty()) throw ArgumentError("ingest config: internal_cidrs must be non-empty");
  if (train_window.start >= train_window.end) throw ArgumentError("ingest config: empty train window");
  if (test_window.start >= test_window.end) throw ArgumentError("ingest config: empty test window");
  if (train_window.end > test_window.start)
    throw ArgumentError("ingest config: train window must end before the test window starts");
}

IngestConfig IngestConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file: " + path);
  IngestConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "internal_cidr") {
      std::string value;
      if (!(ls >> value)) throw FormatError(path + ":" + std::to_string(lineno) + ": internal_cidr needs a value");
      cfg.internal_cidrs.push_back(Cidr::parse(value));
    } else if (key == "train_window" || key == "test_window") {
      int64_t a = 0, b = 0;
      if (!(ls >> a >> b))
        throw FormatError(path + ":" + std::to_string(lineno) + ": " + key + " needs start and end");
      (key == "train_window" ? cfg.train_window : cfg.test_window) = TimeWindow{a, b};
    } else {
      throw FormatError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

// ---- Log parsing ------------------------------------------------------------

ParseResult parse_connection_log(const std::string& path, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open connection log: " + path);
  return parse_connection_log(in, format);
}

ParseResult parse_connection_log(std::istream& in, LogFormat format) {
  const char sep = format == LogFormat::tsv ? '\t' : ',';
  std::string line;
  if (!std::getline(in, line)) throw FormatError("connection log: missing header row");

  auto header = split(strip(line), sep);
  std::unordered_map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[lower(strip(header[i]))] = i;
  for (const char* name : {"ts", "server_ip", "proto", "port", "client_ip"}) {
    if (!col.count(name)) throw FormatError(std::string("connection log: missing column '") + name + "'");
  }
  const size_t c_ts = col["ts"], c_server = col["server_ip"], c_proto = col["proto"],
               c_port = col["port"], c_client = col["client_ip"];

  ParseResult result;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    auto fields = split(line, sep);
    auto fail = [&](const std::string& msg) { result.row_errors.push_back({lineno, msg}); };

    if (fields.size() < header.size()) {
      fail("too few fields");
      continue;
    }
    auto ts = parse_i64(strip(fields[c_ts]));
    if (!ts) {
      fail("bad timestamp '" + strip(fields[c_ts]) + "'");
      continue;
    }
    const std::string server = strip(fields[c_server]);
    const std::string client = strip(fields[c_client]);
    if (!parse_ipv4(server)) {
      fail("bad server_ip '" + server + "'");
      continue;
    }
    if (!parse_ipv4(client)) {
      fail("bad client_ip '" + client + "'");
      continue;
    }
    if (server == client) {
      fail("server equals client");
      continue;
    }
    const std::string proto = lower(strip(fields[c_proto]));
    if (proto != "tcp" && proto != "udp") {
      fail("bad proto '" + strip(fields[c_proto]) + "'");
      continue;
    }
    auto port = parse_i64(strip(fields[c_port]));
    if (!port || *port < 0 || *port > 65535) {
      fail("port out of range '" + strip(fields[c_port]) + "'");
      continue;
    }
    result.observations.push_back(
        {server, proto + "/" + std::to_string(*port), client, *ts});
  }
  return result;
}

// ---- Filtering ---------------------------------------------------------------

std::vector<Observation> filter_observations(const std::vector<Observation>& obs,
                                             const IngestConfig& cfg) {
  cfg.validate();

  std::set<uint32_t> broadcast;
  for (const Cidr& c : cfg.internal_cidrs) {
    if (auto b = c.broadcast_address()) broadcast.insert(*b);
  }

  auto endpoint_ok = [&](const std::string& text) {
    auto ip = parse_ipv4(text);
    if (!ip) return false;
    if (is_multicast(*ip) || is_loopback(*ip) || is_global_broadcast(*ip)) return false;
    if (broadcast.count(*ip)) return false;
    return std::any_of(cfg.internal_cidrs.begin(), cfg.internal_cidrs.end(),
                       [&](const Cidr& c) { return c.contains(*ip); });
  };

  std::vector<Observation> kept;
  kept.reserve(obs.size());
  for (const Observation& o : obs) {
    if (o.server_ip == o.client_ip) continue;
    if (!endpoint_ok(o.server_ip) || !endpoint_ok(o.client_ip)) continue;
    kept.push_back(o);
  }
  return kept;
}

// ---- Dataset -----------------------------------------------------------------

Dataset build_dataset(const std::vector<Observation>& obs, const IngestConfig& cfg) {
  cfg.validate();

  std::set<Triplet> train;
  std::set<Triplet> test_raw;
  for (const Observation& o : obs) {
    Triplet t{o.server_ip, o.relation, o.client_ip};
    if (cfg.train_window.contains(o.timestamp)) {
      train.insert(t);
    } else if (cfg.test_window.contains(o.timestamp)) {
      test_raw.insert(t);
    }
    // Timestamps outside both windows are dropped.
  }
  if (train.empty()) throw DataError("build_dataset: no observations fall in the train window");

  Dataset ds;
  std::set<std::string> ips, relations;
  std::set<Triplet> train_canonical;
  for (const Triplet& t : train) {
    ips.insert(t.server_ip);
    ips.insert(t.client_ip);
    relations.insert(t.relation);
    train_canonical.insert(canonical(t));
  }
  ds.vocab_ips.assign(ips.begin(), ips.end());
  ds.vocab_relations.assign(relations.begin(), relations.end());
  ds.train.assign(train.begin(), train.end());

  // A triplet trained in either orientation is already whitelisted, so it
  // cannot serve as a test triplet; the same goes for a second orientation
  // of a test triplet we already kept.
  std::set<Triplet> test_canonical;
  for (const Triplet& t : test_raw) {
    if (train_canonical.count(canonical(t))) continue;
    if (!ips.count(t.server_ip) || !ips.count(t.client_ip) || !relations.count(t.relation)) continue;
    if (!test_canonical.insert(canonical(t)).second) continue;
    ds.test.push_back(t);
  }
  std::sort(ds.test.begin(), ds.test.end());
  return ds;
}

void Dataset::validate() const {
  if (train.empty()) throw DataError("dataset: train set is empty");
  std::set<std::string> ips(vocab_ips.begin(), vocab_ips.end());
  std::set<std::string> rels(vocab_relations.begin(), vocab_relations.end());
  if (ips.size() != vocab_ips.size()) throw DataError("dataset: duplicate vocab ip");
  if (rels.size() != vocab_relations.size()) throw DataError("dataset: duplicate vocab relation");
  if (!std::is_sorted(vocab_ips.begin(), vocab_ips.end()))
    throw DataError("dataset: vocab_ips not sorted");
  if (!std::is_sorted(vocab_relations.begin(), vocab_relations.end()))
    throw DataError("dataset: vocab_relations not sorted");

  std::set<Triplet> train_canonical;
  for (const Triplet& t : train) {
    if (!ips.count(t.server_ip) || !ips.count(t.client_ip) || !rels.count(t.relation))
      throw DataError("dataset: train triplet uses symbol outside vocabulary");
    train_canonical.insert(canonical(t));
  }
  for (const Triplet& t : test) {
    if (!ips.count(t.server_ip) || !ips.count(t.client_ip) || !rels.count(t.relation))
      throw DataError("dataset: test triplet uses symbol outside vocabulary");
    if (train_canonical.count(canonical(t)))
      throw DataError("dataset: test triplet overlaps train set");
  }
  for (const std::string& text : vocab_ips) {
    auto ip = parse_ipv4(text);
    if (!ip) throw DataError("dataset: bad vocabulary address '" + text + "'");
    if (is_multicast(*ip) || is_loopback(*ip) || is_global_broadcast(*ip))
      throw DataError("dataset: non-unicast vocabulary address '" + text + "'");
  }
}

namespace {

constexpr const char* kDatasetVersion = "triscore-dataset v1";

void write_triplet(std::ostream& out, const Triplet& t) {
  out << t.server_ip << '\t' << t.relation << '\t' << t.client_ip << '\n';
}

Triplet read_triplet(const std::string& line, const std::string& where) {
  auto fields = split(line, '\t');
  if (fields.size() != 3) throw FormatError("dataset: bad triplet record in " + where + ": '" + line + "'");
  return {fields[0], fields[1], fields[2]};
}

}  // namespace

void Dataset::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write dataset file: " + path);
  save(out);
}

void Dataset::save(std::ostream& out) const {
  out << kDatasetVersion << '\n';
  out << "[vocab_ips]\n";
  for (const auto& ip : vocab_ips) out << ip << '\n';
  out << "[vocab_relations]\n";
  for (const auto& r : vocab_relations) out << r << '\n';
  out << "[train]\n";
  for (const auto& t : train) write_triplet(out, t);
  out << "[test]\n";
  for (const auto& t : test) write_triplet(out, t);
}

Dataset Dataset::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset file: " + path);
  return load(in);
}

Dataset Dataset::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip(line) != kDatasetVersion)
    throw FormatError("dataset: missing or unsupported version line");

  Dataset ds;
  std::string section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      if (section != "[vocab_ips]" && section != "[vocab_relations]" && section != "[train]" &&
          section != "[test]")
        throw FormatError("dataset: unknown section " + section);
      continue;
    }
    if (section == "[vocab_ips]") {
      ds.vocab_ips.push_back(line);
    } else if (section == "[vocab_relations]") {
      ds.vocab_relations.push_back(line);
    } else if (section == "[train]") {
      ds.train.push_back(read_triplet(line, "[train]"));
    } else if (section == "[test]") {
      ds.test.push_back(read_triplet(line, "[test]"));
    } else {
      throw FormatError("dataset: record before first section");
    }
  }
  ds.validate();
  return ds;
}

}  // namespace triscore
