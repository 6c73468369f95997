#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace triscore {

// ---- IPv4 helpers ----------------------------------------------------------

// Strict dotted-quad parser: four decimal octets, no leading zeros.
std::optional<uint32_t> parse_ipv4(const std::string& text);
std::string format_ipv4(uint32_t ip);

bool is_multicast(uint32_t ip);          // 224.0.0.0/4
bool is_loopback(uint32_t ip);           // 127.0.0.0/8
bool is_global_broadcast(uint32_t ip);   // 255.255.255.255

struct Cidr {
  uint32_t network = 0;  // already masked to the prefix
  int prefix_len = 0;

  static Cidr parse(const std::string& text);
  bool contains(uint32_t ip) const;
  // Directed broadcast address of this block, if the block has one
  // (prefixes longer than /30 have no distinct broadcast address).
  std::optional<uint32_t> broadcast_address() const;
  std::string to_string() const;
};

// ---- Observations and configuration ----------------------------------------

// One connection-log row: server address, "proto/port" relation key, client
// address, and the observation time.
struct Observation {
  std::string server_ip;
  std::string relation;  // e.g. "tcp/502"; client ephemeral ports carry no signal and are never recorded
  std::string client_ip;
  int64_t timestamp = 0;
};

struct TimeWindow {
  int64_t start = 0;  // inclusive
  int64_t end = 0;    // exclusive
  bool contains(int64_t t) const { return t >= start && t < end; }
};

struct IngestConfig {
  std::vector<Cidr> internal_cidrs;
  TimeWindow train_window;
  TimeWindow test_window;

  // Throws ArgumentError unless cidrs are non-empty and the train window
  // ends before the test window starts.
  void validate() const;

  static IngestConfig load(const std::string& path);
};

// ---- Log parsing ------------------------------------------------------------

enum class LogFormat { tsv, csv };

struct RowError {
  int line = 0;  // 1-based line number in the input file
  std::string message;
};

struct ParseResult {
  std::vector<Observation> observations;  // input row order
  std::vector<RowError> row_errors;
};

// Reads a UTF-8 connection log with a header row naming, in any order, the
// columns {ts, server_ip, proto, port, client_ip}. Malformed rows are
// collected with their line numbers and skipped; a missing column is a
// FormatError.
ParseResult parse_connection_log(const std::string& path, LogFormat format);
ParseResult parse_connection_log(std::istream& in, LogFormat format);

// Keeps only observations with both endpoints inside internal_cidrs, no
// multicast/broadcast/loopback endpoint, and distinct endpoints.
std::vector<Observation> filter_observations(const std::vector<Observation>& obs,
                                             const IngestConfig& cfg);

// ---- Dataset ----------------------------------------------------------------

struct Triplet {
  std::string server_ip;
  std::string relation;
  std::string client_ip;

  auto operator<=>(const Triplet&) const = default;
};

// Canonical train/test triplet sets plus the vocabulary induced by train.
// Train and test are sorted and duplicate free; every test triplet draws
// all three symbols from the train vocabulary.
struct Dataset {
  std::vector<Triplet> train;
  std::vector<Triplet> test;
  std::vector<std::string> vocab_ips;        // sorted lexicographically
  std::vector<std::string> vocab_relations;  // sorted lexicographically

  void validate() const;

  void save(const std::string& path) const;
  void save(std::ostream& out) const;
  static Dataset load(const std::string& path);
  static Dataset load(std::istream& in);
};

// Splits filtered observations into train/test by window. Test drops any
// triplet already trained (in either orientation) and any triplet using an
// IP or relation absent from the train vocabulary.
Dataset build_dataset(const std::vector<Observation>& obs, const IngestConfig& cfg);

}  // namespace triscore
