#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qlb/diffusive.hpp"
#include "qlb/qlbe_grid.hpp"

namespace qlb {

// CSV with a header row; values printed with 17 significant digits so doubles
// round-trip exactly.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Binary grid snapshot.  Header: nx, np, x_min, x_max, p_min, p_max stored as
// 64-bit floats, followed by row-major 64-bit float values.  The slice variant
// extends the header with a complex flag and the coherence vector K, and
// stores interleaved (re, im) pairs.
void write_wigner_binary(const std::string& path, const WignerField& field);
WignerField read_wigner_binary(const std::string& path);

void write_slice_binary(const std::string& path, const CoherenceSlice& slice);
CoherenceSlice read_slice_binary(const std::string& path);

// Flat key=value configuration.  Keys carry section prefixes in the key text
// itself (gas.m, mc.n_traj); '#' starts a comment; blank lines ignored.
// Unknown keys are rejected by finish(), so every key must be consumed by one
// of the typed getters.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_text(const std::string& text, const std::string& origin = "<text>");

  // CLI overrides: replace or add a key after file parsing.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback);
  long get_long(const std::string& key, long fallback);
  std::string get_string(const std::string& key, const std::string& fallback);

  // Throws ConfigError listing any keys never consumed by a getter.
  void finish() const;

  // Fully resolved key=value lines (defaults included), sorted by key; the
  // echo written next to every run's outputs.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> consumed_;
  std::string origin_;
};

}  // namespace qlb
