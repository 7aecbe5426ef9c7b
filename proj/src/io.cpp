#include "qlb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qlb/errors.hpp"

namespace qlb {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw ConfigError("cannot open output file: " + path);
  return f;
}

void put_f64(std::ofstream& f, double v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double get_f64(std::ifstream& f, const std::string& path) {
  double v;
  f.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!f) throw ConfigError("truncated binary grid file: " + path);
  return v;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f = open_out(path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    f << (i ? "," : "") << columns[i];
  f << '\n';
  char buf[32];
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      f << (i ? "," : "") << buf;
    }
    f << '\n';
  }
  if (!f) throw ConfigError("write failure: " + path);
}

void write_wigner_binary(const std::string& path, const WignerField& field) {
  const PhaseSpaceGrid& g = field.grid;
  if (field.w.size() != static_cast<std::size_t>(g.nx) * g.np)
    throw std::invalid_argument("write_wigner_binary: field size does not match grid");
  std::ofstream f = open_out(path, std::ios::binary);
  put_f64(f, static_cast<double>(g.nx));
  put_f64(f, static_cast<double>(g.np));
  put_f64(f, g.x_min);
  put_f64(f, g.x_max);
  put_f64(f, g.p_min);
  put_f64(f, g.p_max);
  f.write(reinterpret_cast<const char*>(field.w.data()),
          static_cast<std::streamsize>(field.w.size() * sizeof(double)));
  if (!f) throw ConfigError("write failure: " + path);
}

WignerField read_wigner_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open grid file: " + path);
  WignerField field;
  const double nx = get_f64(f, path), np = get_f64(f, path);
  if (nx < 1 || np < 1 || nx != std::floor(nx) || np != std::floor(np))
    throw ConfigError("corrupt grid header: " + path);
  field.grid.nx = static_cast<int>(nx);
  field.grid.np = static_cast<int>(np);
  field.grid.x_min = get_f64(f, path);
  field.grid.x_max = get_f64(f, path);
  field.grid.p_min = get_f64(f, path);
  field.grid.p_max = get_f64(f, path);
  field.w.resize(static_cast<std::size_t>(field.grid.nx) * field.grid.np);
  f.read(reinterpret_cast<char*>(field.w.data()),
         static_cast<std::streamsize>(field.w.size() * sizeof(double)));
  if (!f) throw ConfigError("truncated binary grid file: " + path);
  return field;
}

void write_slice_binary(const std::string& path, const CoherenceSlice& slice) {
  const MomentumGrid3D& g = slice.grid;
  if (slice.values.size() != g.size())
    throw std::invalid_argument("write_slice_binary: field size does not match grid");
  std::ofstream f = open_out(path, std::ios::binary);
  // base header: node counts and per-axis range, as for the 2D layout
  put_f64(f, static_cast<double>(g.n));
  put_f64(f, static_cast<double>(g.n));
  put_f64(f, -g.p_max);
  put_f64(f, g.p_max);
  put_f64(f, -g.p_max);
  put_f64(f, g.p_max);
  // extension: complex flag + coherence vector
  put_f64(f, 1.0);
  put_f64(f, slice.K.x);
  put_f64(f, slice.K.y);
  put_f64(f, slice.K.z);
  f.write(reinterpret_cast<const char*>(slice.values.data()),
          static_cast<std::streamsize>(slice.values.size() * 2 * sizeof(double)));
  if (!f) throw ConfigError("write failure: " + path);
}

CoherenceSlice read_slice_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open grid file: " + path);
  CoherenceSlice slice;
  const double n1 = get_f64(f, path), n2 = get_f64(f, path);
  if (n1 != n2 || n1 < 5 || n1 != std::floor(n1))
    throw ConfigError("corrupt slice header: " + path);
  slice.grid.n = static_cast<int>(n1);
  const double lo = get_f64(f, path), hi = get_f64(f, path);
  get_f64(f, path);
  get_f64(f, path);
  if (lo != -hi || hi <= 0) throw ConfigError("corrupt slice header: " + path);
  slice.grid.p_max = hi;
  if (get_f64(f, path) != 1.0) throw ConfigError("corrupt slice header (complex flag): " + path);
  slice.K.x = get_f64(f, path);
  slice.K.y = get_f64(f, path);
  slice.K.z = get_f64(f, path);
  slice.values.resize(slice.grid.size());
  f.read(reinterpret_cast<char*>(slice.values.data()),
         static_cast<std::streamsize>(slice.values.size() * 2 * sizeof(double)));
  if (!f) throw ConfigError("truncated binary grid file: " + path);
  return slice;
}

Config Config::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str(), path);
}

Config Config::from_text(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (c.values_.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    c.values_[key] = value;
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

double Config::get_double(const std::string& key, double fallback) {
  const auto it = values_.find(key);
  double v = fallback;
  if (it != values_.end()) {
    consumed_.insert(key);
    std::size_t pos = 0;
    try {
      v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != it->second.size())
      throw ConfigError(origin_ + ": key '" + key + "': not a number: " + it->second);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  resolved_[key] = buf;
  return v;
}

long Config::get_long(const std::string& key, long fallback) {
  const auto it = values_.find(key);
  long v = fallback;
  if (it != values_.end()) {
    consumed_.insert(key);
    std::size_t pos = 0;
    try {
      v = std::stol(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != it->second.size())
      throw ConfigError(origin_ + ": key '" + key + "': not an integer: " + it->second);
  }
  resolved_[key] = std::to_string(v);
  return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  const auto it = values_.find(key);
  std::string v = fallback;
  if (it != values_.end()) {
    consumed_.insert(key);
    v = it->second;
  }
  resolved_[key] = v;
  return v;
}

void Config::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

}  // namespace qlb
