#include "qafactor/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace qaf {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens_of(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  std::istringstream ss(s);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

std::size_t to_index(const std::string& t, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) parse_fail(line, "bad index '" + t + "'");
  return v;
}

double to_value(const std::string& t, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size()) parse_fail(line, "bad number '" + t + "'");
  return v;
}

template <class Fn>
void for_each_line(std::istream& is, Fn&& fn) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    auto tok = tokens_of(raw);
    if (!tok.empty()) fn(tok, line);
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_model(std::ostream& os, const IsingModel& model) {
  os << "n " << model.size() << '\n';
  const auto h = model.biases();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0.0) os << "h " << i << ' ' << format_double(h[i]) << '\n';
  for (const auto& [key, v] : model.couplings())
    if (v != 0.0) os << "J " << key.first << ' ' << key.second << ' ' << format_double(v) << '\n';
}

IsingModel read_model(std::istream& is) {
  std::optional<std::size_t> n;
  std::map<std::size_t, double> hs;
  CouplingMap J;
  for_each_line(is, [&](const std::vector<std::string>& tok, std::size_t line) {
    const std::string& key = tok[0];
    if (key == "n") {
      if (tok.size() != 2) parse_fail(line, "expected 'n <count>'");
      if (n) parse_fail(line, "duplicate 'n' line");
      n = to_index(tok[1], line);
    } else if (key == "h") {
      if (tok.size() != 3) parse_fail(line, "expected 'h <i> <value>'");
      if (!n) parse_fail(line, "'h' before 'n'");
      auto i = to_index(tok[1], line);
      if (i >= *n) parse_fail(line, "spin index " + tok[1] + " out of range");
      if (!hs.emplace(i, to_value(tok[2], line)).second) parse_fail(line, "duplicate h for spin " + tok[1]);
    } else if (key == "J") {
      if (tok.size() != 4) parse_fail(line, "expected 'J <i> <j> <value>'");
      if (!n) parse_fail(line, "'J' before 'n'");
      auto i = to_index(tok[1], line), j = to_index(tok[2], line);
      if (i >= j) parse_fail(line, "coupling indices must satisfy i < j");
      if (j >= *n) parse_fail(line, "spin index " + tok[2] + " out of range");
      if (!J.emplace(SpinPair{i, j}, to_value(tok[3], line)).second)
        parse_fail(line, "duplicate coupling " + tok[1] + " " + tok[2]);
    } else {
      parse_fail(line, "unknown record '" + key + "'");
    }
  });
  if (!n) throw Error(ErrorKind::Parse, "missing 'n <count>' line");
  std::vector<double> h(*n, 0.0);
  for (auto [i, v] : hs) h[i] = v;
  try {
    return IsingModel(*n, std::move(h), std::move(J));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

void write_ports(std::ostream& os, const PortMap& ports) {
  for (const auto& [name, idx] : ports) os << "port " << name << ' ' << idx << '\n';
}

PortMap read_ports(std::istream& is) {
  PortMap out;
  for_each_line(is, [&](const std::vector<std::string>& tok, std::size_t line) {
    if (tok[0] != "port" || tok.size() != 3) parse_fail(line, "expected 'port <name> <spin-index>'");
    if (!out.emplace(tok[1], to_index(tok[2], line)).second) parse_fail(line, "duplicate port " + tok[1]);
  });
  return out;
}

void write_roles(std::ostream& os, const std::vector<RoleEntry>& roles) {
  auto sorted = roles;
  std::sort(sorted.begin(), sorted.end(), [](const RoleEntry& a, const RoleEntry& b) {
    return std::tie(a.kind, a.bit) < std::tie(b.kind, b.bit);
  });
  for (const auto& r : sorted) os << "role " << r.kind << ' ' << r.bit << ' ' << r.spin << '\n';
}

std::vector<RoleEntry> read_roles(std::istream& is) {
  std::vector<RoleEntry> out;
  std::set<std::pair<char, std::size_t>> seen;
  for_each_line(is, [&](const std::vector<std::string>& tok, std::size_t line) {
    if (tok[0] != "role" || tok.size() != 4) parse_fail(line, "expected 'role <A|B|P> <bit> <spin>'");
    if (tok[1] != "A" && tok[1] != "B" && tok[1] != "P") parse_fail(line, "role kind must be A, B or P");
    RoleEntry r{tok[1][0], to_index(tok[2], line), to_index(tok[3], line)};
    if (!seen.emplace(r.kind, r.bit).second) parse_fail(line, "duplicate role " + tok[1] + " " + tok[2]);
    out.push_back(r);
  });
  return out;
}

IsingModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return read_model(in);
}

void save_model_file(const std::string& path, const IsingModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  write_model(out, model);
}

}  // namespace qaf
