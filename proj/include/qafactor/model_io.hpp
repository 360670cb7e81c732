#pragma once

// Line-oriented text formats.
//
//   model:  n <count>
//           h <i> <value>
//           J <i> <j> <value>      (i < j)
//   ports:  port <name> <spin-index>
//   roles:  role <A|B|P> <bit-index> <spin-index>
//
// '#' starts a comment. Writers emit sorted lines and the shortest decimal
// that round-trips each double; readers accept any order.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qafactor/ising.hpp"

namespace qaf {

using PortMap = std::map<std::string, SpinIndex>;

struct RoleEntry {
  char kind;  // 'A', 'B' or 'P'
  std::size_t bit;
  SpinIndex spin;
  friend bool operator==(const RoleEntry&, const RoleEntry&) = default;
};

std::string format_double(double v);

void write_model(std::ostream& os, const IsingModel& model);
IsingModel read_model(std::istream& is);

void write_ports(std::ostream& os, const PortMap& ports);
PortMap read_ports(std::istream& is);

void write_roles(std::ostream& os, const std::vector<RoleEntry>& roles);
std::vector<RoleEntry> read_roles(std::istream& is);

IsingModel load_model_file(const std::string& path);
void save_model_file(const std::string& path, const IsingModel& model);

}  // namespace qaf
