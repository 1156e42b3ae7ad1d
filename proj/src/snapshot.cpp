#include "nsrlab/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nsrlab {

void Snapshot::add(std::string name, Shape shape, std::vector<double> values) {
  if (values.size() != shape.size()) {
    throw std::invalid_argument("Snapshot::add: " + name + " has " +
                                std::to_string(values.size()) + " values for shape " +
                                to_string(shape));
  }
  if (name.empty() || name.find_first_of(" \t\n#") != std::string::npos) {
    throw std::invalid_argument("Snapshot::add: bad entry name '" + name + "'");
  }
  if (find(name) != nullptr) throw std::invalid_argument("Snapshot::add: duplicate " + name);
  entries_.push_back({std::move(name), shape, std::move(values)});
}

const SnapshotEntry* Snapshot::find(const std::string& name) const {
  for (const SnapshotEntry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const SnapshotEntry& Snapshot::get(const std::string& name, Shape expected) const {
  const SnapshotEntry* e = find(name);
  if (e == nullptr) throw std::runtime_error("snapshot: missing entry " + name);
  if (e->shape != expected) {
    throw std::runtime_error("snapshot: " + name + " has shape " + to_string(e->shape) +
                             ", expected " + to_string(expected));
  }
  return *e;
}

void Snapshot::write(std::ostream& out) const {
  char buf[40];
  for (const SnapshotEntry& e : entries_) {
    out << e.name << ' ' << e.shape.rows << ' ' << e.shape.cols;
    for (double v : e.values) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

Snapshot Snapshot::read(std::istream& in) {
  Snapshot snap;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string name;
    Shape shape;
    if (!(row >> name >> shape.rows >> shape.cols)) {
      throw std::runtime_error("snapshot: bad entry header on line " + std::to_string(line_no));
    }
    std::vector<double> values(shape.size());
    for (double& v : values) {
      std::string token;
      if (!(row >> token)) {
        throw std::runtime_error("snapshot: too few values for " + name + " on line " +
                                 std::to_string(line_no));
      }
      try {
        std::size_t used = 0;
        v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw std::runtime_error("snapshot: bad number '" + token + "' on line " +
                                 std::to_string(line_no));
      }
    }
    std::string extra;
    if (row >> extra) {
      throw std::runtime_error("snapshot: too many values for " + name + " on line " +
                               std::to_string(line_no));
    }
    try {
      snap.add(name, shape, std::move(values));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(e.what());
    }
  }
  return snap;
}

Snapshot to_snapshot(const NSRParams& params) {
  Snapshot snap;
  snap.add_scalar("lambda", params.lambda);
  for (const ad::Parameter* p : params.parameters()) snap.add(p->name, p->shape, p->value);
  return snap;
}

NSRParams nsr_from_snapshot(const Snapshot& snap) {
  const SnapshotEntry* v1 = snap.find("v1");
  if (v1 == nullptr) throw std::runtime_error("snapshot: missing entry v1");
  const std::size_t r = v1->shape.rows;
  const std::size_t n = v1->shape.cols;
  NSRParams p(n, r, snap.scalar("lambda"));
  for (ad::Parameter* param : p.parameters()) param->value = snap.get(param->name, param->shape).values;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("snapshot: ") + e.what());
  }
  return p;
}

Snapshot to_snapshot(const MLPParams& params) {
  Snapshot snap;
  snap.add_scalar("linear_output", params.output == MlpOutput::kLinear ? 1.0 : 0.0);
  for (const ad::Parameter* p : params.parameters()) snap.add(p->name, p->shape, p->value);
  return snap;
}

MLPParams mlp_from_snapshot(const Snapshot& snap) {
  const SnapshotEntry* w_in = snap.find("w_in");
  if (w_in == nullptr) throw std::runtime_error("snapshot: missing entry w_in");
  const MlpOutput output =
      snap.scalar("linear_output") != 0.0 ? MlpOutput::kLinear : MlpOutput::kSigmoid;
  MLPParams p(w_in->shape.cols, w_in->shape.rows, output);
  for (ad::Parameter* param : p.parameters()) param->value = snap.get(param->name, param->shape).values;
  return p;
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  snap.write(out);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Snapshot::read(in);
}

}  // namespace nsrlab
