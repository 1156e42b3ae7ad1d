#pragma once

// Plain-text parameter snapshots. One entry per line:
//   name rows cols v_0 v_1 ... (row-major, 17 significant digits)
// Blank lines and lines starting with '#' are ignored.

#include <iosfwd>
#include <string>
#include <vector>

#include "nsrlab/matrix.hpp"
#include "nsrlab/mlp.hpp"
#include "nsrlab/nsr.hpp"

namespace nsrlab {

struct SnapshotEntry {
  std::string name;
  Shape shape;
  std::vector<double> values;

  bool operator==(const SnapshotEntry&) const = default;
};

class Snapshot {
 public:
  void add(std::string name, Shape shape, std::vector<double> values);
  void add_scalar(std::string name, double value) { add(std::move(name), Shape{1, 1}, {value}); }

  // Throws std::runtime_error when the entry is missing or has another shape.
  const SnapshotEntry& get(const std::string& name, Shape expected) const;
  const SnapshotEntry* find(const std::string& name) const;
  double scalar(const std::string& name) const { return get(name, Shape{1, 1}).values[0]; }

  const std::vector<SnapshotEntry>& entries() const { return entries_; }

  void write(std::ostream& out) const;
  // Throws std::runtime_error on malformed text.
  static Snapshot read(std::istream& in);

  bool operator==(const Snapshot&) const = default;

 private:
  std::vector<SnapshotEntry> entries_;
};

Snapshot to_snapshot(const NSRParams& params);
NSRParams nsr_from_snapshot(const Snapshot& snap);

Snapshot to_snapshot(const MLPParams& params);
MLPParams mlp_from_snapshot(const Snapshot& snap);

void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

}  // namespace nsrlab
