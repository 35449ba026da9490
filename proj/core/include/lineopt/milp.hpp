#ifndef LINEOPT_MILP_HPP
#define LINEOPT_MILP_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lineopt/lp.hpp"

namespace lineopt {

// Variable kinds of the network design formulation, one per symbol family.
enum class VarKind : std::uint8_t {
  x_rapid,       // edge built into the rapid line
  x_slow,        // edge kept in the re-routed slow line
  y_rapid,       // rapid node traversed without a station
  z_rapid,       // rapid station
  z_slow,        // slow stop
  f_pair,        // pair assigned to the public system
  f_rapid_arc,   // pair flow on a rapid arc
  f_slow_arc,    // pair flow on a slow arc
  f_transfer_sr, // slow-to-rapid transfer at a node
  f_transfer_rs, // rapid-to-slow transfer at a node
  v_origin_rapid,
  v_origin_slow,
  v_dest_rapid,
  v_dest_slow,
  h_rapid,       // linearization: rapid arc flow * station at the arc tail
  h_slow,
  other,
};

const char* to_string(VarKind k);

struct VarKey {
  VarKind kind = VarKind::other;
  int pair = -1;    // demand pair id; -1 for design variables
  int entity = -1;  // edge / node / arc id depending on kind

  bool operator==(const VarKey&) const = default;
  std::string to_string() const;
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind);
    h = h * 1000003u ^ static_cast<std::size_t>(k.pair + 1);
    h = h * 1000003u ^ static_cast<std::size_t>(k.entity + 1);
    return h;
  }
};

// Constraint families; one tag per row.
enum class RowFamily : std::uint8_t {
  budget_rapid, budget_slow,
  design_1, design_2, design_3, design_4, design_5, design_6, design_7, design_8,
  design_9, design_10, design_11, design_12, design_13, design_14, design_15, design_16,
  relation_3, relation_4, relation_5, relation_6, relation_7, relation_8,
  flow_1, flow_11, flow_2, flow_3, flow_4, flow_5, flow_6, flow_7,
  transfer_1, transfer_2, transfer_3, transfer_4, transfer_5, transfer_6,
  loc_allo_1, loc_allo_2, loc_allo_3,
  alignment_1, alignment_2,
  mode_choice,
  walk_origin_rapid, walk_origin_slow, walk_dest_rapid, walk_dest_slow,
  spacing,
  shape,
  lin_r1, lin_r2, lin_r3, lin_s1, lin_s2, lin_s3,
  benders_cut,
  other,
};

const char* to_string(RowFamily f);

struct RowTag {
  RowFamily family = RowFamily::other;
  int pair = -1;
  int entity = -1;
  std::string to_string() const;
};

// Solver-neutral sparse MILP: columns with bounds/integrality, linear rows,
// maximize flag. Row tags cover every row.
struct MilpModel {
  std::string name;
  std::vector<double> lower, upper, objective;
  std::vector<bool> is_integer;
  bool maximize = true;
  std::vector<LpRow> rows;
  std::vector<RowTag> row_tags;

  int num_cols() const { return static_cast<int>(lower.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_col(double lb, double ub, double obj, bool integer);
  int add_row(std::vector<std::pair<int, double>> coef, char sense, double rhs, RowTag tag);

  int rows_in_family(RowFamily f) const;
};

// Bidirectional map between formulation symbols and model columns.
class VarDirectory {
 public:
  int add(const VarKey& key);  // returns the new column index
  int column(const VarKey& key) const;            // -1 if absent
  int require(const VarKey& key) const;           // throws if absent
  const VarKey& key(int column) const { return keys_.at(static_cast<std::size_t>(column)); }
  int size() const { return static_cast<int>(keys_.size()); }
  const std::vector<VarKey>& keys() const { return keys_; }

 private:
  std::vector<VarKey> keys_;
  std::unordered_map<VarKey, int, VarKeyHash> index_;
};

}  // namespace lineopt

#endif  // LINEOPT_MILP_HPP
