#include "lineopt/milp.hpp"

#include <sstream>
#include <stdexcept>

namespace lineopt {

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::x_rapid: return "xR";
    case VarKind::x_slow: return "xS";
    case VarKind::y_rapid: return "yR";
    case VarKind::z_rapid: return "zR";
    case VarKind::z_slow: return "zS";
    case VarKind::f_pair: return "f";
    case VarKind::f_rapid_arc: return "fR";
    case VarKind::f_slow_arc: return "fS";
    case VarKind::f_transfer_sr: return "fSR";
    case VarKind::f_transfer_rs: return "fRS";
    case VarKind::v_origin_rapid: return "vOR";
    case VarKind::v_origin_slow: return "vOS";
    case VarKind::v_dest_rapid: return "vDR";
    case VarKind::v_dest_slow: return "vDS";
    case VarKind::h_rapid: return "hR";
    case VarKind::h_slow: return "hS";
    case VarKind::other: return "var";
  }
  return "var";
}

std::string VarKey::to_string() const {
  std::ostringstream os;
  os << lineopt::to_string(kind);
  os << "(";
  bool first = true;
  if (pair >= 0) {
    os << "w=" << pair;
    first = false;
  }
  if (entity >= 0) {
    if (!first) os << ",";
    os << entity;
  }
  os << ")";
  return os.str();
}

const char* to_string(RowFamily f) {
  switch (f) {
    case RowFamily::budget_rapid: return "budget_rapid";
    case RowFamily::budget_slow: return "budget_slow";
    case RowFamily::design_1: return "design_1";
    case RowFamily::design_2: return "design_2";
    case RowFamily::design_3: return "design_3";
    case RowFamily::design_4: return "design_4";
    case RowFamily::design_5: return "design_5";
    case RowFamily::design_6: return "design_6";
    case RowFamily::design_7: return "design_7";
    case RowFamily::design_8: return "design_8";
    case RowFamily::design_9: return "design_9";
    case RowFamily::design_10: return "design_10";
    case RowFamily::design_11: return "design_11";
    case RowFamily::design_12: return "design_12";
    case RowFamily::design_13: return "design_13";
    case RowFamily::design_14: return "design_14";
    case RowFamily::design_15: return "design_15";
    case RowFamily::design_16: return "design_16";
    case RowFamily::relation_3: return "relation_3";
    case RowFamily::relation_4: return "relation_4";
    case RowFamily::relation_5: return "relation_5";
    case RowFamily::relation_6: return "relation_6";
    case RowFamily::relation_7: return "relation_7";
    case RowFamily::relation_8: return "relation_8";
    case RowFamily::flow_1: return "flow_1";
    case RowFamily::flow_11: return "flow_11";
    case RowFamily::flow_2: return "flow_2";
    case RowFamily::flow_3: return "flow_3";
    case RowFamily::flow_4: return "flow_4";
    case RowFamily::flow_5: return "flow_5";
    case RowFamily::flow_6: return "flow_6";
    case RowFamily::flow_7: return "flow_7";
    case RowFamily::transfer_1: return "transfer_1";
    case RowFamily::transfer_2: return "transfer_2";
    case RowFamily::transfer_3: return "transfer_3";
    case RowFamily::transfer_4: return "transfer_4";
    case RowFamily::transfer_5: return "transfer_5";
    case RowFamily::transfer_6: return "transfer_6";
    case RowFamily::loc_allo_1: return "loc_allo_1";
    case RowFamily::loc_allo_2: return "loc_allo_2";
    case RowFamily::loc_allo_3: return "loc_allo_3";
    case RowFamily::alignment_1: return "alignment_1";
    case RowFamily::alignment_2: return "alignment_2";
    case RowFamily::mode_choice: return "mode_choice";
    case RowFamily::walk_origin_rapid: return "walk_origin_rapid";
    case RowFamily::walk_origin_slow: return "walk_origin_slow";
    case RowFamily::walk_dest_rapid: return "walk_dest_rapid";
    case RowFamily::walk_dest_slow: return "walk_dest_slow";
    case RowFamily::spacing: return "spacing";
    case RowFamily::shape: return "shape";
    case RowFamily::lin_r1: return "lin_r1";
    case RowFamily::lin_r2: return "lin_r2";
    case RowFamily::lin_r3: return "lin_r3";
    case RowFamily::lin_s1: return "lin_s1";
    case RowFamily::lin_s2: return "lin_s2";
    case RowFamily::lin_s3: return "lin_s3";
    case RowFamily::benders_cut: return "benders_cut";
    case RowFamily::other: return "row";
  }
  return "row";
}

std::string RowTag::to_string() const {
  std::ostringstream os;
  os << lineopt::to_string(family);
  if (pair >= 0) os << " w=" << pair;
  if (entity >= 0) os << " id=" << entity;
  return os.str();
}

int MilpModel::add_col(double lb, double ub, double obj, bool integer) {
  lower.push_back(lb);
  upper.push_back(ub);
  objective.push_back(obj);
  is_integer.push_back(integer);
  return num_cols() - 1;
}

int MilpModel::add_row(std::vector<std::pair<int, double>> coef, char sense, double rhs, RowTag tag) {
  if (coef.empty()) throw std::logic_error("MilpModel: empty row " + tag.to_string());
  rows.push_back(LpRow{std::move(coef), sense, rhs});
  row_tags.push_back(tag);
  return num_rows() - 1;
}

int MilpModel::rows_in_family(RowFamily f) const {
  int n = 0;
  for (const RowTag& t : row_tags)
    if (t.family == f) ++n;
  return n;
}

int VarDirectory::add(const VarKey& key) {
  auto [it, fresh] = index_.emplace(key, static_cast<int>(keys_.size()));
  if (!fresh) throw std::logic_error("VarDirectory: duplicate key " + key.to_string());
  keys_.push_back(key);
  return it->second;
}

int VarDirectory::column(const VarKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

int VarDirectory::require(const VarKey& key) const {
  const int c = column(key);
  if (c < 0) throw std::logic_error("VarDirectory: unknown key " + key.to_string());
  return c;
}

}  // namespace lineopt
