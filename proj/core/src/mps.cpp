#include "lineopt/mps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lineopt {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

std::string write_mps(const MilpModel& model) {
  std::ostringstream os;
  for (int i = 0; i < model.num_rows(); ++i)
    os << "* ROWTAG R" << i << " " << model.row_tags[static_cast<std::size_t>(i)].to_string() << "\n";
  os << "NAME " << (model.name.empty() ? "MODEL" : model.name) << "\n";
  os << "OBJSENSE\n " << (model.maximize ? "MAX" : "MIN") << "\n";
  os << "ROWS\n";
  os << " N OBJ\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const char s = model.rows[static_cast<std::size_t>(i)].sense;
    os << " " << (s == '<' ? 'L' : s == '>' ? 'G' : 'E') << " R" << i << "\n";
  }

  // Column-major entries.
  std::vector<std::vector<std::pair<int, double>>> bycol(static_cast<std::size_t>(model.num_cols()));
  for (int i = 0; i < model.num_rows(); ++i)
    for (const auto& [j, v] : model.rows[static_cast<std::size_t>(i)].coef)
      bycol[static_cast<std::size_t>(j)].emplace_back(i, v);

  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_cols(); ++j) {
    const bool is_int = model.is_integer[static_cast<std::size_t>(j)];
    if (is_int && !in_int) {
      os << " MARKER" << marker++ << " 'MARKER' 'INTORG'\n";
      in_int = true;
    } else if (!is_int && in_int) {
      os << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
      in_int = false;
    }
    const double c = model.objective[static_cast<std::size_t>(j)];
    if (c != 0.0) os << " C" << j << " OBJ " << num(c) << "\n";
    for (const auto& [i, v] : bycol[static_cast<std::size_t>(j)])
      os << " C" << j << " R" << i << " " << num(v) << "\n";
    if (c == 0.0 && bycol[static_cast<std::size_t>(j)].empty())
      os << " C" << j << " OBJ 0\n";  // keep empty columns declared
  }
  if (in_int) os << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  os << "RHS\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const double r = model.rows[static_cast<std::size_t>(i)].rhs;
    if (r != 0.0) os << " RHS R" << i << " " << num(r) << "\n";
  }

  os << "BOUNDS\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    const double lo = model.lower[static_cast<std::size_t>(j)];
    const double hi = model.upper[static_cast<std::size_t>(j)];
    if (model.is_integer[static_cast<std::size_t>(j)] && lo == 0.0 && hi == 1.0) {
      os << " BV BND C" << j << "\n";
      continue;
    }
    if (lo == hi) {
      os << " FX BND C" << j << " " << num(lo) << "\n";
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      os << " FR BND C" << j << "\n";
      continue;
    }
    if (std::isfinite(lo)) {
      if (lo != 0.0) os << " LO BND C" << j << " " << num(lo) << "\n";
    } else {
      os << " MI BND C" << j << "\n";
    }
    if (std::isfinite(hi)) os << " UP BND C" << j << " " << num(hi) << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

void write_mps_file(const MilpModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << write_mps(model);
}

MilpModel read_mps(const std::string& text) {
  MilpModel model;
  std::istringstream is(text);
  std::string line;
  enum class Section { none, rows, columns, rhs, bounds, objsense, done };
  Section sec = Section::none;

  std::map<std::string, int> row_index;   // named row -> model row
  std::map<std::string, int> col_index;
  bool in_int = false;

  auto get_col = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    const int j = model.add_col(0.0, kInf, 0.0, in_int);
    col_index.emplace(name, j);
    return j;
  };

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '*') continue;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string& kw = tok[0];
      if (kw == "NAME") {
        if (tok.size() > 1) model.name = tok[1];
        continue;
      }
      if (kw == "OBJSENSE") { sec = Section::objsense; continue; }
      if (kw == "ROWS") { sec = Section::rows; continue; }
      if (kw == "COLUMNS") { sec = Section::columns; continue; }
      if (kw == "RHS") { sec = Section::rhs; continue; }
      if (kw == "BOUNDS") { sec = Section::bounds; continue; }
      if (kw == "RANGES") { throw std::runtime_error("mps: RANGES not supported"); }
      if (kw == "ENDATA") { sec = Section::done; break; }
      throw std::runtime_error("mps: unknown section " + kw);
    }

    switch (sec) {
      case Section::objsense:
        if (!tok.empty()) model.maximize = tok[0] == "MAX" || tok[0] == "MAXIMIZE";
        break;
      case Section::rows: {
        if (tok.size() != 2) throw std::runtime_error("mps: malformed ROWS line: " + line);
        const char t = tok[0][0];
        if (t == 'N') break;  // objective row, named implicitly
        char sense;
        if (t == 'L') sense = '<';
        else if (t == 'G') sense = '>';
        else if (t == 'E') sense = '=';
        else throw std::runtime_error("mps: unknown row type " + tok[0]);
        row_index[tok[1]] = model.num_rows();
        model.rows.push_back(LpRow{{}, sense, 0.0});
        model.row_tags.push_back(RowTag{RowFamily::other, -1, -1});
        break;
      }
      case Section::columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_int = true;
          else if (tok[2] == "'INTEND'") in_int = false;
          break;
        }
        if (tok.size() < 3 || (tok.size() - 1) % 2 != 0)
          throw std::runtime_error("mps: malformed COLUMNS line: " + line);
        const int j = get_col(tok[0]);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const std::string& row = tok[k];
          const double v = std::stod(tok[k + 1]);
          if (row == "OBJ") {
            model.objective[static_cast<std::size_t>(j)] = v;
          } else {
            auto it = row_index.find(row);
            if (it == row_index.end()) throw std::runtime_error("mps: unknown row " + row);
            if (v != 0.0) model.rows[static_cast<std::size_t>(it->second)].coef.emplace_back(j, v);
          }
        }
        break;
      }
      case Section::rhs: {
        if (tok.size() < 3 || (tok.size() - 1) % 2 != 0)
          throw std::runtime_error("mps: malformed RHS line: " + line);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          auto it = row_index.find(tok[k]);
          if (it == row_index.end()) throw std::runtime_error("mps: unknown row " + tok[k]);
          model.rows[static_cast<std::size_t>(it->second)].rhs = std::stod(tok[k + 1]);
        }
        break;
      }
      case Section::bounds: {
        if (tok.size() < 3) throw std::runtime_error("mps: malformed BOUNDS line: " + line);
        const std::string& type = tok[0];
        const int j = get_col(tok[2]);
        const double v = tok.size() > 3 ? std::stod(tok[3]) : 0.0;
        if (type == "UP") model.upper[static_cast<std::size_t>(j)] = v;
        else if (type == "LO") model.lower[static_cast<std::size_t>(j)] = v;
        else if (type == "FX") { model.lower[static_cast<std::size_t>(j)] = v; model.upper[static_cast<std::size_t>(j)] = v; }
        else if (type == "FR") { model.lower[static_cast<std::size_t>(j)] = -kInf; model.upper[static_cast<std::size_t>(j)] = kInf; }
        else if (type == "MI") model.lower[static_cast<std::size_t>(j)] = -kInf;
        else if (type == "PL") model.upper[static_cast<std::size_t>(j)] = kInf;
        else if (type == "BV") { model.lower[static_cast<std::size_t>(j)] = 0; model.upper[static_cast<std::size_t>(j)] = 1; model.is_integer[static_cast<std::size_t>(j)] = true; }
        else throw std::runtime_error("mps: unknown bound type " + type);
        break;
      }
      case Section::none:
      case Section::done:
        throw std::runtime_error("mps: data before any section: " + line);
    }
  }
  return model;
}

MilpModel read_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_mps(buf.str());
}

}  // namespace lineopt
