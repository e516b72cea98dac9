#include "orcgrid/milp/mps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

namespace orcgrid::milp {

MpsParseError::MpsParseError(int line, std::string section,
                             const std::string& message)
    : std::runtime_error(fmt::format("line {} [{}]: {}", line,
                                     section.empty() ? "-" : section, message)),
      line_(line),
      section_(std::move(section)) {}

namespace {

constexpr std::size_t kMaxNameLength = 255;

std::string num(double v) { return fmt::format("{:.17g}", v); }

void check_name(const std::string& name, const char* what) {
  if (name.empty()) throw ModelError(fmt::format("empty {} name", what));
  if (name.size() > kMaxNameLength)
    throw ModelError(fmt::format("{} name too long: {}", what, name));
  for (char ch : name)
    if (std::isspace(static_cast<unsigned char>(ch)))
      throw ModelError(fmt::format("{} name contains whitespace: '{}'", what, name));
}

std::string unique_objective_name(const MilpModel& model) {
  std::unordered_set<std::string> rows;
  for (const auto& r : model.constraints) rows.insert(r.name);
  std::string name = "COST";
  while (rows.count(name) != 0) name += "_";
  return name;
}

}  // namespace

std::string write_mps(const MilpModel& model) {
  check_model(model);
  {
    std::unordered_set<std::string> seen;
    for (const auto& v : model.vars) {
      check_name(v.name, "variable");
      if (!seen.insert(v.name).second)
        throw ModelError("duplicate variable name: " + v.name);
    }
    seen.clear();
    for (const auto& r : model.constraints) {
      check_name(r.name, "row");
      if (!seen.insert(r.name).second)
        throw ModelError("duplicate row name: " + r.name);
    }
  }
  const std::string obj_name = unique_objective_name(model);
  const int n = model.num_vars();

  std::vector<std::vector<std::pair<int, double>>> columns(n);
  for (int i = 0; i < model.num_rows(); ++i)
    for (const auto& t : model.constraints[i].terms)
      columns[t.var].emplace_back(i, t.coef);
  const std::vector<double> cost = model.dense_objective();

  std::string name = model.name.empty() ? "model" : model.name;
  std::replace_if(name.begin(), name.end(),
                  [](char c) { return std::isspace(static_cast<unsigned char>(c)); }, '_');

  std::ostringstream out;
  out << "NAME " << name << '\n';
  out << "ROWS\n";
  out << " N " << obj_name << '\n';
  for (const auto& r : model.constraints) {
    const char* type = r.sense == RowSense::LE ? "L" : r.sense == RowSense::GE ? "G" : "E";
    out << ' ' << type << ' ' << r.name << '\n';
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    const auto& v = model.vars[j];
    const bool is_bin = v.kind == VarKind::Binary;
    if (is_bin && !in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' 'INTORG'\n";
      in_int = true;
    } else if (!is_bin && in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
      in_int = false;
    }
    bool wrote = false;
    if (cost[j] != 0.0) {
      out << "    " << v.name << ' ' << obj_name << ' ' << num(cost[j]) << '\n';
      wrote = true;
    }
    for (const auto& [row, coef] : columns[j]) {
      if (coef == 0.0) continue;  // structural zeros are not entries
      out << "    " << v.name << ' ' << model.constraints[row].name << ' ' << num(coef)
          << '\n';
      wrote = true;
    }
    if (!wrote) out << "    " << v.name << ' ' << obj_name << " 0\n";
  }
  if (in_int) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (const auto& r : model.constraints)
    if (r.rhs != 0.0) out << "    RHS " << r.name << ' ' << num(r.rhs) << '\n';

  out << "BOUNDS\n";
  for (const auto& v : model.vars) {
    const double lo = v.lower;
    const double up = v.upper;
    if (v.kind == VarKind::Binary && lo == 0.0 && up == 1.0) {
      out << " BV BND " << v.name << '\n';
      continue;
    }
    if (lo == up) {
      out << " FX BND " << v.name << ' ' << num(lo) << '\n';
      continue;
    }
    if (lo == -kInf && up == kInf) {
      out << " FR BND " << v.name << '\n';
      continue;
    }
    if (lo == -kInf)
      out << " MI BND " << v.name << '\n';
    else if (lo != 0.0)
      out << " LO BND " << v.name << ' ' << num(lo) << '\n';
    if (up != kInf) out << " UP BND " << v.name << ' ' << num(up) << '\n';
  }
  out << "ENDATA\n";
  return out.str();
}

namespace {

class MpsReader {
 public:
  explicit MpsReader(std::string_view text) : text_(text) {}

  MilpModel read() {
    bool saw_name = false;
    bool saw_end = false;
    std::size_t pos = 0;
    while (pos <= text_.size() && !saw_end) {
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '*') continue;
      tokens_ = split(line);
      if (tokens_.empty()) continue;

      const bool header = !std::isspace(static_cast<unsigned char>(line.front()));
      if (!saw_name) {
        if (!header || tokens_[0] != "NAME") fail("missing NAME");
        saw_name = true;
        section_ = "NAME";
        if (tokens_.size() > 1) model_.name = std::string(tokens_[1]);
        continue;
      }
      if (header) {
        const std::string_view kw = tokens_[0];
        if (kw == "ROWS" || kw == "COLUMNS" || kw == "RHS" || kw == "BOUNDS") {
          section_ = std::string(kw);
        } else if (kw == "ENDATA") {
          saw_end = true;
        } else if (kw == "RANGES") {
          section_ = "RANGES";
          fail("RANGES section is not supported");
        } else if (kw == "OBJSENSE") {
          section_ = "OBJSENSE";
          if (tokens_.size() > 1 && tokens_[1] != "MIN" && tokens_[1] != "MINIMIZE")
            fail("only minimization is supported");
        } else {
          fail(fmt::format("unknown section '{}'", kw));
        }
        continue;
      }
      if (section_ == "ROWS")
        parse_row();
      else if (section_ == "COLUMNS")
        parse_column();
      else if (section_ == "RHS")
        parse_rhs();
      else if (section_ == "BOUNDS")
        parse_bound();
      else if (section_ == "OBJSENSE") {
        if (tokens_[0] != "MIN" && tokens_[0] != "MINIMIZE")
          fail("only minimization is supported");
      } else
        fail("data line outside of a section");
    }
    if (!saw_name) {
      line_no_ = std::max(line_no_, 1);
      fail("missing NAME");
    }
    if (!saw_end) fail("unexpected end of input: expected ENDATA");

    for (int j : integer_vars_) {
      auto& v = model_.vars[j];
      if (v.lower < 0.0 || v.upper > 1.0)
        fail(fmt::format("integer variable {} has bounds outside [0,1]; "
                         "general integers are not supported",
                         v.name));
      v.kind = VarKind::Binary;
    }
    return std::move(model_);
  }

 private:
  static std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MpsParseError(line_no_, section_, msg);
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    const std::string s(tok);
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
      fail(fmt::format("invalid number '{}'", tok));
    return v;
  }

  void parse_row() {
    if (tokens_.size() != 2) fail("expected '<type> <name>'");
    const std::string name(tokens_[1]);
    const std::string_view type = tokens_[0];
    if (type == "N") {
      if (objective_name_.empty())
        objective_name_ = name;
      else
        free_rows_.insert(name);
      return;
    }
    RowSense sense;
    if (type == "L")
      sense = RowSense::LE;
    else if (type == "G")
      sense = RowSense::GE;
    else if (type == "E")
      sense = RowSense::EQ;
    else
      fail(fmt::format("unknown row type '{}'", type));
    if (row_index_.count(name) != 0 || name == objective_name_)
      fail("duplicate row " + name);
    row_index_[name] = model_.add_row(name, {}, sense, 0.0);
  }

  void add_entry(int var, std::string_view row_tok, std::string_view val_tok) {
    const std::string row(row_tok);
    const double val = number(val_tok);
    if (row == objective_name_) {
      model_.add_cost(var, val);
      return;
    }
    if (free_rows_.count(row) != 0) return;
    auto it = row_index_.find(row);
    if (it == row_index_.end()) fail("unknown row " + row);
    auto& terms = model_.constraints[it->second].terms;
    for (const auto& t : terms)
      if (t.var == var) fail(fmt::format("duplicate entry for row {}", row));
    if (val != 0.0) terms.push_back(Term{var, val});
  }

  void parse_column() {
    if (tokens_.size() == 3 && tokens_[1] == "'MARKER'") {
      if (tokens_[2] == "'INTORG'")
        in_integer_ = true;
      else if (tokens_[2] == "'INTEND'")
        in_integer_ = false;
      else
        fail(fmt::format("unknown marker '{}'", tokens_[2]));
      return;
    }
    if (tokens_.size() != 3 && tokens_.size() != 5)
      fail("expected '<column> <row> <value> [<row> <value>]'");
    const std::string name(tokens_[0]);
    int var;
    auto it = col_index_.find(name);
    if (it == col_index_.end()) {
      var = model_.add_var(name, 0.0, in_integer_ ? 1.0 : kInf);
      col_index_[name] = var;
      if (in_integer_) integer_vars_.push_back(var);
    } else {
      var = it->second;
    }
    add_entry(var, tokens_[1], tokens_[2]);
    if (tokens_.size() == 5) add_entry(var, tokens_[3], tokens_[4]);
  }

  void set_rhs(std::string_view row_tok, std::string_view val_tok) {
    const std::string row(row_tok);
    const double val = number(val_tok);
    if (row == objective_name_) {
      if (val != 0.0) fail("objective constants are not supported");
      return;
    }
    if (free_rows_.count(row) != 0) return;
    auto it = row_index_.find(row);
    if (it == row_index_.end()) fail("unknown row " + row);
    model_.constraints[it->second].rhs = val;
  }

  void parse_rhs() {
    const std::size_t k = tokens_.size();
    if (k == 3 || k == 5) {
      set_rhs(tokens_[1], tokens_[2]);
      if (k == 5) set_rhs(tokens_[3], tokens_[4]);
    } else if (k == 2 || k == 4) {
      set_rhs(tokens_[0], tokens_[1]);
      if (k == 4) set_rhs(tokens_[2], tokens_[3]);
    } else {
      fail("expected '[<set>] <row> <value>'");
    }
  }

  void parse_bound() {
    const std::string_view type = tokens_[0];
    const bool valueless = type == "FR" || type == "MI" || type == "PL" || type == "BV";
    std::string_view col_tok;
    std::string_view val_tok;
    const std::size_t k = tokens_.size();
    if (valueless) {
      if (k == 3 || (type == "BV" && k == 4))
        col_tok = tokens_[2];
      else if (k == 2)
        col_tok = tokens_[1];
      else
        fail(fmt::format("malformed {} bound", type));
    } else {
      if (k == 4) {
        col_tok = tokens_[2];
        val_tok = tokens_[3];
      } else if (k == 3) {
        col_tok = tokens_[1];
        val_tok = tokens_[2];
      } else {
        fail(fmt::format("malformed {} bound", type));
      }
    }
    auto it = col_index_.find(std::string(col_tok));
    if (it == col_index_.end()) fail(fmt::format("unknown column {}", col_tok));
    auto& v = model_.vars[it->second];
    if (type == "UP") {
      v.upper = number(val_tok);
    } else if (type == "LO") {
      v.lower = number(val_tok);
    } else if (type == "FX") {
      v.lower = v.upper = number(val_tok);
    } else if (type == "FR") {
      v.lower = -kInf;
      v.upper = kInf;
    } else if (type == "MI") {
      v.lower = -kInf;
    } else if (type == "PL") {
      v.upper = kInf;
    } else if (type == "BV") {
      v.lower = 0.0;
      v.upper = 1.0;
      mark_integer(it->second);
    } else if (type == "LI") {
      v.lower = number(val_tok);
      mark_integer(it->second);
    } else if (type == "UI") {
      v.upper = number(val_tok);
      mark_integer(it->second);
    } else {
      fail(fmt::format("unknown bound type '{}'", type));
    }
  }

  void mark_integer(int var) {
    if (std::find(integer_vars_.begin(), integer_vars_.end(), var) == integer_vars_.end())
      integer_vars_.push_back(var);
  }

  std::string_view text_;
  int line_no_ = 0;
  std::string section_;
  std::vector<std::string_view> tokens_;
  MilpModel model_;
  std::string objective_name_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> col_index_;
  std::vector<int> integer_vars_;
  bool in_integer_ = false;
};

}  // namespace

MilpModel read_mps(std::string_view text) {
  MpsReader reader(text);
  return reader.read();
}

}  // namespace orcgrid::milp
