#include "fpclasso/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fpclasso/errors.hpp"

namespace fpc {

Index CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw MalformedInput("column '" + name + "' not found in header");
  return static_cast<Index>(it - header.begin());
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;  // true once the current record has content

  const auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_started = true;
  };
  const auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw MalformedInput("csv: quote opened mid-field in record " +
                               std::to_string(records.size() + 1));
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 >= text.size() || text[i + 1] != '\n')
          throw MalformedInput("csv: bare carriage return in record " +
                               std::to_string(records.size() + 1));
        break;  // consumed by the following \n
      case '\n':
        end_record();
        break;
      default:
        field += c;
        break;
    }
  }
  if (quoted) throw MalformedInput("csv: unterminated quoted field");
  // Final record without a trailing newline.
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw MalformedInput("csv: missing header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size())
      throw MalformedInput("csv: row " + std::to_string(r) + " has " +
                           std::to_string(records[r].size()) + " fields, header has " +
                           std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

double parse_double_strict(const std::string& field, const std::string& context) {
  if (field.empty()) throw MalformedInput(context + ": empty numeric field");
  errno = 0;
  char* endp = nullptr;
  const double v = std::strtod(field.c_str(), &endp);
  if (errno == ERANGE || endp != field.c_str() + field.size())
    throw MalformedInput(context + ": '" + field + "' is not a number");
  return v;
}

std::string csv_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n\r") != std::string::npos) {
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    } else {
      out += f;
    }
  }
  out += '\n';
  return out;
}

Dataset table_to_dataset(const CsvTable& table, Family family,
                         const std::string& response, const std::string& time_col,
                         const std::string& event_col,
                         std::vector<std::string>& feature_names) {
  const Index n = table.n_rows();
  if (n < 1) throw MalformedInput("csv: no data rows");

  std::vector<Index> special;
  Index y_col = -1, ev_col = -1;
  if (family == Family::CoxPH) {
    if (time_col.empty() || event_col.empty())
      throw MalformedInput("survival input needs both a time and an event column");
    y_col = table.column(time_col);
    ev_col = table.column(event_col);
    if (y_col == ev_col)
      throw MalformedInput("time and event columns must differ");
    special = {y_col, ev_col};
  } else {
    if (response.empty()) throw MalformedInput("response column not named");
    y_col = table.column(response);
    special = {y_col};
  }

  feature_names.clear();
  std::vector<Index> feature_cols;
  for (Index j = 0; j < table.n_cols(); ++j) {
    if (std::find(special.begin(), special.end(), j) != special.end()) continue;
    feature_cols.push_back(j);
    feature_names.push_back(table.header[static_cast<std::size_t>(j)]);
  }
  if (feature_cols.empty()) throw MalformedInput("csv: no feature columns left");

  Dataset data;
  data.X.resize(n, static_cast<Index>(feature_cols.size()));
  data.y.resize(n);
  if (family == Family::CoxPH) data.event.resize(n);

  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    const std::string ctx = "row " + std::to_string(i + 1);
    data.y[i] = parse_double_strict(row[static_cast<std::size_t>(y_col)], ctx);
    if (family == Family::CoxPH) {
      const double e = parse_double_strict(row[static_cast<std::size_t>(ev_col)], ctx);
      if (e != 0.0 && e != 1.0)
        throw MalformedInput(ctx + ": event indicator must be 0 or 1");
      data.event[i] = static_cast<int>(e);
    }
    for (std::size_t c = 0; c < feature_cols.size(); ++c)
      data.X(i, static_cast<Index>(c)) =
          parse_double_strict(row[static_cast<std::size_t>(feature_cols[c])], ctx);
  }
  return data;
}

}  // namespace fpc
