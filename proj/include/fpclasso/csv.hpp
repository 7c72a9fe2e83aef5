#pragma once

#include <string>
#include <vector>

#include "fpclasso/types.hpp"

namespace fpc {

// Parsed text table. Header row is mandatory; every data row has exactly
// header.size() fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Index n_rows() const { return static_cast<Index>(rows.size()); }
  Index n_cols() const { return static_cast<Index>(header.size()); }
  Index column(const std::string& name) const;  // MalformedInput if absent
};

// Reads an RFC-4180 style file: comma-separated, optional quoting with ""
// escapes, LF or CRLF record ends, quoted fields may span lines. Throws
// MalformedInput on structural problems.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

// Full-string numeric parse; MalformedInput on anything else (incl. empty).
double parse_double_strict(const std::string& field, const std::string& context);

// Writes one record, quoting fields that contain commas, quotes, or
// newlines. Rows end with \n.
std::string csv_record(const std::vector<std::string>& fields);

// Splits the table into a model dataset. response names the y column; for
// the survival family pass time_col/event_col instead and leave response
// empty. Remaining columns become features, names returned in order.
Dataset table_to_dataset(const CsvTable& table, Family family,
                         const std::string& response, const std::string& time_col,
                         const std::string& event_col,
                         std::vector<std::string>& feature_names);

}  // namespace fpc
