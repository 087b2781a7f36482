#pragma once

#include <string>
#include <vector>

#include "panelfc/panel.hpp"

namespace panelfc {

// One regressor column: the named source ("y" or a header name such as "x1")
// shifted back by `lag` periods. Leading periods without a complete lag window
// are dropped from the panel.
struct ColumnSpec {
  std::string source;
  int lag = 0;
};

struct CsvSchema {
  std::vector<ColumnSpec> regressors;  // empty: every x column as given, lag 0
};

// Long-format ingestion: header `unit_id,period,y,x1,...,xk`, decimal point,
// LF or CRLF. Units and periods are ordered lexicographically; the panel must
// be balanced after alignment.
PanelDataset ingest_csv(const std::string& path, const CsvSchema& schema = {});

}  // namespace panelfc
