#pragma once

#include <string>

#include "gmfdfa/series.hpp"

namespace gmfdfa {

enum class HeaderMode { automatic, yes, no };

// Column selection for CSV ingestion: the column is either a 0-based index
// ("2") or a header name ("close"). With HeaderMode::automatic a header is
// assumed when the selected cell of the first row does not parse as a
// number; selecting by name always requires a header.
struct CsvSpec {
    std::string column = "0";
    char delimiter = ',';
    HeaderMode header = HeaderMode::automatic;
};

// Reads one numeric column into a raw series. Unparsable or missing cells
// fail with the 1-based file line number; blank lines are skipped.
TimeSeries ingest_csv(const std::string& path, const CsvSpec& spec);

// Writes a single-column CSV ("value" header) that round-trips exactly
// through ingest_csv.
void write_series_csv(const std::string& path, const TimeSeries& x);

}
