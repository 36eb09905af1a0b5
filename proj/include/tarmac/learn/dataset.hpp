#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "tarmac/ingest.hpp"
#include "tarmac/linalg.hpp"
#include "tarmac/raster.hpp"
#include "tarmac/time.hpp"

namespace tarmac::learn {

// Rows are flights. Targets are the six LabelVector columns; images, when
// present, align with rows.
struct Dataset {
    std::vector<std::string> ids;
    std::vector<Timestamp> timestamps;  // scheduled gate-out
    std::vector<std::string> feature_names;
    Matrix features;
    Matrix targets;
    std::vector<TrajImage> images;

    std::size_t size() const { return ids.size(); }
    bool has_images() const { return !images.empty(); }

    // Throws ContractError when the parts disagree on row count.
    void validate() const;

    Dataset subset(const std::vector<std::size_t>& rows) const;
    Dataset select_columns(const std::vector<std::size_t>& columns) const;

    std::vector<double> target_column(std::size_t c) const;
    std::vector<double> departure_delay() const { return target_column(LabelVector::kDepartureDelay); }
};

const std::vector<std::string>& label_names();

// dataset.csv: flight_id, sched_gate_out, <features...>, <labels...>.
void write_dataset_csv(std::ostream& out, const Dataset& d);
// Feature columns are everything between sched_gate_out and the label block.
Dataset read_dataset_csv(std::istream& in);

}  // namespace tarmac::learn
