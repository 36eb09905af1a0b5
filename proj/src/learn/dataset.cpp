#include "tarmac/learn/dataset.hpp"

#include <algorithm>

#include "tarmac/csv.hpp"
#include "tarmac/error.hpp"

namespace tarmac::learn {

const std::vector<std::string>& label_names() {
    static const std::vector<std::string> names{"dep_delay_carrier", "dep_delay_weather",       "dep_delay_nas",
                                                "dep_delay_security", "dep_delay_late_aircraft", "dep_delay"};
    return names;
}

void Dataset::validate() const {
    const std::size_t n = ids.size();
    require(timestamps.size() == n, "Dataset: timestamp count differs from row count");
    require(features.rows() == n || (n == 0 && features.rows() == 0), "Dataset: feature rows differ from row count");
    require(targets.rows() == n || (n == 0 && targets.rows() == 0), "Dataset: target rows differ from row count");
    require(images.empty() || images.size() == n, "Dataset: image count differs from row count");
    require(feature_names.size() == features.cols() || features.rows() == 0, "Dataset: feature name count mismatch");
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.features = Matrix(0, features.cols());
    out.targets = Matrix(0, targets.cols());
    for (std::size_t r : rows) {
        require(r < size(), "Dataset::subset: row out of range");
        out.ids.push_back(ids[r]);
        out.timestamps.push_back(timestamps[r]);
        out.features.append_row(features.row(r));
        out.targets.append_row(targets.row(r));
        if (has_images()) out.images.push_back(images[r]);
    }
    return out;
}

Dataset Dataset::select_columns(const std::vector<std::size_t>& columns) const {
    Dataset out;
    out.ids = ids;
    out.timestamps = timestamps;
    out.targets = targets;
    out.images = images;
    out.features = Matrix(size(), columns.size());
    for (std::size_t c : columns) {
        require(c < features.cols(), "Dataset::select_columns: column out of range");
        out.feature_names.push_back(feature_names[c]);
    }
    for (std::size_t r = 0; r < size(); ++r)
        for (std::size_t k = 0; k < columns.size(); ++k) out.features(r, k) = features(r, columns[k]);
    return out;
}

std::vector<double> Dataset::target_column(std::size_t c) const {
    std::vector<double> out(targets.rows());
    for (std::size_t r = 0; r < targets.rows(); ++r) out[r] = targets(r, c);
    return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
    d.validate();
    csv::Writer w(out);
    w.field(std::string_view("flight_id")).field(std::string_view("sched_gate_out"));
    for (const auto& n : d.feature_names) w.field(std::string_view(n));
    for (const auto& n : label_names()) w.field(std::string_view(n));
    w.end_row();
    for (std::size_t r = 0; r < d.size(); ++r) {
        w.field(std::string_view(d.ids[r])).field(std::string_view(format_iso8601(d.timestamps[r])));
        for (double v : d.features.row(r)) w.field(v);
        for (double v : d.targets.row(r)) w.field(v);
        w.end_row();
    }
}

Dataset read_dataset_csv(std::istream& in) {
    csv::Reader reader(in);
    const auto& header = reader.header();
    if (header.size() < 2 + label_names().size() || header[0] != "flight_id" || header[1] != "sched_gate_out")
        throw SchemaError("dataset CSV: expected flight_id,sched_gate_out,<features>,<labels>");
    const std::size_t n_labels = label_names().size();
    const std::size_t n_features = header.size() - 2 - n_labels;
    for (std::size_t i = 0; i < n_labels; ++i)
        if (header[2 + n_features + i] != label_names()[i])
            throw SchemaError("dataset CSV: missing label column '" + label_names()[i] + "'");

    Dataset d;
    d.feature_names.assign(header.begin() + 2, header.begin() + 2 + static_cast<std::ptrdiff_t>(n_features));
    d.features = Matrix(0, n_features);
    d.targets = Matrix(0, n_labels);
    std::vector<std::string_view> f;
    std::vector<double> feat(n_features), tgt(n_labels);
    while (reader.next(f)) {
        if (f.size() != header.size())
            throw SchemaError("dataset CSV: wrong field count on line " + std::to_string(reader.line_number()));
        d.ids.emplace_back(f[0]);
        d.timestamps.push_back(parse_iso8601(f[1]));
        for (std::size_t i = 0; i < n_features; ++i) {
            const auto v = csv::to_double(f[2 + i]);
            if (!v) throw SchemaError("dataset CSV: bad number on line " + std::to_string(reader.line_number()));
            feat[i] = *v;
        }
        for (std::size_t i = 0; i < n_labels; ++i) {
            const auto v = csv::to_double(f[2 + n_features + i]);
            if (!v) throw SchemaError("dataset CSV: bad label on line " + std::to_string(reader.line_number()));
            tgt[i] = *v;
        }
        d.features.append_row(feat);
        d.targets.append_row(tgt);
    }
    return d;
}

}  // namespace tarmac::learn
