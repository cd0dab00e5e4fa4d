#include "fedpnn/types.hpp"

#include <charconv>

namespace fedpnn {

void check_dataset(const LabeledDataset& ds) {
    if (ds.rows() < 1 || ds.dims() < 1) {
        throw ValidationError("dataset must have at least one row and one feature");
    }
    if (ds.labels.size() != ds.rows()) {
        throw ValidationError("feature matrix and label vector disagree on row count");
    }
    if (static_cast<Index>(ds.feature_names.size()) != ds.dims()) {
        throw ValidationError("feature name count does not match feature columns");
    }
    if (!ds.features.allFinite()) {
        throw ValidationError("dataset contains non-finite feature values");
    }
    for (Index i = 0; i < ds.labels.size(); ++i) {
        if (ds.labels[i] != 0 && ds.labels[i] != 1) {
            throw ValidationError("label outside {0,1} at row " + std::to_string(i + 1));
        }
    }
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

} // namespace fedpnn
