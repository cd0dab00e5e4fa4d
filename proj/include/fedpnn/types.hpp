#ifndef FEDPNN_TYPES_HPP
#define FEDPNN_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedpnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Bad configuration or violated precondition. The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File, parse, or data-content error. The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Feature matrix with binary class labels. Rows are samples, columns are
/// features; labels hold 0 (negative class) or 1 (positive class).
struct LabeledDataset {
    Matrix features;
    IntVector labels;
    std::vector<std::string> feature_names;

    Index rows() const { return features.rows(); }
    Index dims() const { return features.cols(); }
};

/// Throws ValidationError if the dataset breaks any of its invariants
/// (empty, non-finite values, labels outside {0,1}, size mismatches).
void check_dataset(const LabeledDataset& ds);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

} // namespace fedpnn

#endif
