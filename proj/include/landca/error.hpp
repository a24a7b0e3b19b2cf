#pragma once

#include <stdexcept>
#include <string>

namespace landca {

// Machine-checkable failure categories. Messages carry the human detail
// (offending code, cell index, line number); the category is what callers
// and tests dispatch on.
enum class Errc {
    degenerate_range,        // normalization over a constant input
    geometry_mismatch,       // rasters disagree on shape/cellsize/origin
    unmapped_code,           // reclassification met a code outside the table
    invalid_class,           // operation applied to a NoData class
    insufficient_variance,   // PCA input has no usable variance
    undefined_metric,        // correlation/accuracy denominator is zero
    empty_training_data,     // forest asked to train on zero rows
    wrong_arity,             // feature vector length does not match the model
    undefined_contribution,  // all noise-injection deltas are zero
    undefined_rate,          // expansion rate with zero previous count
    bad_format,              // malformed input file
    bad_config,              // parameter outside its documented range
    io_failure,              // file cannot be opened/written
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace landca
