#include "nesvm/error.hpp"

namespace nesvm {

const char *to_string(errc code) noexcept {
    switch (code) {
        case errc::empty_dataset: return "EmptyDataset";
        case errc::label_out_of_range: return "LabelOutOfRange";
        case errc::zero_row: return "ZeroRow";
        case errc::ragged_rows: return "RaggedRows";
        case errc::non_finite_value: return "NonFiniteValue";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::non_positive_kernel_width: return "NonPositiveKernelWidth";
        case errc::invalid_parameter: return "InvalidParameter";
        case errc::missing_nu: return "MissingNu";
        case errc::non_finite_iterate: return "NonFiniteIterate";
        case errc::malformed_line: return "MalformedLine";
        case errc::non_monotonic_index: return "NonMonotonicIndex";
        case errc::unmappable_label: return "UnmappableLabel";
        case errc::too_few_samples: return "TooFewSamples";
        case errc::singular_system: return "SingularSystem";
        case errc::non_finite_evaluation: return "NonFiniteEvaluation";
        case errc::io_failure: return "IoFailure";
        case errc::bad_model_file: return "BadModelFile";
    }
    return "Unknown";
}

error::error(errc code, const std::string &what) :
    std::runtime_error{std::string{to_string(code)} + ": " + what},
    code_{code} {}

}  // namespace nesvm
