#ifndef NESVM_ERROR_HPP_
#define NESVM_ERROR_HPP_
#pragma once

#include <stdexcept>
#include <string>

namespace nesvm {

/// Failure categories reported by the library.
enum class errc {
    empty_dataset,
    label_out_of_range,
    zero_row,
    ragged_rows,
    non_finite_value,
    dimension_mismatch,
    non_positive_kernel_width,
    invalid_parameter,
    missing_nu,
    non_finite_iterate,
    malformed_line,
    non_monotonic_index,
    unmappable_label,
    too_few_samples,
    singular_system,
    non_finite_evaluation,
    io_failure,
    bad_model_file,
};

[[nodiscard]] const char *to_string(errc code) noexcept;

/// Exception thrown by every nesvm component. Carries a machine-checkable code.
class error : public std::runtime_error {
  public:
    error(errc code, const std::string &what);

    [[nodiscard]] errc code() const noexcept { return code_; }

  private:
    errc code_;
};

}  // namespace nesvm

#endif  // NESVM_ERROR_HPP_
