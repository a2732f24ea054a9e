#pragma once

#include <stdexcept>
#include <string>

namespace folnerlab {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct malformed_element_error : error {
    using error::error;
};

struct owner_mismatch_error : error {
    using error::error;
};

struct overflow_error : error {
    using error::error;
};

struct budget_exceeded_error : error {
    using error::error;
};

struct precondition_error : error {
    using error::error;
};

struct window_too_small_error : error {
    using error::error;
};

struct exhausted_sample_error : error {
    explicit exhausted_sample_error(const std::string& what, int found_count)
        : error(what), found(found_count) {}
    int found;
};

struct strong_unavailable_error : error {
    using error::error;
};

} // namespace folnerlab
