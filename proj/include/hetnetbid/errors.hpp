#ifndef HETNETBID_ERRORS_HPP
#define HETNETBID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hetnetbid {

/// Error categories surfaced through the C API as hnb_status values.
enum class errc {
    invalid_parameter = 1, // bad numeric argument (non-positive distance, alpha out of range, ...)
    no_demand,             // Eq.-style division by zero: no active covered user
    infeasible,            // constraint cannot be met with finite resources
    degenerate_data,       // training set lacks one of the two classes
    invalid_data,          // non-finite features, malformed records
    config,                // unreadable or inconsistent configuration
    io                     // filesystem failure
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace hetnetbid

#endif
