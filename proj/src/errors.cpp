#include "hardy/errors.hpp"

#include <utility>

namespace hardy {

ParameterError::ParameterError(std::string predicate, const std::string& message)
    : std::invalid_argument(message), predicate_(std::move(predicate)) {}

}  // namespace hardy
