#pragma once

#include <memory>
#include <span>
#include <string>

#include "json.hpp"
#include "vlcloc/matrix.hpp"

namespace vlcloc {

/// A fitted single-output regressor over scaled feature rows. Implementations
/// are immutable after fitting; predict is a pure function.
class AxisRegressor {
public:
    virtual ~AxisRegressor() = default;

    virtual double predict(std::span<const double> features) const = 0;
    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

}  // namespace vlcloc
