#pragma once

#include <stdexcept>
#include <string>

namespace sqpulse {

// Failure of a runtime numerical gate: Fock-cutoff leakage, positivity loss,
// truncation discard over budget, or quadrature/step non-convergence.
// Contract violations (bad dimensions, invalid parameters) throw
// std::invalid_argument instead.
class numeric_error : public std::runtime_error {
public:
    enum class kind { cutoff, positivity, truncation, convergence, non_finite };

    numeric_error(kind k, const std::string& message)
        : std::runtime_error(message), kind_(k) {}

    kind failure_kind() const noexcept { return kind_; }

private:
    kind kind_;
};

}  // namespace sqpulse
