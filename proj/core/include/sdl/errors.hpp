#pragma once

#include <stdexcept>
#include <string>

namespace sdl {

/// Invalid build-time configuration (resolution too small, bad enum, ...).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation applied to the wrong kind of domain (torus vs sphere) or
/// parameter outside its mathematical domain.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Form-degree mismatch (d of a top form, delta of a 0-form, wedge overflow).
struct degree_error : std::runtime_error {
    explicit degree_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operands that do not live on the same manifold, or malformed input data.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to converge, or a computed quantity is not finite.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A mathematical precondition (criticality, coclosedness, nesting) is violated.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Descent step size collapsed below the representable floor.
struct stagnation_error : std::runtime_error {
    explicit stagnation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A flow left its homotopy class (topological invariant drifted).
struct homotopy_escape_error : std::runtime_error {
    explicit homotopy_escape_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fibration target is not of the supported (Hermitian symmetric) type.
struct unsupported_target_error : std::runtime_error {
    explicit unsupported_target_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sdl
