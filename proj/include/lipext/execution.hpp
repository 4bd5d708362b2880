#pragma once

namespace lipext {

/// Selects the OpenMP kernel or its serial reference twin.
enum class Execution { parallel, serial };

} // namespace lipext
