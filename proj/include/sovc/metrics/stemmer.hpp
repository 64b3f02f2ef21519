#pragma once

#include <string>
#include <string_view>

namespace sovc::metrics {

/// Porter's suffix-stripping stemmer, following the step tables of the
/// original 1980 description (no later revisions such as BLI->BLE or LOGI).
/// Input is expected lowercase.
std::string porter_stem(std::string_view word);

}  // namespace sovc::metrics
