#pragma once

#include <string>

namespace qrouter {

// Fixed scientific notation, six significant digits.
std::string sci(double v);

// Shortest decimal text that parses back to v exactly.
std::string exact(double v);

}  // namespace qrouter
