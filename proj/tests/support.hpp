#pragma once

// The shared generators and independent oracles live in the library's
// selftest component so the command-line verification can run them too.
#include "dsrefine/selftest.hpp"

namespace testsupport = dsrefine::selftest;
