#pragma once

#include "maasslab/eigensolver.hpp"

namespace testsupport {

// First even form (t near 13.78), solved once per test binary.
const maasslab::SolvedForm& first_form();

// Second even form (t near 17.74).
const maasslab::SolvedForm& second_form();

}  // namespace testsupport
