#include "support.hpp"

namespace testsupport {

const maasslab::SolvedForm& first_form() {
  static const maasslab::SolvedForm f = [] {
    maasslab::SolverConfig cfg;
    cfg.tMin = 13.7;
    cfg.tMax = 13.9;
    return maasslab::solve_even_form_detail(cfg);
  }();
  return f;
}

const maasslab::SolvedForm& second_form() {
  static const maasslab::SolvedForm f = [] {
    maasslab::SolverConfig cfg;
    cfg.tMin = 17.6;
    cfg.tMax = 17.9;
    return maasslab::solve_even_form_detail(cfg);
  }();
  return f;
}

}  // namespace testsupport
