#include <cstring>
#include <iostream>

#include "varsmooth/suite.hpp"

int main(int argc, char** argv) {
  vs::SuiteOptions opt;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  return vs::run_acceptance_suite(std::cout, opt);
}
