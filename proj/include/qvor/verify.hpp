#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qvor/io.hpp"

namespace qvor::verify {

struct Config {
  std::uint64_t seed = 20240601;
  std::vector<int> section_dims{3, 4, 5};  // levels for the section checks
  double eigen_tol = 1e-9;                 // closed-form vs generic eigenvalues
  double closed_form_tol = 1e-8;           // closed-form vs matrix Tr sigma log rho
  double identity_tol = 1e-10;             // R+- identities
  double kl_tol = 1e-10;
  double plane_tol = 1e-12;
  double bisector_tol = 1e-4;
  double zero_set_tol = 1e-9;
  double capacity_tol = 1e-3;
  double shrink = 0.9999;
  std::size_t sphere_points = 10000;
  std::size_t section_points = 20000;
  std::size_t capacity_samples = 2562;

  // Throws kSectionDimension if a section level is below 3.
  void validate() const;
  io::Json to_json() const;
};

enum class Status { kPass, kFail, kInfo };
const char* to_string(Status s);

struct Check {
  int id = 0;
  std::string name;
  Status status = Status::kFail;
  std::string summary;   // one line, human readable
  io::Json measured;     // numbers behind the verdict
  double seconds = 0.0;  // wall time; not part of the JSON report
};

// Criterion ids 1..10. Check 10 is informational and never fails.
std::vector<int> all_ids();
Check run_check(int id, const Config& config);

// Runs the ids in order. `progress` sees each result as it completes.
std::vector<Check> run_checks(const std::vector<int>& ids, const Config& config,
                              const std::function<void(const Check&)>& progress = {});

bool all_passed(const std::vector<Check>& checks);
io::Json report(const std::vector<Check>& checks, const Config& config);
std::string format_line(const Check& check);

}  // namespace qvor::verify
