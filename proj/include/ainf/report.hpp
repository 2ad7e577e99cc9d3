#pragma once

#include <string>
#include <vector>

namespace ainf {

enum class Status { Pass, Fail, ApproximatePass, OutOfScope };

/// "pass", "fail", "approximate-pass", "out-of-scope".
std::string status_name(Status s);

struct CheckReport {
  std::string id;
  Status status = Status::Pass;
  std::vector<std::string> witnesses;
  std::string ring;
  int max_word_length = 0;
  int max_arity = 0;
  int max_layers = 0;

  bool passed() const { return status == Status::Pass || status == Status::ApproximatePass; }
};

}  // namespace ainf
