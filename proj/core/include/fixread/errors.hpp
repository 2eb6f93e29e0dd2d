#pragma once

#include <stdexcept>
#include <string>

namespace fixread {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- bundle I/O ----

// A JSONL/CSV record that cannot be decoded at all.
class malformed_record_error : public error {
 public:
  using error::error;
};

// A record decoded fine but breaks a bundle invariant (dangling ids,
// duplicate ids, bad counts...). Message names the offending record.
class invariant_violation_error : public error {
 public:
  using error::error;
};

// epochs.bin shorter than what epochs.idx promises.
class truncated_payload_error : public error {
 public:
  using error::error;
};

// ---- labeling ----

enum class parse_fail {
  missing_answer,        // no leading [0]/[1] marker
  missing_group_header,  // "First group"/"second group" section absent
  no_hrw_match,          // zero HRW phrases matched any corpus token
};

class parse_error : public error {
 public:
  parse_error(parse_fail kind, const std::string& msg) : error(msg), kind_(kind) {}
  parse_fail kind() const { return kind_; }

 private:
  parse_fail kind_;
};

// Transport-level provider failure (HTTP error, timeout, bad payload).
class transport_error : public error {
 public:
  using error::error;
};

// All retries spent on one sentence.
class provider_exhausted_error : public error {
 public:
  using error::error;
};

// ---- classification ----

class convergence_error : public error {
 public:
  convergence_error(const std::string& msg, long iterations)
      : error(msg), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

// ---- tool-level ----

class config_error : public error {
 public:
  using error::error;
};

// A pipeline stage was run before the stage that produces its input.
// Message names the command to run first.
class missing_artifact_error : public error {
 public:
  using error::error;
};

}  // namespace fixread
