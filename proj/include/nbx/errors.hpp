#pragma once

#include <stdexcept>
#include <string>

namespace nbx {

/// Base class for all domain errors. `name()` is the stable identifier that
/// surfaces in CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct MalformedInput : Error {
  explicit MalformedInput(const std::string& what) : Error("MalformedInput", what) {}
};

struct EmptyGraph : Error {
  explicit EmptyGraph(const std::string& what) : Error("EmptyGraph", what) {}
};

struct NotATree : Error {
  explicit NotATree(const std::string& what) : Error("NotATree", what) {}
};

struct AllTruncated : Error {
  explicit AllTruncated(const std::string& what) : Error("AllTruncated", what) {}
};

struct NoPairsAtDistance : Error {
  explicit NoPairsAtDistance(const std::string& what) : Error("NoPairsAtDistance", what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what) : Error("ShapeError", what) {}
};

struct IsolatedNode : Error {
  explicit IsolatedNode(const std::string& what) : Error("IsolatedNode", what) {}
};

struct NonFiniteLoss : Error {
  explicit NonFiniteLoss(const std::string& what) : Error("NonFiniteLoss", what) {}
};

struct DegenerateStart : Error {
  explicit DegenerateStart(const std::string& what) : Error("DegenerateStart", what) {}
};

struct SpectrumNotConverged : Error {
  explicit SpectrumNotConverged(const std::string& what) : Error("SpectrumNotConverged", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace nbx
