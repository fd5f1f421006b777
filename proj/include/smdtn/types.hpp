#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace smdtn {

// Node ids are dense indices: locals first, then expresses, then event nodes.
enum class NodeId : std::uint32_t {};
// Message ids are assigned in creation order, so a lower id is an older message.
enum class MessageId : std::uint32_t {};

constexpr std::size_t index(NodeId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t index(MessageId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t i) { return static_cast<NodeId>(i); }
constexpr MessageId message_id(std::size_t i) { return static_cast<MessageId>(i); }

/// Base for every error the library raises. `code()` maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { io = 1, parse = 2, config = 2, runtime = 3 };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }
  int code() const { return static_cast<int>(kind_); }

 private:
  Kind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::io, what) {}
};

/// Malformed input text. `offset` is a byte offset into the input when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(Kind::parse, what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Structurally valid input that violates a dataset rule (missing geometry, empty collection, ...).
class DatasetError : public Error {
 public:
  explicit DatasetError(const std::string& what) : Error(Kind::parse, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Kind::config, what) {}
};

/// A failure while a simulation is running; the engine annotates these with the tick index.
class SimulationError : public Error {
 public:
  explicit SimulationError(const std::string& what) : Error(Kind::runtime, what) {}
};

/// A metric whose denominator is zero.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace smdtn
