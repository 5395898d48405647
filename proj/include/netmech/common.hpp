#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netmech {

using UnitId = std::uint32_t;

// One of the three per-unit variable layers.
enum class Layer { L, A, Y };

// Edge type joining same-layer variables of adjacent units.
//   Undirected: contagion
//   Bidirected: latent confounding
enum class Mechanism { Undirected, Bidirected, Unknown };

std::string_view to_string(Layer layer);
std::string_view to_string(Mechanism m);
char mechanism_code(Mechanism m);
std::optional<Mechanism> mechanism_from_code(char c);

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netmech
